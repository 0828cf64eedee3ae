// Copyright 2026 The gabp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include "gabp/solvers.hpp"

namespace gabp {

// E(x) = sum_i w_ii (x_i - y_i)^2 + beta sum_{i<j} w_ij (x_i - x_j)^2,
// null priors dropping their first term.
struct RatingProblem {
  WeightedGraph graph;
  double beta = 1.0;
};

struct RatingSystem {
  SymmetricSystem sys;
  bool symmetrized = false;
};

// (diag(w_ii [y_i != null]) + beta L_w) x = diag(w_ii) y. A connected
// component without any prior mass is a degenerate error.
RatingSystem assemble_rating_system(const RatingProblem& p);

double rating_cost(const RatingProblem& p, const Vec& x);

struct RatingResult {
  Vec x;
  SolveReport report;
  bool symmetrized = false;  // weights averaged, or normal equations used
};

RatingResult rate(const RatingProblem& p, const MethodConfig& cfg);

// (I - alpha R)^-1 1 for a nonnegative R with row sums <= 1.
RatingResult spatial_rank(const Mat& R, double alpha, const SolverConfig& cfg);

// (1 - alpha)(I - alpha M)^-1 x for a column-stochastic M.
RatingResult personalized_pagerank(const Mat& M, const Vec& prior, double alpha, const SolverConfig& cfg);

// L^+ (rhs projected off the constants), via the Laplacian grounded at node 0
// and a final mean removal. With rhs = 1 the result is zero.
RatingResult eigen_projection(const WeightedGraph& g, const SolverConfig& cfg);
RatingResult eigen_projection(const WeightedGraph& g, const Vec& rhs, const SolverConfig& cfg);

// (I + L/2) x = 1, the stationary point of sum_i (x_i - 1)^2 + sum_{i<j} w_ij (x_i - x_j)^2 / 2.
RatingResult eigen_projection_full_cost(const WeightedGraph& g, const SolverConfig& cfg);

// (I - alpha B) x = rhs. Symmetric B is solved as is; a B that is diagonally
// similar to a symmetric matrix is symmetrized exactly; anything else goes
// through the normal equations with the double loop (flagged).
RatingResult solve_shifted(const Mat& B, double alpha, const Vec& rhs, const SolverConfig& cfg);

// Edge list "src dst [weight]" (tab or space separated, weight defaults to
// 1) and optional priors "node,value" with an empty or "null" value for a
// missing prior. Lines starting with '#' and a non-numeric header are skipped.
// The node count is one past the largest index seen.
WeightedGraph read_rating_graph(const std::string& edges_path, const std::string& priors_path = "");

// Dense nonnegative weight matrix W(src, dst) of the edge list.
Mat edge_matrix(const WeightedGraph& g);

}  // namespace gabp
