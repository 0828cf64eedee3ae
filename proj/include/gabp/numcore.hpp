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

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gabp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ErrorCode {
  invalid_argument = 1,
  dimension,
  singular_subgraph,
  normalization,
  not_converged,
  diverged,
  io,
  parse,
  duplicate_entry,
  asymmetric,
  degenerate,
  line_search,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised when P_{i\j} vanishes while computing the message i -> j.
class SingularSubgraph : public Error {
 public:
  SingularSubgraph(int i, int j);
  int i, j;
};

// Iterative estimate that did not settle; carries the last estimate.
class NotConverged : public Error {
 public:
  NotConverged(const std::string& what, double best)
      : Error(ErrorCode::not_converged, what), best(best) {}
  double best;
};

struct Triplet {
  int i;
  int j;
  double v;
};

struct Neighbor {
  int j;
  double a;
};

// Square symmetric matrix kept as a dense diagonal plus per-node adjacency
// lists (ascending neighbor index), together with the right-hand side b.
class SymmetricSystem {
 public:
  SymmetricSystem() = default;
  // Off-diagonal entries are given once per unordered pair and mirrored.
  // Zero values are dropped. A pair listed twice is a duplicate_entry error.
  SymmetricSystem(Vec diag, Vec b, const std::vector<Triplet>& offdiag);

  // Builds from a dense matrix; |A_ij - A_ji| must not exceed tol.
  static SymmetricSystem from_dense(const Mat& A, const Vec& b, double tol = 0.0);

  int n() const { return static_cast<int>(diag_.size()); }
  double diag(int i) const { return diag_[i]; }
  const Vec& diagonal() const { return diag_; }
  const Vec& b() const { return b_; }
  const std::vector<Neighbor>& neighbors(int i) const { return adj_[i]; }
  std::size_t edge_count() const { return edges_; }
  double coeff(int i, int j) const;

  Mat dense() const;
  Vec multiply(const Vec& x) const;
  std::vector<Triplet> upper_triplets() const;

  SymmetricSystem with_b(Vec b) const;
  SymmetricSystem with_diagonal(Vec diag) const;

 private:
  Vec diag_;
  Vec b_;
  std::vector<std::vector<Neighbor>> adj_;
  std::size_t edges_ = 0;
};

enum class DominanceClass { none, weak, strict, irreducible };

const char* to_string(DominanceClass c);

struct WeightedEdge {
  int src;
  int dst;
  double w;
};

struct WeightedGraph {
  int n = 0;
  std::vector<WeightedEdge> edges;
  Vec node_weight;                          // w_ii, empty means all ones
  std::vector<std::optional<double>> prior; // y_i, nullopt means null

  void validate() const;
  double node_w(int i) const { return node_weight.size() ? node_weight[i] : 1.0; }
};

// Largest eigenvalue magnitude. Dense eigensolver for n <= 64, power
// iteration (10n cap, random positive start) above that.
double spectral_radius(const Mat& M, double tol = 1e-6);

DominanceClass dominance_class(const SymmetricSystem& sys);

SymmetricSystem normalize_unit_diag(const SymmetricSystem& sys);

double residual_per_equation(const SymmetricSystem& sys, const Vec& x);

// Dense symmetric weights. An edge listed in one direction only counts for
// both; pairs listed both ways with different weights are averaged and
// *symmetrized is set.
Mat symmetric_weights(const WeightedGraph& g, bool* symmetrized = nullptr);

// D - W over symmetric_weights.
Mat weighted_laplacian(const WeightedGraph& g);

SymmetricSystem poisson2d(int p);

// |I - A| for a unit-diagonal system, as a dense matrix.
Mat abs_offdiag_dense(const SymmetricSystem& sys);

bool connected(const SymmetricSystem& sys);

// Matrix Market I/O.
struct MtxData {
  int rows = 0;
  int cols = 0;
  bool symmetric = false;
  bool array = false;
  std::vector<Triplet> entries;  // zero-based, as stored in the file
};

MtxData read_mtx(const std::string& path);
SymmetricSystem read_matrix_market(const std::string& path, const Vec& b);
SymmetricSystem read_matrix_market(const std::string& path);  // b = 0
Mat read_dense_mtx(const std::string& path);
Vec read_vector_mtx(const std::string& path);
void write_matrix_market(const SymmetricSystem& sys, const std::string& path);
void write_dense_mtx(const Mat& M, const std::string& path);
void write_vector_mtx(const Vec& v, const std::string& path);

}  // namespace gabp
