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

#include <vector>

#include "gabp/gabp.hpp"

namespace gabp {

enum class LoadingMode { scalar_gamma, per_node_gamma_star, custom_diag };

struct LoadingSpec {
  LoadingMode mode = LoadingMode::per_node_gamma_star;
  double gamma = 0.0;  // scalar_gamma: Gamma = gamma I
  Vec custom;          // custom_diag: Gamma given directly
  double margin = 0.1; // relative margin above the critical loading
};

// rho(|R|) - 1 for a unit-diagonal J = I - R.
double gamma_star(const SymmetricSystem& sys);

// max(0, sum_j |J_ij| - J_ii) per node.
Vec per_node_gamma_star(const SymmetricSystem& sys);

// Diagonal Gamma selected by a LoadingSpec. Per-node loading adds
// margin * max(gap_i, 1e-2 |J_ii|) on rows that are not strictly dominant.
Vec loading_vector(const SymmetricSystem& sys, const LoadingSpec& spec);

struct OuterRow {
  int outer;
  int inner_rounds;
  double dx;
};

struct FixReport {
  SolveReport report;  // x, rounds = outer iterations, status
  int inner_total = 0;
  std::vector<OuterRow> outer_trace;
  Vec gamma;
};

struct OuterConfig {
  double eps = 1e-3;
  int max_outer = 500;
};

// x+ = (J + Gamma)^-1 (h + Gamma x); inner solves by GaBP warm-started across
// outer steps (the precision messages do not depend on the right-hand side).
FixReport double_loop_solve(const SymmetricSystem& sys, const LoadingSpec& loading,
                            const SolverConfig& inner = {}, const OuterConfig& outer = {});

// One GaBP round per damped update h(t) = (1-s) h(t-1) + s (h + Gamma x(t)).
FixReport single_loop_solve(const SymmetricSystem& sys, const LoadingSpec& loading, double s = 0.5,
                            const SolverConfig& cfg = {});

struct LsResult {
  Vec x;
  bool walk_summable = false;  // sigma_max(|J~|) < sqrt(gamma)
  double rho = 0.0;            // sigma_max(|J~|) / sqrt(gamma)
  SolveReport report;
};

// (J~^T J~ + gamma I)^-1 J~^T h~ from the augmented [[I, J~^T], [J~, -gamma I]].
LsResult ls_convfix(const Mat& Jt, const Vec& ht, double gamma, const SolverConfig& cfg = {});

}  // namespace gabp
