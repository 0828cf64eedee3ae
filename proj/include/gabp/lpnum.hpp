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

#include <cstdint>
#include <string>
#include <vector>

#include "gabp/gabp.hpp"

namespace gabp {

// minimize c^T x subject to A x = b, x >= 0.
struct LpProblem {
  Vec c;   // n
  Mat A;   // p x n
  Vec b;   // p
  Vec x0;  // strictly feasible start

  void validate() const;
};

struct BarrierDirection {
  Vec dx;
  Vec y;
  bool used_fallback = false;  // double loop on A X^2 A^T
  int inner_rounds = 0;
};

// Newton direction of c^T x - mu sum log x_i at a feasible x. y solves
// A X^2 A^T y = A X^2 c - mu A X 1 + mu (b - A x) as the least-squares problem
// min |X A^T y - (X c - mu 1 + mu X^-1 (x0 - x))|, dx = (X^2 (A^T y - c) + mu x) / mu.
// The b - A x term restores feasibility lost to round-off; without x0 the
// GaBP route drops it.
BarrierDirection barrier_newton_direction(const LpProblem& lp, const Vec& x, double mu, const SolverConfig& cfg);

// Same direction from a dense factorization of the normal equations.
BarrierDirection barrier_newton_direction_dense(const LpProblem& lp, const Vec& x, double mu);

struct BarrierPathConfig {
  double mu0 = 1.0;
  double shrink = 0.5;
  int outer = 20;
  int max_newton = 50;
  double newton_tol = 1e-9;
  bool dense = false;
};

// Central-path points x(mu) for mu = mu0, mu0 * shrink, ...
std::vector<Vec> barrier_path(const LpProblem& lp, const BarrierPathConfig& pc, const SolverConfig& cfg);

struct PdDirection {
  Vec dx;
  Vec dy;
  Vec dz;
  bool used_fallback = false;
  int inner_rounds = 0;
};

// Symmetric 3x3-block Newton system in (dx, dy, dz) with the complementarity
// row scaled by Z^-1: [[0, A^T, I], [A, 0, 0], [I, 0, Z^-1 X]] and
// rhs (c - A^T y - z, b - A x, mu Z^-1 1 - x).
Mat primal_dual_system(const LpProblem& lp, const Vec& x, const Vec& y, const Vec& z, double mu, Vec* rhs);

// Solves the system above by GaBP after eliminating dz (serial schedule on
// [[-X^-1 Z, A^T], [A, 0]]); normal equations through the double loop if
// that fails.
PdDirection primal_dual_step(const LpProblem& lp, const Vec& x, const Vec& y, const Vec& z, double mu,
                             const SolverConfig& cfg);

// Closed-form elimination with a dense solve for dy.
PdDirection primal_dual_step_explicit(const LpProblem& lp, const Vec& x, const Vec& y, const Vec& z, double mu);

// maximize sum_j log f_j subject to R f <= c.
struct NumProblem {
  Mat R;  // m x n, 0/1
  Vec c;  // m

  int links() const { return static_cast<int>(R.rows()); }
  int flows() const { return static_cast<int>(R.cols()); }
  void validate() const;
};

// Each link joins a flow's route with probability route_len_mean / m_links
// (at least one link per flow); capacities uniform on [0.1, 1].
NumProblem generate_num(int n_flows, int m_links, double route_len_mean, std::uint64_t seed);

enum class NumInner { gabp, direct };

struct NumConfig {
  NumInner inner = NumInner::gabp;
  SolverConfig solver{Schedule::parallel, 1e-10, 5000};
  double gap_tol = 1e-4;
  int max_steps = 100;
  double theta = 10.0;
  double ls_alpha = 0.01;
  double ls_beta = 0.5;
  int fix_max_outer = 50;   // cap on the double-loop fallback
};

// Route that produced a Newton direction: augmented-KKT GaBP, the double loop
// on the reduced system, or a dense Cholesky of the reduced system.
enum class NumRoute { gabp = 0, double_loop = 1, dense = 2 };

struct NumTraceRow {
  int step;
  double gap;
  int inner_iters;
  double dual_residual;
  NumRoute fallback;
};

struct NumResult {
  Vec f;
  Vec lambda;
  Vec mu;
  std::vector<NumTraceRow> trace;
  bool converged = false;
  double utility = 0.0;
};

NumResult solve_num_pd(const NumProblem& np, const NumConfig& cfg);

struct DualDecompRow {
  int iter;
  double gap;  // dual value minus utility of the scaled-feasible f
  double dual;
};

struct DualDecompResult {
  Vec f;
  Vec lambda;
  std::vector<DualDecompRow> trace;
  bool converged = false;
};

DualDecompResult solve_num_dual_decomp(const NumProblem& np, double alpha, double gap_tol, int max_iters,
                                       double lambda_min = 1e-8);

// Dual function sum_j (-1 - log r_j^T lambda) + lambda^T c.
double num_dual_value(const NumProblem& np, const Vec& lambda);

std::string num_trace_csv(const std::vector<NumTraceRow>& rows);

}  // namespace gabp
