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
#include <vector>

#include "gabp/gabp.hpp"

namespace gabp {

// x_k = A x_{k-1} + B u + w, z_k = H x_k + v, w ~ N(0, Q), v ~ N(0, R).
struct LdsModel {
  Mat A;  // d x d
  Mat H;  // m x d
  Mat Q;  // d x d, PSD
  Mat R;  // m x m, PD
  Mat B;  // d x c, optional
  Vec u;  // c, optional

  int d() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(H.rows()); }
  void validate() const;
};

// [[-P, A, 0], [A^T, Q, H^T], [0, H, R]], size 2d + m.
Mat build_E(const Mat& P_prev, const LdsModel& model);

struct KalmanState {
  Vec x;
  Mat P;
};

// Textbook predict/update in dense arithmetic.
KalmanState kalman_step_classical(const Vec& x_prev, const Mat& P_prev, const Vec& z, const LdsModel& model);

struct KalmanGabpInfo {
  int rounds = 0;  // GaBP rounds summed over columns
  double asymmetry = 0.0;  // max |P - P^T| before symmetrization
  int fixed_columns = 0;   // columns solved by the double loop after GaBP failed
};

// P_k from two reductions: P^- = A P A^T + Q, then
// P_k = P^- - P^- H^T X with (H P^- H^T + R) X = H P^-, the columns of X
// solved by GaBP on one warm-started message state.
Mat kalman_cov_step_gabp(const Mat& P_prev, const LdsModel& model, const SolverConfig& cfg,
                         KalmanGabpInfo* info = nullptr);

// Mean from the gain P_k H^T R^-1 with the GaBP covariance.
KalmanState kalman_step_gabp(const Vec& x_prev, const Mat& P_prev, const Vec& z, const LdsModel& model,
                             const SolverConfig& cfg, KalmanGabpInfo* info = nullptr);

// Random stable model: A scaled to spectral norm 0.95, SPD Q and R.
LdsModel random_lds(int d, int m, std::uint64_t seed);

struct KalmanDemoRow {
  int step;
  double p_diff;  // max |P_gabp - P_classical|
  double x_diff;
  int rounds;
};

std::vector<KalmanDemoRow> kalman_demo(int d, int m, int steps, std::uint64_t seed, const SolverConfig& cfg);

}  // namespace gabp
