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

#include "gabp/convfix.hpp"
#include "gabp/solvers.hpp"

namespace gabp {

// [[I_k, S^T], [S, -Psi]] with observation [0_k; y]. Nodes 0..k-1 carry x,
// nodes k..k+n-1 the hidden z.
struct AugmentedSystem {
  Mat S;
  Vec psi;
  int k = 0;
  int n = 0;
  SymmetricSystem sys;
};

AugmentedSystem augment(const Mat& S, const Vec& psi, const Vec& y);

struct DetectResult {
  Vec x;
  SolveReport report;
  bool used_fix = false;
  int inner_total = 0;
};

// (S^T S + Psi)^-1 S^T y. Without the fix the augmented system is solved by
// GaBP; with it, S^T S + Psi is solved by the double loop.
DetectResult mmse_detect(const Mat& S, const Vec& y, const Vec& psi, const SolverConfig& cfg,
                         bool use_fix = false, const LoadingSpec& loading = {},
                         const OuterConfig& outer = {});

SymmetricSystem gold_r3();
SymmetricSystem gold_r4();

struct DecorrelateResult {
  Vec x;
  Vec bits;
  SolveReport report;
};

DecorrelateResult decorrelate(const SymmetricSystem& R, const MethodConfig& cfg);

// Random +-1/sqrt(n) spreading (unit-power columns), +-1 bits, Gaussian noise.
struct CdmaInstance {
  Mat S;
  Vec bits;
  Vec y;
  double sigma2 = 0.0;
};

CdmaInstance generate_cdma(int n, int k, double sigma2, std::uint64_t seed);

// Unit-diagonal S^T S + sigma^2 I with rhs S^T y.
SymmetricSystem cdma_correlation_system(const CdmaInstance& c);

struct KrrResult {
  Vec alpha;        // 2 lambda (K + lambda I)^-1 y
  Vec coef;         // (K + lambda I)^-1 y
  SolveReport report;
  bool loaded = false;
  int inner_total = 0;
};

Mat rbf_kernel(const Mat& points, double width);
Vec rbf_column(const Mat& points, const Vec& query, double width);

// With `loading` set and K + lambda I not strictly dominant, the double loop
// is used (its fixed point is the unloaded solution).
KrrResult krr_solve(const Mat& points, const Vec& y, double width, double lambda, bool loading,
                    const SolverConfig& cfg, bool bias = false);

// y^T (K + lambda I)^-1 k(q), from the coefficient vector of krr_solve.
double krr_predict(const Mat& points, const Vec& coef, double width, const Vec& q, bool bias = false);

}  // namespace gabp
