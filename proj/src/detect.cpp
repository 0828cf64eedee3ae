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

#include "gabp/detect.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace gabp {

AugmentedSystem augment(const Mat& S, const Vec& psi, const Vec& y) {
  const int n = static_cast<int>(S.rows()), k = static_cast<int>(S.cols());
  if (psi.size() != n || y.size() != n) throw Error(ErrorCode::dimension, "noise or observation length differs from row count");
  for (int i = 0; i < n; ++i)
    if (psi[i] < 0.0) throw Error(ErrorCode::invalid_argument, "negative noise entry at index " + std::to_string(i));
  AugmentedSystem a;
  a.S = S;
  a.psi = psi;
  a.k = k;
  a.n = n;
  Vec diag(k + n), b = Vec::Zero(k + n);
  diag.head(k).setOnes();
  diag.tail(n) = -psi;
  b.tail(n) = y;
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(n) * k);
  for (int c = 0; c < k; ++c)
    for (int r = 0; r < n; ++r)
      if (S(r, c) != 0.0) t.push_back({c, k + r, S(r, c)});
  a.sys = SymmetricSystem(diag, b, t);
  return a;
}

DetectResult mmse_detect(const Mat& S, const Vec& y, const Vec& psi, const SolverConfig& cfg,
                         bool use_fix, const LoadingSpec& loading, const OuterConfig& outer) {
  DetectResult out;
  const int k = static_cast<int>(S.cols());
  if (!use_fix) {
    AugmentedSystem a = augment(S, psi, y);
    SolverConfig c = cfg;
    c.allow_zero_diagonal = true;
    out.report = solve_gabp(a.sys, c);
    out.x = out.report.x.head(k);
    out.inner_total = out.report.rounds;
    return out;
  }
  if (psi.size() != S.rows() || y.size() != S.rows()) throw Error(ErrorCode::dimension, "noise or observation length differs from row count");
  const bool all_zero = (psi.array() == 0.0).all();
  const bool all_pos = (psi.array() > 0.0).all();
  if (!all_zero && !all_pos)
    throw Error(ErrorCode::invalid_argument, "the fixed path needs a noise vector that is all zero or all positive");
  Mat C;
  Vec rhs;
  if (all_zero) {
    C = S.transpose() * S;
    rhs = S.transpose() * y;
  } else {
    Vec w = psi.cwiseInverse();
    C = S.transpose() * w.asDiagonal() * S;
    C.diagonal().array() += 1.0;
    rhs = S.transpose() * w.cwiseProduct(y);
  }
  SymmetricSystem sys = SymmetricSystem::from_dense(C, rhs, 1e-12 * std::max(1.0, C.cwiseAbs().maxCoeff()));
  FixReport fr = double_loop_solve(sys, loading, cfg, outer);
  out.report = fr.report;
  out.x = fr.report.x;
  out.used_fix = true;
  out.inner_total = fr.inner_total;
  return out;
}

SymmetricSystem gold_r3() {
  Mat R(3, 3);
  R << 7, -1, 3, -1, 7, -5, 3, -5, 7;
  return SymmetricSystem::from_dense(R / 7.0, Vec::Ones(3));
}

SymmetricSystem gold_r4() {
  Mat R(4, 4);
  R << 7, -1, 3, 3, -1, 7, 3, -1, 3, 3, 7, -1, 3, -1, -1, 7;
  return SymmetricSystem::from_dense(R / 7.0, Vec::Ones(4));
}

DecorrelateResult decorrelate(const SymmetricSystem& R, const MethodConfig& cfg) {
  DecorrelateResult out;
  out.report = solve(R, cfg);
  out.x = out.report.x;
  out.bits = out.x.unaryExpr([](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); });
  return out;
}

CdmaInstance generate_cdma(int n, int k, double sigma2, std::uint64_t seed) {
  if (n < 1 || k < 1) throw Error(ErrorCode::invalid_argument, "CDMA sizes must be positive");
  if (sigma2 < 0.0) throw Error(ErrorCode::invalid_argument, "noise variance must be non-negative");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::normal_distribution<double> noise(0.0, std::sqrt(sigma2));
  CdmaInstance c;
  c.sigma2 = sigma2;
  c.S.resize(n, k);
  const double amp = 1.0 / std::sqrt(static_cast<double>(n));
  for (int col = 0; col < k; ++col)
    for (int r = 0; r < n; ++r) c.S(r, col) = coin(rng) ? amp : -amp;
  c.bits.resize(k);
  for (int i = 0; i < k; ++i) c.bits[i] = coin(rng) ? 1.0 : -1.0;
  c.y = c.S * c.bits;
  if (sigma2 > 0.0)
    for (int r = 0; r < n; ++r) c.y[r] += noise(rng);
  return c;
}

SymmetricSystem cdma_correlation_system(const CdmaInstance& c) {
  Mat C = c.S.transpose() * c.S;
  // Orthogonal codes leave round-off entries that would become spurious edges.
  const double drop = 64.0 * std::numeric_limits<double>::epsilon() * C.diagonal().maxCoeff();
  C = C.unaryExpr([drop](double v) { return std::abs(v) < drop ? 0.0 : v; });
  C.diagonal().array() += c.sigma2;
  Vec rhs = c.S.transpose() * c.y;
  return normalize_unit_diag(SymmetricSystem::from_dense(C, rhs, 1e-12));
}

Mat rbf_kernel(const Mat& points, double width) {
  if (!(width > 0.0)) throw Error(ErrorCode::invalid_argument, "kernel width must be positive");
  const int N = static_cast<int>(points.rows());
  Mat K(N, N);
  const double s = 1.0 / (2.0 * width * width);
  for (int i = 0; i < N; ++i) {
    K(i, i) = 1.0;
    for (int j = i + 1; j < N; ++j) {
      double v = std::exp(-(points.row(i) - points.row(j)).squaredNorm() * s);
      K(i, j) = K(j, i) = v;
    }
  }
  return K;
}

Vec rbf_column(const Mat& points, const Vec& query, double width) {
  const int N = static_cast<int>(points.rows());
  if (query.size() != points.cols()) throw Error(ErrorCode::dimension, "query dimension differs");
  Vec k(N);
  const double s = 1.0 / (2.0 * width * width);
  for (int i = 0; i < N; ++i) k[i] = std::exp(-(points.row(i).transpose() - query).squaredNorm() * s);
  return k;
}

KrrResult krr_solve(const Mat& points, const Vec& y, double width, double lambda, bool loading,
                    const SolverConfig& cfg, bool bias) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::invalid_argument, "lambda must be positive");
  const int N = static_cast<int>(points.rows());
  if (y.size() != N) throw Error(ErrorCode::dimension, "label count differs from point count");
  Mat K = rbf_kernel(points, width);
  if (bias) {
    // Constant extra feature 1/N appended to every pattern.
    const double tau = 1.0 / N;
    K.array() += tau * tau;
  }
  K.diagonal().array() += lambda;
  SymmetricSystem sys = SymmetricSystem::from_dense(K, y, 1e-15);
  KrrResult out;
  if (loading && dominance_class(sys) != DominanceClass::strict) {
    FixReport fr = double_loop_solve(sys, LoadingSpec{}, cfg, OuterConfig{cfg.eps, 1000});
    out.report = fr.report;
    out.loaded = true;
    out.inner_total = fr.inner_total;
  } else {
    out.report = solve_gabp(sys, cfg);
    out.inner_total = out.report.rounds;
  }
  out.coef = out.report.x;
  out.alpha = 2.0 * lambda * out.coef;
  return out;
}

double krr_predict(const Mat& points, const Vec& coef, double width, const Vec& q, bool bias) {
  Vec k = rbf_column(points, q, width);
  if (bias) {
    const double tau = 1.0 / points.rows();
    k.array() += tau * tau;
  }
  return coef.dot(k);
}

}  // namespace gabp
