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

#include "gabp/convfix.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "gabp/diagnostics.hpp"

namespace gabp {

double gamma_star(const SymmetricSystem& sys) {
  for (int i = 0; i < sys.n(); ++i)
    if (std::abs(sys.diag(i) - 1.0) > 1e-12)
      throw Error(ErrorCode::normalization,
                  "gamma_star needs a unit diagonal; normalize first (index " + std::to_string(i) + ")");
  return walk_radius(sys) - 1.0;
}

Vec per_node_gamma_star(const SymmetricSystem& sys) {
  Vec g(sys.n());
  for (int i = 0; i < sys.n(); ++i) {
    double off = 0.0;
    for (const auto& nb : sys.neighbors(i)) off += std::abs(nb.a);
    g[i] = std::max(0.0, off - sys.diag(i));
  }
  return g;
}

Vec loading_vector(const SymmetricSystem& sys, const LoadingSpec& spec) {
  const int n = sys.n();
  switch (spec.mode) {
    case LoadingMode::scalar_gamma:
      if (spec.gamma < 0.0) throw Error(ErrorCode::invalid_argument, "loading gamma must be non-negative");
      return Vec::Constant(n, spec.gamma);
    case LoadingMode::custom_diag:
      if (spec.custom.size() != n) throw Error(ErrorCode::dimension, "loading vector length differs");
      if ((spec.custom.array() < 0.0).any()) throw Error(ErrorCode::invalid_argument, "negative loading entry");
      return spec.custom;
    case LoadingMode::per_node_gamma_star: {
      Vec g = Vec::Zero(n);
      for (int i = 0; i < n; ++i) {
        double off = 0.0;
        for (const auto& nb : sys.neighbors(i)) off += std::abs(nb.a);
        const double gap = off - sys.diag(i);
        if (gap >= 0.0) g[i] = gap + spec.margin * std::max(gap, 1e-2 * std::abs(sys.diag(i)));
      }
      return g;
    }
  }
  return Vec::Zero(n);
}

FixReport double_loop_solve(const SymmetricSystem& sys, const LoadingSpec& loading,
                            const SolverConfig& inner, const OuterConfig& outer) {
  if (outer.eps <= 0.0 || outer.max_outer < 1) throw Error(ErrorCode::invalid_argument, "bad outer settings");
  FixReport fr;
  fr.gamma = loading_vector(sys, loading);
  const bool unloaded = fr.gamma.cwiseAbs().maxCoeff() == 0.0;
  SymmetricSystem Jl = sys.with_diagonal(sys.diagonal() + fr.gamma);
  if (!unloaded && walk_radius(Jl) >= 1.0)
    throw Error(ErrorCode::invalid_argument, "loaded system is not walk-summable; increase the loading");

  GabpEngine eng(Jl, inner.schedule, Rule::sum_product, inner.threads);
  const int n = sys.n();
  Vec xhat = Vec::Zero(n);
  SolveReport& rep = fr.report;
  rep.status = Status::max_rounds;
  double prev_dx = INFINITY, first_dx = INFINITY;
  int growth = 0;
  for (int t = 1; t <= outer.max_outer; ++t) {
    eng.set_rhs(sys.b() + fr.gamma.cwiseProduct(xhat));
    int r = 0;
    bool ok = false;
    while (r < inner.max_rounds) {
      double d = eng.round();
      ++r;
      if (eng.diverged() || !std::isfinite(d))
        throw Error(ErrorCode::diverged, "inner GaBP diverged; the loading is insufficient");
      if (d < inner.eps) {
        ok = true;
        break;
      }
    }
    fr.inner_total += r;
    Vec x = eng.means();
    const double dx = (x - xhat).cwiseAbs().maxCoeff();
    xhat = x;
    fr.outer_trace.push_back({t, r, dx});
    rep.rounds = t;
    rep.x = xhat;
    rep.trace.push_back({t, dx, residual_per_equation(sys, xhat)});
    if (!ok) break;
    if (unloaded || dx < outer.eps) {
      rep.status = Status::converged;
      break;
    }
    if (t == 1) first_dx = dx;
    growth = dx > prev_dx ? growth + 1 : 0;
    // Round-off wobble near the fixed point is not growth.
    if (growth >= 5 && dx > first_dx)
      throw Error(ErrorCode::not_converged, "outer correction keeps growing; the matrix may not be positive definite");
    prev_dx = dx;
  }
  rep.P = eng.precisions();
  return fr;
}

FixReport single_loop_solve(const SymmetricSystem& sys, const LoadingSpec& loading, double s,
                            const SolverConfig& cfg) {
  if (!(s > 0.0 && s <= 1.0)) throw Error(ErrorCode::invalid_argument, "step s must lie in (0,1]");
  FixReport fr;
  fr.gamma = loading_vector(sys, loading);
  SymmetricSystem Jl = sys.with_diagonal(sys.diagonal() + fr.gamma);
  GabpEngine eng(Jl, cfg.schedule, Rule::sum_product, cfg.threads);
  Vec h = sys.b();
  Vec ht = h;
  Vec x_prev = eng.means();
  SolveReport& rep = fr.report;
  rep.status = Status::max_rounds;
  for (int t = 1; t <= cfg.max_rounds; ++t) {
    double d = eng.round();
    Vec x = eng.means();
    const double dx = (x - x_prev).cwiseAbs().maxCoeff();
    x_prev = x;
    ht = (1.0 - s) * ht + s * (h + fr.gamma.cwiseProduct(x));
    eng.set_rhs(ht);
    rep.rounds = t;
    rep.x = x;
    rep.trace.push_back({t, std::max(d, dx), residual_per_equation(sys, x)});
    fr.outer_trace.push_back({t, 1, dx});
    if (eng.diverged() || !std::isfinite(d)) {
      rep.status = Status::diverged;
      break;
    }
    if (std::max(d, dx) < cfg.eps) {
      rep.status = Status::converged;
      break;
    }
  }
  fr.inner_total = rep.rounds;
  rep.P = eng.precisions();
  return fr;
}

LsResult ls_convfix(const Mat& Jt, const Vec& ht, double gamma, const SolverConfig& cfg) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::invalid_argument, "gamma must be positive");
  const int n = static_cast<int>(Jt.rows()), k = static_cast<int>(Jt.cols());
  if (ht.size() != n) throw Error(ErrorCode::dimension, "rhs length differs from row count");
  Vec diag(k + n), b = Vec::Zero(k + n);
  diag.head(k).setOnes();
  diag.tail(n).setConstant(-gamma);
  b.tail(n) = ht;
  std::vector<Triplet> t;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < k; ++c)
      if (Jt(r, c) != 0.0) t.push_back({c, k + r, Jt(r, c)});
  SymmetricSystem aug(diag, b, t);

  LsResult out;
  Eigen::JacobiSVD<Mat> svd(Jt.cwiseAbs());
  const double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  out.rho = smax / std::sqrt(gamma);
  out.walk_summable = out.rho < 1.0;
  out.report = solve_gabp(aug, cfg);
  out.x = out.report.x.head(k);
  return out;
}

}  // namespace gabp
