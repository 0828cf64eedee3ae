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

#include "gabp/stationary.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace gabp {

namespace {
constexpr double kDivergeBound = 1e12;
}

const char* to_string(StationaryMethod m) {
  switch (m) {
    case StationaryMethod::jacobi: return "jacobi";
    case StationaryMethod::gauss_seidel: return "gauss_seidel";
    case StationaryMethod::sor: return "sor";
  }
  return "jacobi";
}

StationaryProcess::StationaryProcess(const SymmetricSystem& sys, StationaryMethod method,
                                     double omega, Vec x0)
    : sys_(sys), method_(method), omega_(omega), x_(std::move(x0)), scratch_(sys.n()) {
  if (x_.size() != sys.n()) throw Error(ErrorCode::dimension, "start vector length differs");
  for (int i = 0; i < sys.n(); ++i)
    if (sys.diag(i) == 0.0)
      throw Error(ErrorCode::invalid_argument, "zero diagonal entry at index " + std::to_string(i));
  if (method == StationaryMethod::sor && !(omega > 0.0 && omega < 2.0))
    throw Error(ErrorCode::invalid_argument, "SOR omega must lie in (0,2)");
}

double StationaryProcess::step() {
  const int n = sys_.n();
  const Vec& b = sys_.b();
  double d = 0.0;
  if (method_ == StationaryMethod::jacobi) {
    for (int i = 0; i < n; ++i) {
      double s = b[i];
      for (const auto& nb : sys_.neighbors(i)) s -= nb.a * x_[nb.j];
      scratch_[i] = s / sys_.diag(i);
    }
    for (int i = 0; i < n; ++i) d = std::max(d, std::abs(scratch_[i] - x_[i]));
    std::swap(x_, scratch_);
    return d;
  }
  const double w = method_ == StationaryMethod::sor ? omega_ : 1.0;
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (const auto& nb : sys_.neighbors(i)) s -= nb.a * x_[nb.j];
    const double gs = s / sys_.diag(i);
    const double next = method_ == StationaryMethod::sor ? (1.0 - w) * x_[i] + w * gs : gs;
    d = std::max(d, std::abs(next - x_[i]));
    x_[i] = next;
  }
  return d;
}

bool StationaryProcess::diverged() const {
  return !x_.allFinite() || x_.cwiseAbs().maxCoeff() > kDivergeBound;
}

SolveReport solve_stationary(const SymmetricSystem& sys, const StationaryConfig& cfg) {
  if (cfg.eps <= 0.0) throw Error(ErrorCode::invalid_argument, "eps must be positive");
  if (cfg.max_rounds < 1) throw Error(ErrorCode::invalid_argument, "max_rounds must be at least 1");
  StationaryProcess p(sys, cfg.method, cfg.omega, cfg.x0 ? *cfg.x0 : sys.b());
  SolverConfig sc;
  sc.eps = cfg.eps;
  sc.max_rounds = cfg.max_rounds;
  if (cfg.accel == Accel::steffensen) return steffensen(p, sc);
  if (cfg.accel == Accel::aitken) return aitken_sliding(p, sc);

  SolveReport rep;
  for (int r = 1; r <= cfg.max_rounds; ++r) {
    double d = p.step();
    rep.rounds = r;
    rep.x = p.current();
    rep.trace.push_back({r, d, residual_per_equation(sys, rep.x)});
    if (p.diverged() || !std::isfinite(d)) {
      rep.status = Status::diverged;
      break;
    }
    if (d < cfg.eps) {
      rep.status = Status::converged;
      break;
    }
  }
  return rep;
}

int sor_iterations(const SymmetricSystem& sys, double omega, double eps, int max_rounds) {
  StationaryConfig c;
  c.method = StationaryMethod::sor;
  c.omega = omega;
  c.eps = eps;
  c.max_rounds = max_rounds;
  SolveReport r = solve_stationary(sys, c);
  return r.status == Status::converged ? r.rounds : max_rounds + 1;
}

double optimal_sor_omega(const SymmetricSystem& sys, double eps, int max_rounds) {
  const int n = sys.n();
  bool have_edges = sys.edge_count() > 0;
  if (!have_edges) return 1.0;
  Mat B = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (sys.diag(i) == 0.0) throw Error(ErrorCode::invalid_argument, "zero diagonal entry");
    for (const auto& nb : sys.neighbors(i)) B(i, nb.j) = -nb.a / sys.diag(i);
  }
  Eigen::EigenSolver<Mat> es(B, false);
  if (es.info() == Eigen::Success) {
    const auto& ev = es.eigenvalues();
    double rho = ev.cwiseAbs().maxCoeff();
    bool real = (ev.imag().cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, rho));
    if (real && rho < 1.0) {
      double w = 2.0 / (1.0 + std::sqrt(1.0 - rho * rho));
      // The closed form is exact for consistently ordered matrices only.
      if (sor_iterations(sys, w, eps, max_rounds) <= sor_iterations(sys, 1.0, eps, max_rounds))
        return w;
    }
  }
  // Golden-section search on the iteration count.
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 1e-3, hi = 2.0 - 1e-3;
  double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
  int fa = sor_iterations(sys, a, eps, max_rounds), fb = sor_iterations(sys, b, eps, max_rounds);
  for (int it = 0; it < 40 && hi - lo > 1e-4; ++it) {
    if (fa <= fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - g * (hi - lo);
      fa = sor_iterations(sys, a, eps, max_rounds);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + g * (hi - lo);
      fb = sor_iterations(sys, b, eps, max_rounds);
    }
  }
  double best = fa <= fb ? a : b;
  // Never worse than Gauss-Seidel.
  if (sor_iterations(sys, 1.0, eps, max_rounds) <= std::min(fa, fb)) return 1.0;
  return best;
}

}  // namespace gabp
