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

#include "gabp/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace gabp {

int bound_rounds(double gamma, double eps) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw Error(ErrorCode::invalid_argument, "gamma must lie in (0,1)");
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::invalid_argument, "eps must lie in (0,1)");
  double t = std::log(eps) / std::log(gamma);
  double r = std::round(t);
  if (std::abs(t - r) <= 1e-12 * std::max(1.0, r)) return static_cast<int>(r);
  return static_cast<int>(std::ceil(t));
}

double walk_radius(const SymmetricSystem& sys) {
  SymmetricSystem nrm = normalize_unit_diag(sys);
  const int n = nrm.n();
  if (n <= 64) return spectral_radius(abs_offdiag_dense(nrm));
  // Sparse power iteration on |R|^2; |R| is symmetric and nonnegative.
  auto apply = [&](const Vec& x) {
    Vec y = Vec::Zero(n);
    for (int i = 0; i < n; ++i)
      for (const auto& nb : nrm.neighbors(i)) y[i] += std::abs(nb.a) * x[nb.j];
    return y;
  };
  Vec x = Vec::Ones(n) / std::sqrt(static_cast<double>(n));
  double est = 0.0;
  for (int it = 0; it < 10 * n; ++it) {
    Vec z = apply(apply(x));
    double nz = z.norm();
    if (nz == 0.0) return 0.0;
    double next = std::sqrt(x.dot(z));
    if (it > 0 && std::abs(next - est) <= 1e-9 * std::max(1.0, next)) return next;
    est = next;
    x = z / nz;
  }
  if (n > 3000) return est;
  Eigen::SelfAdjointEigenSolver<Mat> es(abs_offdiag_dense(nrm), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

ConvergenceReport check_conditions(const SymmetricSystem& sys, double eps) {
  ConvergenceReport r;
  r.dominance = dominance_class(sys);
  r.strict_dd = r.dominance == DominanceClass::strict;
  r.rho_abs = walk_radius(sys);
  r.walk_summable = r.rho_abs < 1.0;
  if (sys.edge_count() == 0) {
    r.bound_rounds = 1;
    return r;
  }
  if (r.strict_dd) {
    double g = 0.0;
    for (int i = 0; i < sys.n(); ++i) {
      const auto& nbs = sys.neighbors(i);
      if (nbs.empty()) continue;
      double off = 0.0;
      for (const auto& nb : nbs) off += std::abs(nb.a);
      const double eps_i = std::abs(sys.diag(i)) - off;
      const double deg = static_cast<double>(nbs.size());
      for (const auto& nb : nbs) g = std::max(g, 1.0 / (1.0 + eps_i / (std::abs(nb.a) * deg)));
    }
    r.gamma = g;
    r.bound_rounds = bound_rounds(g, eps);
  }
  return r;
}

std::string to_key_values(const ConvergenceReport& r) {
  std::ostringstream os;
  char buf[64];
  os << "strict_dd=" << (r.strict_dd ? "true" : "false") << "\n";
  os << "dominance=" << to_string(r.dominance) << "\n";
  std::snprintf(buf, sizeof buf, "%.10g", r.rho_abs);
  os << "rho_abs=" << buf << "\n";
  os << "walk_summable=" << (r.walk_summable ? "true" : "false") << "\n";
  if (r.gamma) {
    std::snprintf(buf, sizeof buf, "%.10g", *r.gamma);
    os << "gamma=" << buf << "\n";
  } else {
    os << "gamma=none\n";
  }
  if (r.bound_rounds) os << "bound_rounds=" << *r.bound_rounds << "\n";
  else os << "bound_rounds=none\n";
  return os.str();
}

}  // namespace gabp
