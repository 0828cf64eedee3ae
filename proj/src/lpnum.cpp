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

#include "gabp/lpnum.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include <Eigen/Cholesky>

#include "gabp/convfix.hpp"
#include "gabp/detect.hpp"

namespace gabp {

void LpProblem::validate() const {
  const int n = static_cast<int>(c.size());
  if (A.cols() != n || b.size() != A.rows() || (x0.size() && x0.size() != n))
    throw Error(ErrorCode::dimension, "LP dimensions differ");
  if (x0.size()) {
    if ((x0.array() <= 0.0).any()) throw Error(ErrorCode::invalid_argument, "start point is not strictly positive");
    if ((A * x0 - b).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, b.cwiseAbs().maxCoeff()))
      throw Error(ErrorCode::invalid_argument, "start point violates A x = b");
  }
}

namespace {

void check_positive(const Vec& v, const char* name) {
  if ((v.array() <= 0.0).any() || !v.allFinite())
    throw Error(ErrorCode::invalid_argument, std::string(name) + " must be strictly positive");
}

// The mu (b - A x) term makes A dx = b - A x, so round-off in y, amplified
// by 1/mu in dx_from_y, does not accumulate as infeasibility.
Vec normal_rhs(const LpProblem& lp, const Vec& x, double mu) {
  Vec x2 = x.cwiseProduct(x);
  return lp.A * (x2.cwiseProduct(lp.c)) - mu * (lp.A * x) + mu * (lp.b - lp.A * x);
}

Vec dx_from_y(const LpProblem& lp, const Vec& x, double mu, const Vec& y) {
  Vec x2 = x.cwiseProduct(x);
  return (x2.cwiseProduct(lp.A.transpose() * y - lp.c) + mu * x) / mu;
}

FixReport fix_solve(const Mat& N, const Vec& rhs, const SolverConfig& cfg) {
  Mat Ns = 0.5 * (N + N.transpose());
  SymmetricSystem sys = SymmetricSystem::from_dense(Ns, rhs);
  SolverConfig inner = cfg;
  inner.accel = Accel::none;
  inner.allow_zero_diagonal = false;
  FixReport fr = double_loop_solve(sys, LoadingSpec{}, inner, OuterConfig{cfg.eps, 20000});
  if (fr.report.status != Status::converged)
    throw Error(ErrorCode::not_converged, "double-loop fallback did not converge");
  return fr;
}

}  // namespace

BarrierDirection barrier_newton_direction(const LpProblem& lp, const Vec& x, double mu, const SolverConfig& cfg) {
  lp.validate();
  check_positive(x, "x");
  if (!(mu > 0.0)) throw Error(ErrorCode::invalid_argument, "mu must be positive");
  const int n = static_cast<int>(x.size());
  if (n != lp.c.size()) throw Error(ErrorCode::dimension, "x length differs from c");
  Mat F = x.asDiagonal() * lp.A.transpose();
  Vec g = x.cwiseProduct(lp.c) - mu * Vec::Ones(n);
  // F^T g gains mu (b - A x) through the feasible start: A X X^-1 (x0 - x).
  if (lp.x0.size()) g += mu * (lp.x0 - x).cwiseQuotient(x);

  BarrierDirection out;
  SolverConfig c = cfg;
  c.schedule = Schedule::serial;
  c.accel = Accel::none;
  try {
    DetectResult r = mmse_detect(F, g, Vec::Zero(n), c);
    out.inner_rounds = r.inner_total;
    if (r.report.status == Status::converged) {
      out.y = r.x;
      out.dx = dx_from_y(lp, x, mu, out.y);
      return out;
    }
  } catch (const SingularSubgraph&) {
  }
  Mat N = lp.A * x.cwiseProduct(x).asDiagonal() * lp.A.transpose();
  FixReport fr = fix_solve(N, normal_rhs(lp, x, mu), cfg);
  out.used_fallback = true;
  out.inner_rounds += fr.inner_total;
  out.y = fr.report.x;
  out.dx = dx_from_y(lp, x, mu, out.y);
  return out;
}

BarrierDirection barrier_newton_direction_dense(const LpProblem& lp, const Vec& x, double mu) {
  lp.validate();
  check_positive(x, "x");
  if (!(mu > 0.0)) throw Error(ErrorCode::invalid_argument, "mu must be positive");
  Mat N = lp.A * x.cwiseProduct(x).asDiagonal() * lp.A.transpose();
  BarrierDirection out;
  out.y = N.ldlt().solve(normal_rhs(lp, x, mu));
  out.dx = dx_from_y(lp, x, mu, out.y);
  return out;
}

std::vector<Vec> barrier_path(const LpProblem& lp, const BarrierPathConfig& pc, const SolverConfig& cfg) {
  lp.validate();
  if (!lp.x0.size()) throw Error(ErrorCode::invalid_argument, "barrier path needs a start point");
  Vec x = lp.x0;
  double mu = pc.mu0;
  std::vector<Vec> path;
  for (int o = 0; o < pc.outer; ++o) {
    for (int it = 0; it < pc.max_newton; ++it) {
      Vec dx = pc.dense ? barrier_newton_direction_dense(lp, x, mu).dx : barrier_newton_direction(lp, x, mu, cfg).dx;
      double tmax = 1.0;
      for (int i = 0; i < x.size(); ++i)
        if (dx[i] < 0.0) tmax = std::min(tmax, -0.99 * x[i] / dx[i]);
      x += tmax * dx;
      if (dx.cwiseQuotient(x).cwiseAbs().maxCoeff() < pc.newton_tol) break;
    }
    path.push_back(x);
    mu *= pc.shrink;
  }
  return path;
}

Mat primal_dual_system(const LpProblem& lp, const Vec& x, const Vec& y, const Vec& z, double mu, Vec* rhs) {
  lp.validate();
  check_positive(x, "x");
  check_positive(z, "z");
  const int n = static_cast<int>(lp.c.size()), p = static_cast<int>(lp.A.rows());
  if (x.size() != n || z.size() != n || y.size() != p) throw Error(ErrorCode::dimension, "iterate dimensions differ");
  Mat K = Mat::Zero(2 * n + p, 2 * n + p);
  K.block(0, n, n, p) = lp.A.transpose();
  K.block(0, n + p, n, n) = Mat::Identity(n, n);
  K.block(n, 0, p, n) = lp.A;
  K.block(n + p, 0, n, n) = Mat::Identity(n, n);
  K.block(n + p, n + p, n, n) = x.cwiseQuotient(z).asDiagonal();
  if (rhs) {
    rhs->resize(2 * n + p);
    rhs->segment(0, n) = lp.c - lp.A.transpose() * y - z;
    rhs->segment(n, p) = lp.b - lp.A * x;
    rhs->segment(n + p, n) = mu * z.cwiseInverse() - x;
  }
  return K;
}

namespace {

Vec dz_from_dx(const Vec& x, const Vec& z, double mu, const Vec& dx) {
  return (mu * Vec::Ones(x.size()) - x.cwiseProduct(z) - z.cwiseProduct(dx)).cwiseQuotient(x);
}

}  // namespace

PdDirection primal_dual_step(const LpProblem& lp, const Vec& x, const Vec& y, const Vec& z, double mu,
                             const SolverConfig& cfg) {
  primal_dual_system(lp, x, y, z, mu, nullptr);
  const int n = static_cast<int>(lp.c.size()), p = static_cast<int>(lp.A.rows());
  Vec r1 = lp.c - lp.A.transpose() * y - mu * x.cwiseInverse();
  Vec rp = lp.b - lp.A * x;
  PdDirection out;

  Vec diag(n + p), b(n + p);
  diag.head(n) = -z.cwiseQuotient(x);
  diag.tail(p).setZero();
  b.head(n) = r1;
  b.tail(p) = rp;
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < p; ++r)
      if (lp.A(r, i) != 0.0) t.push_back({i, n + r, lp.A(r, i)});
  SymmetricSystem sys(diag, b, t);
  SolverConfig c = cfg;
  c.schedule = Schedule::serial;
  c.accel = Accel::none;
  c.allow_zero_diagonal = true;
  try {
    SolveReport rep = solve_gabp(sys, c);
    out.inner_rounds = rep.rounds;
    if (rep.status == Status::converged) {
      out.dx = rep.x.head(n);
      out.dy = rep.x.tail(p);
      out.dz = dz_from_dx(x, z, mu, out.dx);
      return out;
    }
  } catch (const SingularSubgraph&) {
  }
  // A D A^T dy = rp + A D r1 with D = X Z^-1.
  Vec D = x.cwiseQuotient(z);
  Mat N = lp.A * D.asDiagonal() * lp.A.transpose();
  FixReport fr = fix_solve(N, rp + lp.A * D.cwiseProduct(r1), cfg);
  out.used_fallback = true;
  out.inner_rounds += fr.inner_total;
  out.dy = fr.report.x;
  out.dx = D.cwiseProduct(lp.A.transpose() * out.dy - r1);
  out.dz = dz_from_dx(x, z, mu, out.dx);
  return out;
}

PdDirection primal_dual_step_explicit(const LpProblem& lp, const Vec& x, const Vec& y, const Vec& z, double mu) {
  primal_dual_system(lp, x, y, z, mu, nullptr);
  Vec r1 = lp.c - lp.A.transpose() * y - mu * x.cwiseInverse();
  Vec rp = lp.b - lp.A * x;
  Vec D = x.cwiseQuotient(z);
  Mat N = lp.A * D.asDiagonal() * lp.A.transpose();
  PdDirection out;
  out.dy = N.ldlt().solve(rp + lp.A * D.cwiseProduct(r1));
  out.dx = D.cwiseProduct(lp.A.transpose() * out.dy - r1);
  out.dz = dz_from_dx(x, z, mu, out.dx);
  return out;
}

void NumProblem::validate() const {
  if (c.size() != R.rows()) throw Error(ErrorCode::dimension, "capacity length differs from link count");
  if ((c.array() <= 0.0).any()) throw Error(ErrorCode::invalid_argument, "capacities must be positive");
  for (int i = 0; i < R.rows(); ++i)
    for (int j = 0; j < R.cols(); ++j)
      if (R(i, j) != 0.0 && R(i, j) != 1.0) throw Error(ErrorCode::invalid_argument, "routing matrix entries must be 0 or 1");
  for (int j = 0; j < R.cols(); ++j)
    if (R.col(j).sum() == 0.0) throw Error(ErrorCode::invalid_argument, "flow " + std::to_string(j) + " crosses no link");
}

NumProblem generate_num(int n_flows, int m_links, double route_len_mean, std::uint64_t seed) {
  if (n_flows < 1 || m_links < 1) throw Error(ErrorCode::invalid_argument, "flow and link counts must be positive");
  if (!(route_len_mean > 0.0)) throw Error(ErrorCode::invalid_argument, "route length must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0), cap(0.1, 1.0);
  std::uniform_int_distribution<int> pick(0, m_links - 1);
  const double prob = std::min(1.0, route_len_mean / m_links);
  NumProblem np;
  np.R = Mat::Zero(m_links, n_flows);
  for (int j = 0; j < n_flows; ++j) {
    bool any = false;
    for (int i = 0; i < m_links; ++i)
      if (U(rng) < prob) {
        np.R(i, j) = 1.0;
        any = true;
      }
    if (!any) np.R(pick(rng), j) = 1.0;
  }
  np.c.resize(m_links);
  for (int i = 0; i < m_links; ++i) np.c[i] = cap(rng);
  return np;
}

namespace {

struct NumResidual {
  Vec r1, r2, r3;
  double norm() const {
    return std::sqrt(r1.squaredNorm() + r2.squaredNorm() + r3.squaredNorm());
  }
};

NumResidual num_residual(const NumProblem& np, const Vec& f, const Vec& lam, const Vec& mu, double t) {
  NumResidual r;
  Vec s = np.c - np.R * f;
  r.r1 = -f.cwiseInverse() + np.R.transpose() * lam - mu;
  r.r2 = lam.cwiseProduct(s).array() - 1.0 / t;
  r.r3 = mu.cwiseProduct(f).array() - 1.0 / t;
  return r;
}

double step_to_boundary(const Vec& v, const Vec& dv) {
  double a = INFINITY;
  for (int i = 0; i < v.size(); ++i)
    if (dv[i] < 0.0) a = std::min(a, -v[i] / dv[i]);
  return a;
}

}  // namespace

NumResult solve_num_pd(const NumProblem& np, const NumConfig& cfg) {
  np.validate();
  const int m = np.links(), n = np.flows();
  NumResult res;
  double gam = INFINITY;
  Vec load = np.R * Vec::Ones(n);
  for (int i = 0; i < m; ++i)
    if (load[i] > 0.0) gam = std::min(gam, 0.9 * np.c[i] / load[i]);
  Vec f = Vec::Constant(n, gam);
  Vec lam = Vec::Ones(m), mu = Vec::Ones(n);
  const Mat& R = np.R;

  for (int step = 1; step <= cfg.max_steps; ++step) {
    Vec s = np.c - R * f;
    const double eta = s.dot(lam) + f.dot(mu);
    const double t = cfg.theta * (2.0 * n) / eta;
    NumResidual r = num_residual(np, f, lam, mu, t);

    Vec rhs1 = -r.r1 - r.r3.cwiseQuotient(f);
    Vec rhs2 = r.r2.cwiseQuotient(lam);
    Vec d11 = f.cwiseProduct(f).cwiseInverse() + mu.cwiseQuotient(f);
    Vec d22 = s.cwiseQuotient(lam);
    Vec df, dl;
    int inner = 0;
    NumRoute fallback = NumRoute::gabp;
    if (cfg.inner == NumInner::gabp) {
      Vec diag(n + m), b(n + m);
      diag.head(n) = d11;
      diag.tail(m) = -d22;
      b.head(n) = rhs1;
      b.tail(m) = rhs2;
      std::vector<Triplet> tr;
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < m; ++i)
          if (R(i, j) != 0.0) tr.push_back({j, n + i, R(i, j)});
      SymmetricSystem sys(diag, b, tr);
      SolverConfig sc = cfg.solver;
      sc.accel = Accel::none;
      bool ok = false;
      try {
        SolveReport rep = solve_gabp(sys, sc);
        inner = rep.rounds;
        if (rep.status == Status::converged) {
          df = rep.x.head(n);
          dl = rep.x.tail(m);
          ok = true;
        }
      } catch (const SingularSubgraph&) {
      }
      if (!ok) {
        // Reduced SPD system (D11 + R^T diag(lam/s) R) df = rhs1 + R^T (r2/s).
        Mat N = R.transpose() * lam.cwiseQuotient(s).asDiagonal() * R;
        N.diagonal() += d11;
        Vec rhsN = rhs1 + R.transpose() * r.r2.cwiseQuotient(s);
        SymmetricSystem red = SymmetricSystem::from_dense(N, rhsN);
        SolverConfig in = sc;
        in.allow_zero_diagonal = false;
        FixReport fr = double_loop_solve(red, LoadingSpec{}, in, OuterConfig{sc.eps, cfg.fix_max_outer});
        inner += fr.inner_total;
        if (fr.report.status == Status::converged) {
          df = fr.report.x;
          fallback = NumRoute::double_loop;
        } else {
          df = N.llt().solve(rhsN);
          fallback = NumRoute::dense;
        }
        dl = (R * df - rhs2).cwiseQuotient(d22);
      }
    } else {
      Mat N = R.transpose() * lam.cwiseQuotient(s).asDiagonal() * R;
      N.diagonal() += d11;
      df = N.llt().solve(rhs1 + R.transpose() * r.r2.cwiseQuotient(s));
      dl = (R * df - rhs2).cwiseQuotient(d22);
    }
    Vec dmu = -(r.r3 + mu.cwiseProduct(df)).cwiseQuotient(f);
    Vec ds = -(R * df);

    double amax = std::min({1.0, step_to_boundary(f, df), step_to_boundary(lam, dl), step_to_boundary(mu, dmu),
                            step_to_boundary(s, ds)});
    double a = std::min(1.0, 0.99 * amax);
    const double r0 = r.norm();
    while (true) {
      Vec fn = f + a * df, ln = lam + a * dl, mn = mu + a * dmu;
      Vec sn = np.c - R * fn;
      if ((fn.array() > 0.0).all() && (ln.array() > 0.0).all() && (mn.array() > 0.0).all() &&
          (sn.array() > 0.0).all() && num_residual(np, fn, ln, mn, t).norm() <= (1.0 - cfg.ls_alpha * a) * r0) {
        f = fn;
        lam = ln;
        mu = mn;
        break;
      }
      a *= cfg.ls_beta;
      if (a < 1e-14) {
        std::ostringstream os;
        os << "line search failed at step " << step << " (gap " << eta << ", min f " << f.minCoeff()
           << ", min s " << s.minCoeff() << ")";
        throw Error(ErrorCode::line_search, os.str());
      }
    }
    Vec sn = np.c - R * f;
    const double gap = sn.dot(lam) + f.dot(mu);
    const double dres = (-f.cwiseInverse() + R.transpose() * lam - mu).norm();
    res.trace.push_back({step, gap, inner, dres, fallback});
    if (gap < cfg.gap_tol && dres < cfg.gap_tol) {
      res.converged = true;
      break;
    }
  }
  res.f = f;
  res.lambda = lam;
  res.mu = mu;
  res.utility = f.array().log().sum();
  return res;
}

double num_dual_value(const NumProblem& np, const Vec& lambda) {
  Vec q = np.R.transpose() * lambda;
  return lambda.dot(np.c) + (-1.0 - q.array().log()).sum();
}

DualDecompResult solve_num_dual_decomp(const NumProblem& np, double alpha, double gap_tol, int max_iters,
                                       double lambda_min) {
  np.validate();
  if (!(alpha > 0.0)) throw Error(ErrorCode::invalid_argument, "step size must be positive");
  if (max_iters < 1) throw Error(ErrorCode::invalid_argument, "iteration cap must be positive");
  DualDecompResult res;
  Vec lam = Vec::Ones(np.links());
  Vec f;
  for (int it = 1; it <= max_iters; ++it) {
    f = (np.R.transpose() * lam).cwiseInverse();
    lam = (lam - alpha * (np.c - np.R * f)).cwiseMax(lambda_min);
    Vec fx = (np.R.transpose() * lam).cwiseInverse();
    Vec load = np.R * fx;
    double scale = 1.0;
    for (int i = 0; i < np.links(); ++i)
      if (load[i] > np.c[i]) scale = std::min(scale, np.c[i] / load[i]);
    const double primal = (scale * fx).array().log().sum();
    const double dual = num_dual_value(np, lam);
    res.trace.push_back({it, dual - primal, dual});
    f = scale * fx;
    if (dual - primal < gap_tol) {
      res.converged = true;
      break;
    }
  }
  res.f = f;
  res.lambda = lam;
  return res;
}

std::string num_trace_csv(const std::vector<NumTraceRow>& rows) {
  std::ostringstream os;
  os << "step,gap,inner_iters,dual_residual,fallback\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.10g,%d,%.10g,%d\n", r.step, r.gap, r.inner_iters, r.dual_residual,
                  static_cast<int>(r.fallback));
    os << buf;
  }
  return os.str();
}

}  // namespace gabp
