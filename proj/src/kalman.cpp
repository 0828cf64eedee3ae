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

#include "gabp/kalman.hpp"

#include "gabp/convfix.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace gabp {

void LdsModel::validate() const {
  const int n = d(), k = m();
  if (A.cols() != n) throw Error(ErrorCode::dimension, "A must be square");
  if (H.cols() != n) throw Error(ErrorCode::dimension, "H must have d columns");
  if (Q.rows() != n || Q.cols() != n) throw Error(ErrorCode::dimension, "Q must be d x d");
  if (R.rows() != k || R.cols() != k) throw Error(ErrorCode::dimension, "R must be m x m");
  if (B.size() && (B.rows() != n || B.cols() != u.size())) throw Error(ErrorCode::dimension, "B and u dimensions differ");
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, Q.cwiseAbs().maxCoeff()))
    throw Error(ErrorCode::asymmetric, "Q is not symmetric");
  if (n && Eigen::SelfAdjointEigenSolver<Mat>(Q, Eigen::EigenvaluesOnly).eigenvalues().minCoeff() < -1e-12 * std::max(1.0, Q.norm()))
    throw Error(ErrorCode::invalid_argument, "Q is not positive semidefinite");
  if (k) {
    if ((R - R.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, R.cwiseAbs().maxCoeff()))
      throw Error(ErrorCode::asymmetric, "R is not symmetric");
    Eigen::LLT<Mat> llt(R);
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::invalid_argument, "R is not positive definite");
  }
}

Mat build_E(const Mat& P_prev, const LdsModel& model) {
  model.validate();
  const int d = model.d(), m = model.m();
  if (P_prev.rows() != d || P_prev.cols() != d) throw Error(ErrorCode::dimension, "P must be d x d");
  Mat E = Mat::Zero(2 * d + m, 2 * d + m);
  E.block(0, 0, d, d) = -P_prev;
  E.block(0, d, d, d) = model.A;
  E.block(d, 0, d, d) = model.A.transpose();
  E.block(d, d, d, d) = model.Q;
  E.block(d, 2 * d, d, m) = model.H.transpose();
  E.block(2 * d, d, m, d) = model.H;
  E.block(2 * d, 2 * d, m, m) = model.R;
  return E;
}

namespace {

Vec predict_mean(const Vec& x_prev, const LdsModel& model) {
  Vec x = model.A * x_prev;
  if (model.B.size()) x += model.B * model.u;
  return x;
}

}  // namespace

KalmanState kalman_step_classical(const Vec& x_prev, const Mat& P_prev, const Vec& z, const LdsModel& model) {
  model.validate();
  const int d = model.d();
  if (x_prev.size() != d || P_prev.rows() != d || P_prev.cols() != d || z.size() != model.m())
    throw Error(ErrorCode::dimension, "state, covariance or measurement size differs from the model");
  Vec xm = predict_mean(x_prev, model);
  Mat Pm = model.A * P_prev * model.A.transpose() + model.Q;
  Mat S = model.H * Pm * model.H.transpose() + model.R;
  Eigen::FullPivLU<Mat> lu(S);
  if (!lu.isInvertible()) throw Error(ErrorCode::degenerate, "innovation covariance is singular");
  Mat K = Pm * model.H.transpose() * lu.inverse();
  KalmanState s;
  s.x = xm + K * (z - model.H * xm);
  s.P = (Mat::Identity(d, d) - K * model.H) * Pm;
  s.P = (0.5 * (s.P + s.P.transpose())).eval();
  return s;
}

Mat kalman_cov_step_gabp(const Mat& P_prev, const LdsModel& model, const SolverConfig& cfg, KalmanGabpInfo* info) {
  model.validate();
  const int d = model.d(), m = model.m();
  if (P_prev.rows() != d || P_prev.cols() != d) throw Error(ErrorCode::dimension, "P must be d x d");
  // First reduction: the -P block eliminated in closed form.
  Mat Pm = model.A * P_prev * model.A.transpose() + model.Q;
  Pm = (0.5 * (Pm + Pm.transpose())).eval();
  KalmanGabpInfo local;
  Mat P = Pm;
  if (m > 0) {
    Mat HP = model.H * Pm;
    Mat S = HP * model.H.transpose() + model.R;
    S = (0.5 * (S + S.transpose())).eval();
    SymmetricSystem sys = SymmetricSystem::from_dense(S, Vec::Zero(m));
    GabpEngine eng(sys, cfg.schedule, Rule::sum_product, cfg.threads);
    Mat X(m, d);
    for (int c = 0; c < d; ++c) {
      eng.set_rhs(HP.col(c));
      SolverConfig col = cfg;
      col.accel = Accel::none;
      SolveReport rep = solve_gabp_with(eng, col);
      local.rounds += rep.rounds;
      if (rep.status != Status::converged) {
        // S is positive definite, so the loaded outer iteration converges.
        SolverConfig in = col;
        in.max_rounds = std::max(col.max_rounds, 5000);
        FixReport fr = double_loop_solve(sys.with_b(HP.col(c)), LoadingSpec{}, in, OuterConfig{col.eps, 100000});
        local.rounds += fr.inner_total;
        ++local.fixed_columns;
        if (fr.report.status != Status::converged)
          throw Error(ErrorCode::not_converged,
                      "innovation covariance solve did not converge (column " + std::to_string(c) + ")");
        rep = fr.report;
      }
      X.col(c) = rep.x;
    }
    P = Pm - HP.transpose() * X;
  }
  local.asymmetry = (P - P.transpose()).cwiseAbs().maxCoeff();
  if (info) *info = local;
  return 0.5 * (P + P.transpose());
}

KalmanState kalman_step_gabp(const Vec& x_prev, const Mat& P_prev, const Vec& z, const LdsModel& model,
                             const SolverConfig& cfg, KalmanGabpInfo* info) {
  if (x_prev.size() != model.d() || z.size() != model.m())
    throw Error(ErrorCode::dimension, "state or measurement size differs from the model");
  KalmanState s;
  s.P = kalman_cov_step_gabp(P_prev, model, cfg, info);
  Vec xm = predict_mean(x_prev, model);
  if (model.m() == 0) {
    s.x = xm;
    return s;
  }
  Mat K = s.P * model.H.transpose() * model.R.llt().solve(Mat::Identity(model.m(), model.m()));
  s.x = xm + K * (z - model.H * xm);
  return s;
}

LdsModel random_lds(int d, int m, std::uint64_t seed) {
  if (d < 1 || m < 0) throw Error(ErrorCode::invalid_argument, "model sizes must be d >= 1, m >= 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  auto randn = [&](int r, int c) {
    Mat M(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) M(i, j) = N(rng);
    return M;
  };
  LdsModel mdl;
  mdl.A = randn(d, d);
  mdl.A *= 0.95 / Eigen::JacobiSVD<Mat>(mdl.A).singularValues()[0];
  mdl.H = randn(m, d);
  Mat G = randn(d, d);
  mdl.Q = 0.1 * (G * G.transpose()) / d + 0.1 * Mat::Identity(d, d);
  mdl.Q = (0.5 * (mdl.Q + mdl.Q.transpose())).eval();
  Mat F = randn(m, m);
  mdl.R = (F * F.transpose()) / std::max(1, m) + Mat::Identity(m, m);
  mdl.R = (0.5 * (mdl.R + mdl.R.transpose())).eval();
  return mdl;
}

std::vector<KalmanDemoRow> kalman_demo(int d, int m, int steps, std::uint64_t seed, const SolverConfig& cfg) {
  if (steps < 1) throw Error(ErrorCode::invalid_argument, "steps must be positive");
  LdsModel mdl = random_lds(d, m, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> N(0.0, 1.0);
  Eigen::LLT<Mat> lq(mdl.Q), lr(mdl.R);
  Vec truth = Vec::Zero(d);
  KalmanState a{Vec::Zero(d), Mat::Identity(d, d)}, b = a;
  std::vector<KalmanDemoRow> rows;
  for (int t = 1; t <= steps; ++t) {
    Vec w(d), v(m);
    for (int i = 0; i < d; ++i) w[i] = N(rng);
    for (int i = 0; i < m; ++i) v[i] = N(rng);
    truth = mdl.A * truth + Mat(lq.matrixL()) * w;
    Vec z = mdl.H * truth + Mat(lr.matrixL()) * v;
    KalmanGabpInfo info;
    a = kalman_step_gabp(a.x, a.P, z, mdl, cfg, &info);
    b = kalman_step_classical(b.x, b.P, z, mdl);
    rows.push_back({t, (a.P - b.P).cwiseAbs().maxCoeff(), (a.x - b.x).cwiseAbs().maxCoeff(), info.rounds});
  }
  return rows;
}

}  // namespace gabp
