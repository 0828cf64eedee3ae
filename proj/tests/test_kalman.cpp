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

#include <doctest.h>

#include "gabp/kalman.hpp"
#include "oracles.hpp"

using namespace gabp;

TEST_CASE("block matrix layout") {
  LdsModel m = random_lds(3, 2, 1);
  Mat P = Mat::Identity(3, 3) * 0.5;
  Mat E = build_E(P, m);
  REQUIRE(E.rows() == 8);
  CHECK(E.block(0, 0, 3, 3) == -P);
  CHECK(E.block(0, 3, 3, 3) == m.A);
  CHECK(E.block(3, 0, 3, 3) == m.A.transpose());
  CHECK(E.block(3, 3, 3, 3) == m.Q);
  CHECK(E.block(3, 6, 3, 2) == m.H.transpose());
  CHECK(E.block(6, 3, 2, 3) == m.H);
  CHECK(E.block(6, 6, 2, 2) == m.R);
  CHECK(E.block(0, 6, 3, 2).isZero());
  CHECK((E - E.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("classical step follows the textbook recursion") {
  std::mt19937_64 rng(3);
  LdsModel m = random_lds(4, 2, 9);
  Vec x = oracle::randn(4, rng), z = oracle::randn(2, rng);
  Mat P = Mat::Identity(4, 4);
  KalmanState s = kalman_step_classical(x, P, z, m);
  CHECK((s.P - oracle::riccati(P, m.A, m.H, m.Q, m.R)).cwiseAbs().maxCoeff() < 1e-12);
  Mat Pm = m.A * P * m.A.transpose() + m.Q;
  Mat K = Pm * m.H.transpose() * (m.H * Pm * m.H.transpose() + m.R).inverse();
  Vec xm = m.A * x;
  CHECK((s.x - (xm + K * (z - m.H * xm))).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("GaBP covariance step equals the Riccati update on random models") {
  int fixed = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 4, mm = 1 + trial % 3;
    LdsModel m = random_lds(d, mm, 1000 + trial);
    std::mt19937_64 rng(trial);
    Mat G = oracle::randn(d, d, rng);
    Mat P = G * G.transpose() / d + Mat::Identity(d, d);
    SolverConfig c;
    c.eps = 1e-12;
    c.max_rounds = 5000;
    KalmanGabpInfo info;
    Mat Pk = kalman_cov_step_gabp(P, m, c, &info);
    fixed += info.fixed_columns;
    Mat ref = oracle::riccati(P, m.A, m.H, m.Q, m.R);
    CHECK((Pk - ref).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((Pk - Pk.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
  MESSAGE("columns solved by the double loop: " << fixed);
}

TEST_CASE("GaBP mean step") {
  std::mt19937_64 rng(11);
  LdsModel m = random_lds(3, 2, 5);
  Vec x = oracle::randn(3, rng), z = oracle::randn(2, rng);
  SolverConfig c;
  c.eps = 1e-12;
  c.max_rounds = 5000;
  KalmanState g = kalman_step_gabp(x, Mat::Identity(3, 3), z, m, c);
  KalmanState k = kalman_step_classical(x, Mat::Identity(3, 3), z, m);
  CHECK(oracle::rel_err(g.x, k.x) < 1e-8);
  CHECK((g.P - k.P).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("demo trace and validation") {
  SolverConfig c;
  c.eps = 1e-12;
  c.max_rounds = 5000;
  auto rows = kalman_demo(4, 2, 10, 3, c);
  REQUIRE(rows.size() == 10);
  for (const auto& r : rows) {
    CHECK(r.p_diff < 1e-8);
    CHECK(r.x_diff < 1e-6);
  }
  LdsModel bad = random_lds(3, 2, 1);
  bad.H = Mat::Ones(2, 4);
  CHECK_THROWS_AS(bad.validate(), Error);
  LdsModel indef = random_lds(3, 2, 1);
  indef.R = -Mat::Identity(2, 2);
  CHECK_THROWS_AS(kalman_cov_step_gabp(Mat::Identity(3, 3), indef, c), Error);
}
