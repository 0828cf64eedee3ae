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

#include "gabp/convfix.hpp"
#include "gabp/detect.hpp"
#include "gabp/diagnostics.hpp"
#include "oracles.hpp"

using namespace gabp;

TEST_CASE("walk radius of the Gold fixtures") {
  CHECK(walk_radius(gold_r3()) == doctest::Approx(oracle::kRhoAbsR3).epsilon(1e-3));
  CHECK(walk_radius(gold_r4()) == doctest::Approx(oracle::kRhoAbsR4).epsilon(1e-3));
  CHECK(walk_radius(gold_r3()) == doctest::Approx(oracle::walk_radius_dense(oracle::r3_times7())).epsilon(1e-10));
  CHECK(walk_radius(gold_r4()) == doctest::Approx(oracle::walk_radius_dense(oracle::r4_times7())).epsilon(1e-10));
}

TEST_CASE("walk radius on large sparse systems uses power iteration") {
  std::mt19937_64 rng(17);
  Mat A;
  SymmetricSystem s = oracle::random_dominant(120, 0.05, rng, &A);
  CHECK(walk_radius(s) == doctest::Approx(oracle::walk_radius_dense(A)).epsilon(1e-6));
}

TEST_CASE("round bound") {
  CHECK(bound_rounds(0.5, 1e-3) == 10);
  CHECK(bound_rounds(0.1, 1e-6) == 6);
  CHECK_THROWS_AS(bound_rounds(1.0, 1e-6), Error);
  CHECK_THROWS_AS(bound_rounds(0.5, 0.0), Error);
}

TEST_CASE("sufficient conditions") {
  std::mt19937_64 rng(2);
  SymmetricSystem dd = oracle::random_dominant(20, 0.3, rng);
  ConvergenceReport r = check_conditions(dd, 1e-6);
  CHECK(r.strict_dd);
  CHECK(r.walk_summable);
  REQUIRE(r.gamma.has_value());
  CHECK(*r.gamma < 1.0);
  REQUIRE(r.bound_rounds.has_value());
  SolverConfig c;
  c.eps = 1e-6;
  c.max_rounds = 100000;
  SolveReport rep = solve_gabp(dd, c);
  CHECK(rep.status == Status::converged);

  ConvergenceReport g3 = check_conditions(gold_r3());
  CHECK_FALSE(g3.strict_dd);
  CHECK(g3.walk_summable);
  CHECK_FALSE(g3.gamma.has_value());
  std::string kv = to_key_values(g3);
  CHECK(kv.find("walk_summable=true\n") != std::string::npos);
  CHECK(kv.find("gamma=none\n") != std::string::npos);
  CHECK(kv.find("rho_abs=0.900") != std::string::npos);
}

TEST_CASE("loading vectors") {
  SymmetricSystem s(Vec::Ones(3), Vec::Zero(3), {{0, 1, 0.8}, {1, 2, -0.7}});
  Vec pg = per_node_gamma_star(s);
  CHECK(pg[0] == 0.0);
  CHECK(pg[1] == doctest::Approx(0.5));
  CHECK(pg[2] == 0.0);
  Vec l = loading_vector(s, LoadingSpec{});
  CHECK(l[0] == 0.0);
  CHECK(l[1] == doctest::Approx(0.55));
  LoadingSpec sc;
  sc.mode = LoadingMode::scalar_gamma;
  sc.gamma = 0.3;
  CHECK(loading_vector(s, sc) == Vec::Constant(3, 0.3));
  CHECK(gamma_star(s) == doctest::Approx(std::sqrt(0.64 + 0.49) - 1.0).epsilon(1e-9));
  CHECK_THROWS_AS(gamma_star(s.with_diagonal(Vec::Constant(3, 2.0))), Error);
}

TEST_CASE("double loop solves positive definite systems that plain GaBP cannot") {
  std::mt19937_64 rng(7);
  int plain_failed = 0, tried = 0;
  while (tried < 8) {
    Mat J = oracle::random_wishart_unit(20, 40, 0.1, rng);
    const double rho = oracle::walk_radius_dense(J);
    if (rho < 1.1 || rho > 3.0) continue;
    ++tried;
    Vec b = oracle::randn(20, rng);
    SymmetricSystem s = SymmetricSystem::from_dense(J, b, 1e-12);
    SolverConfig c;
    c.max_rounds = 2000;
    c.eps = 1e-9;
    if (solve_gabp(s, c).status != Status::converged) ++plain_failed;
    SolverConfig in;
    in.eps = 1e-10;
    in.max_rounds = 5000;
    FixReport fr = double_loop_solve(s, LoadingSpec{}, in, OuterConfig{1e-9, 20000});
    REQUIRE(fr.report.status == Status::converged);
    CHECK(residual_per_equation(s, fr.report.x) < 1e-5);
    CHECK(oracle::rel_err(fr.report.x, oracle::dense_solve(J, b)) < 1e-6);
    CHECK(fr.outer_trace.size() == static_cast<std::size_t>(fr.report.rounds));
  }
  CHECK(plain_failed >= 6);
}

TEST_CASE("double loop on an already walk-summable system needs one outer step") {
  std::mt19937_64 rng(1);
  Mat A;
  SymmetricSystem s = oracle::random_dominant(15, 0.3, rng, &A);
  SolverConfig in;
  in.eps = 1e-12;
  FixReport fr = double_loop_solve(s, LoadingSpec{}, in, OuterConfig{1e-9, 100});
  CHECK(fr.report.status == Status::converged);
  CHECK(fr.report.rounds == 1);
  CHECK(oracle::rel_err(fr.report.x, oracle::dense_solve(A, s.b())) < 1e-9);
}

TEST_CASE("double loop refuses an indefinite matrix") {
  SymmetricSystem s = SymmetricSystem::from_dense(oracle::non_psd(), Vec::Ones(3));
  SolverConfig in;
  in.eps = 1e-10;
  bool failed = false;
  try {
    FixReport fr = double_loop_solve(s, LoadingSpec{}, in, OuterConfig{1e-9, 2000});
    failed = fr.report.status != Status::converged;
  } catch (const Error&) {
    failed = true;
  }
  CHECK(failed);
}

TEST_CASE("loading trades outer steps for inner rounds") {
  std::mt19937_64 rng(7);
  Mat J = oracle::random_wishart_unit(20, 40, 0.1, rng);
  SymmetricSystem s = SymmetricSystem::from_dense(J, Vec::Ones(20), 1e-12);
  const double gs = gamma_star(s);
  REQUIRE(gs > 0.0);
  std::vector<int> outer;
  std::vector<double> inner;
  for (double f : {1.1, 1.5, 2.5, 4.0}) {
    LoadingSpec L;
    L.mode = LoadingMode::scalar_gamma;
    L.gamma = gs * f;
    SolverConfig in;
    in.eps = 1e-8;
    in.max_rounds = 20000;
    FixReport fr = double_loop_solve(s, L, in, OuterConfig{1e-6, 20000});
    REQUIRE(fr.report.status == Status::converged);
    outer.push_back(fr.report.rounds);
    inner.push_back(static_cast<double>(fr.inner_total) / fr.report.rounds);
  }
  for (std::size_t i = 1; i < outer.size(); ++i) {
    CHECK(outer[i] >= outer[i - 1]);
    CHECK(inner[i] <= inner[i - 1]);
  }
}

TEST_CASE("single loop reaches the same fixed point") {
  std::mt19937_64 rng(7);
  Mat J = oracle::random_wishart_unit(12, 30, 0.2, rng);
  Vec b = oracle::randn(12, rng);
  SymmetricSystem s = SymmetricSystem::from_dense(J, b, 1e-12);
  SolverConfig c;
  c.eps = 1e-10;
  c.max_rounds = 200000;
  FixReport fr = single_loop_solve(s, LoadingSpec{}, 0.5, c);
  REQUIRE(fr.report.status == Status::converged);
  CHECK(oracle::rel_err(fr.report.x, oracle::dense_solve(J, b)) < 1e-6);
  CHECK_THROWS_AS(single_loop_solve(s, LoadingSpec{}, 0.0, c), Error);
}

TEST_CASE("least-squares form") {
  std::mt19937_64 rng(21);
  Mat Jt = oracle::randn(6, 4, rng) * 0.2;
  Vec ht = oracle::randn(6, rng);
  const double gamma = 2.0;
  SolverConfig c;
  c.eps = 1e-12;
  c.max_rounds = 5000;
  LsResult r = ls_convfix(Jt, ht, gamma, c);
  Mat N = Jt.transpose() * Jt + gamma * Mat::Identity(4, 4);
  Vec ref = oracle::dense_solve(N, Jt.transpose() * ht);
  REQUIRE(r.report.status == Status::converged);
  CHECK(oracle::rel_err(r.x, ref) < 1e-8);
  CHECK(r.walk_summable == (r.rho < 1.0));
}
