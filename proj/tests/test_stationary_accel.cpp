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

#include "gabp/detect.hpp"
#include "gabp/solvers.hpp"
#include "gabp/tables.hpp"
#include "oracles.hpp"

using namespace gabp;

namespace {

// x <- a .* x + c, componentwise; fixed point c / (1 - a).
class Geometric : public IterativeProcess {
 public:
  Geometric(Vec a, Vec c) : a_(std::move(a)), c_(std::move(c)), x_(Vec::Zero(a_.size())) {}
  Vec current() const override { return x_; }
  double step() override {
    Vec nx = a_.cwiseProduct(x_) + c_;
    double d = (nx - x_).cwiseAbs().maxCoeff();
    x_ = nx;
    return d;
  }
  bool diverged() const override { return !x_.allFinite(); }
  bool restartable() const override { return true; }
  void restart(const Vec& x) override { x_ = x; }
  double residual(const Vec& x) const override { return (x - fixed()).norm(); }
  Vec fixed() const { return c_.cwiseQuotient(Vec::Ones(a_.size()) - a_); }

 private:
  Vec a_, c_, x_;
};

}  // namespace

TEST_CASE("stationary methods reach the dense solution") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    Mat A;
    SymmetricSystem s = oracle::random_dominant(25, 0.3, rng, &A);
    Vec x = oracle::dense_solve(A, s.b());
    for (StationaryMethod m : {StationaryMethod::jacobi, StationaryMethod::gauss_seidel, StationaryMethod::sor}) {
      StationaryConfig c;
      c.method = m;
      c.omega = 1.2;
      c.eps = 1e-12;
      SolveReport r = solve_stationary(s, c);
      REQUIRE(r.status == Status::converged);
      CHECK(oracle::rel_err(r.x, x) < 1e-9);
    }
  }
}

TEST_CASE("jacobi iterates match the textbook recursion") {
  std::mt19937_64 rng(9);
  Mat A;
  SymmetricSystem s = oracle::random_dominant(10, 0.5, rng, &A);
  auto ref = oracle::jacobi_iterates(A, s.b(), s.b(), 6);
  StationaryProcess p(s, StationaryMethod::jacobi, 1.0, s.b());
  for (int t = 1; t <= 6; ++t) {
    p.step();
    CHECK((p.current() - ref[t]).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("classical methods diverge on the indefinite fixture") {
  SymmetricSystem s = non_psd_system();
  for (Method m : {Method::jacobi, Method::gauss_seidel}) {
    MethodConfig c;
    c.method = m;
    c.solver.max_rounds = 5000;
    CHECK(solve(s, c).status == Status::diverged);
  }
}

TEST_CASE("optimal SOR parameter") {
  // Poisson is consistently ordered: the closed form applies.
  SymmetricSystem p = poisson2d(5);
  const double rho = std::cos(M_PI / 6.0);
  const double w = optimal_sor_omega(p);
  CHECK(w == doctest::Approx(2.0 / (1.0 + std::sqrt(1.0 - rho * rho))).epsilon(1e-6));
  CHECK(sor_iterations(p, w, 1e-6, 10000) < sor_iterations(p, 1.0, 1e-6, 10000));
  // Never worse than Gauss-Seidel on the Gold fixtures.
  for (const auto& s : {gold_r3(), gold_r4()})
    CHECK(sor_iterations(s, optimal_sor_omega(s), 1e-6, 10000) <= sor_iterations(s, 1.0, 1e-6, 10000));
  CHECK_THROWS_AS(StationaryProcess(p, StationaryMethod::sor, 2.5, p.b()), Error);
}

TEST_CASE("aitken is exact on a geometric sequence") {
  Vec a = (Vec(3) << 0.5, -0.3, 0.9).finished();
  Vec c = (Vec(3) << 1.0, 2.0, -1.0).finished();
  Geometric g(a, c);
  Vec x0 = g.current();
  g.step();
  Vec x1 = g.current();
  g.step();
  Vec x2 = g.current();
  CHECK((aitken(x0, x1, x2) - g.fixed()).cwiseAbs().maxCoeff() < 1e-12);
  // Zero second difference passes the last iterate through.
  Vec k = Vec::Constant(2, 3.0);
  CHECK(aitken(k, k, k) == k);
  CHECK_THROWS_AS(aitken(k, k, Vec::Zero(3)), Error);
}

TEST_CASE("steffensen on a linear process lands on the fixed point after one combine") {
  Geometric g((Vec(2) << 0.95, 0.8).finished(), (Vec(2) << 1.0, 1.0).finished());
  SolverConfig c;
  c.eps = 1e-10;
  SolveReport r = steffensen(g, c);
  CHECK(r.status == Status::converged);
  CHECK(r.rounds == 4);
  CHECK((r.x - g.fixed()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("acceleration keeps the fixed point") {
  SymmetricSystem s = poisson2d(6);
  Vec x = oracle::dense_solve(s.dense(), s.b());
  for (Accel acc : {Accel::aitken, Accel::steffensen}) {
    for (Method m : {Method::gabp, Method::jacobi, Method::gauss_seidel}) {
      MethodConfig c;
      c.method = m;
      c.solver.accel = acc;
      c.solver.eps = 1e-10;
      c.solver.max_rounds = 5000;
      SolveReport r = solve(s, c);
      REQUIRE(r.status == Status::converged);
      CHECK(oracle::rel_err(r.x, x) < 1e-7);
    }
  }
  // Gauss-Seidel on a 2 x 2 system has a rank-one iteration matrix, so one
  // combine lands on the solution.
  Mat A2(2, 2);
  A2 << 2.0, 1.9, 1.9, 2.0;
  SymmetricSystem two = SymmetricSystem::from_dense(A2, Vec::Ones(2));
  MethodConfig plain;
  plain.method = Method::gauss_seidel;
  plain.solver.eps = 1e-10;
  MethodConfig fast = plain;
  fast.solver.accel = Accel::steffensen;
  SolveReport rf = solve(two, fast);
  CHECK(rf.rounds <= 7);
  CHECK(rf.rounds < solve(two, plain).rounds);
  CHECK(oracle::rel_err(rf.x, oracle::dense_solve(A2, Vec::Ones(2))) < 1e-9);
}

TEST_CASE("method names round trip") {
  for (Method m : {Method::gabp, Method::gabp_broadcast, Method::jacobi, Method::gauss_seidel, Method::sor,
                   Method::sor_optimal})
    CHECK(parse_method(to_string(m)) == m);
  CHECK(parse_schedule("serial") == Schedule::serial);
  CHECK(parse_accel("aitken") == Accel::aitken);
  CHECK_THROWS_AS(parse_method("cg"), Error);
}
