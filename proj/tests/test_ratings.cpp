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

#include <filesystem>
#include <fstream>

#include "gabp/ratings.hpp"
#include "oracles.hpp"

using namespace gabp;
namespace fs = std::filesystem;

namespace {

// Random connected graph: a random spanning tree plus extra edges.
WeightedGraph random_graph(int n, int extra, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> w(0.2, 2.0), y(-3.0, 3.0);
  WeightedGraph g;
  g.n = n;
  for (int i = 1; i < n; ++i) g.edges.push_back({static_cast<int>(rng() % i), i, w(rng)});
  for (int e = 0; e < extra; ++e) {
    int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
    if (a == b) continue;
    bool dup = false;
    for (const auto& x : g.edges) dup |= (x.src == a && x.dst == b) || (x.src == b && x.dst == a);
    if (!dup) g.edges.push_back({a, b, w(rng)});
  }
  g.prior.resize(n);
  for (int i = 0; i < n; ++i) g.prior[i] = y(rng);
  return g;
}

// Minimizer of the rating cost by a dense solve of its normal equations,
// assembled here from the cost's definition.
Vec dense_rating(const WeightedGraph& g, double beta) {
  Mat A = Mat::Zero(g.n, g.n);
  Vec b = Vec::Zero(g.n);
  for (int i = 0; i < g.n; ++i)
    if (g.prior[i]) {
      A(i, i) += g.node_w(i);
      b[i] += g.node_w(i) * *g.prior[i];
    }
  for (const auto& e : g.edges) {
    A(e.src, e.src) += beta * e.w;
    A(e.dst, e.dst) += beta * e.w;
    A(e.src, e.dst) -= beta * e.w;
    A(e.dst, e.src) -= beta * e.w;
  }
  return oracle::dense_solve(A, b);
}

}  // namespace

TEST_CASE("rating minimizes the quadratic cost") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    WeightedGraph g = random_graph(15, 10, rng);
    if (trial % 3 == 0) g.prior[3] = std::nullopt;
    RatingProblem p{g, 0.7};
    MethodConfig c;
    c.solver.eps = 1e-12;
    c.solver.max_rounds = 10000;
    RatingResult r = rate(p, c);
    REQUIRE(r.report.status == Status::converged);
    Vec ref = dense_rating(g, 0.7);
    CHECK(oracle::rel_err(r.x, ref) < 1e-8);
    // Local optimality by perturbation.
    const double e0 = rating_cost(p, r.x);
    for (int i = 0; i < g.n; ++i) {
      Vec xp = r.x;
      xp[i] += 1e-4;
      CHECK(rating_cost(p, xp) >= e0);
    }
  }
}

TEST_CASE("beta = 0 returns the priors") {
  std::mt19937_64 rng(1);
  WeightedGraph g = random_graph(8, 4, rng);
  MethodConfig c;
  RatingResult r = rate(RatingProblem{g, 0.0}, c);
  for (int i = 0; i < g.n; ++i) CHECK(r.x[i] == doctest::Approx(*g.prior[i]));
  g.prior[2] = std::nullopt;
  CHECK_THROWS_AS(rate(RatingProblem{g, 0.0}, c), Error);
}

TEST_CASE("a component without priors is degenerate") {
  WeightedGraph g;
  g.n = 4;
  g.edges = {{0, 1, 1.0}, {2, 3, 1.0}};
  g.prior = {1.0, std::nullopt, std::nullopt, std::nullopt};
  try {
    assemble_rating_system(RatingProblem{g, 1.0});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate);
  }
  g.prior[3] = 2.0;
  CHECK_NOTHROW(assemble_rating_system(RatingProblem{g, 1.0}));
}

TEST_CASE("large beta drives every rating to the mean prior") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    WeightedGraph g = random_graph(12, trial % 4 ? 8 : 0, rng);
    for (auto& e : g.edges) e.w = 1.0;
    double mean = 0.0;
    for (const auto& y : g.prior) mean += *y;
    mean /= g.n;
    RatingSystem rs = assemble_rating_system(RatingProblem{g, 1e6});
    Vec x = oracle::dense_solve(rs.sys.dense(), rs.sys.b());
    CHECK((x.array() - mean).abs().maxCoeff() < 1e-3);
    // On a tree GaBP is exact after a diameter's worth of rounds.
    if (trial % 4 == 0) {
      MethodConfig c;
      c.solver.eps = 1e-12;
      c.solver.max_rounds = 100;
      RatingResult r = rate(RatingProblem{g, 1e6}, c);
      REQUIRE(r.report.status == Status::converged);
      CHECK((r.x.array() - mean).abs().maxCoeff() < 1e-3);
    }
  }
}

TEST_CASE("asymmetric weights are averaged and flagged") {
  WeightedGraph g;
  g.n = 2;
  g.edges = {{0, 1, 1.0}, {1, 0, 3.0}};
  g.prior = {0.0, 1.0};
  RatingSystem rs = assemble_rating_system(RatingProblem{g, 1.0});
  CHECK(rs.symmetrized);
  CHECK(rs.sys.coeff(0, 1) == doctest::Approx(-2.0));
}

TEST_CASE("spatial ranking") {
  Mat R(3, 3);
  R << 0, 0.5, 0.5, 0.3, 0, 0.3, 0, 1.0, 0;
  SolverConfig c;
  c.eps = 1e-12;
  c.max_rounds = 10000;
  RatingResult r = spatial_rank(R, 0.8, c);
  Vec ref = oracle::dense_solve(Mat::Identity(3, 3) - 0.8 * R, Vec::Ones(3));
  CHECK(oracle::rel_err(r.x, ref) < 1e-7);
  // alpha = 0: identity.
  CHECK((spatial_rank(R, 0.0, c).x - Vec::Ones(3)).cwiseAbs().maxCoeff() < 1e-12);
  Mat bad = R;
  bad(0, 1) = 0.9;
  CHECK_THROWS_AS(spatial_rank(bad, 0.5, c), Error);
  CHECK_THROWS_AS(spatial_rank(R, 1.0, c), Error);
}

TEST_CASE("shifted solves cover the three structural cases") {
  SolverConfig c;
  c.eps = 1e-12;
  c.max_rounds = 20000;
  Vec rhs = (Vec(3) << 1.0, -2.0, 0.5).finished();
  // Symmetric.
  Mat S(3, 3);
  S << 0, 0.4, 0.2, 0.4, 0, 0.3, 0.2, 0.3, 0;
  // Diagonally similar to symmetric: D S D^-1.
  Vec d = (Vec(3) << 1.0, 2.0, 0.5).finished();
  Mat T = d.asDiagonal() * S * d.cwiseInverse().asDiagonal();
  // Neither: a one-way edge.
  Mat U = S;
  U(0, 1) = 0.0;
  for (const Mat& B : {S, T, U}) {
    RatingResult r = solve_shifted(B, 0.9, rhs, c);
    Vec ref = oracle::dense_solve(Mat::Identity(3, 3) - 0.9 * B, rhs);
    CHECK(oracle::rel_err(r.x, ref) < 1e-6);
  }
  CHECK_FALSE(solve_shifted(T, 0.9, rhs, c).symmetrized);
  CHECK(solve_shifted(U, 0.9, rhs, c).symmetrized);
}

TEST_CASE("personalized PageRank") {
  // Column-stochastic transitions of a 4-cycle with a chord.
  Mat W = Mat::Zero(4, 4);
  W(1, 0) = 1;
  W(2, 1) = 1;
  W(3, 2) = 0.5;
  W(0, 2) = 0.5;
  W(0, 3) = 1;
  Vec prior = Vec::Constant(4, 0.25);
  SolverConfig c;
  c.eps = 1e-12;
  c.max_rounds = 50000;
  RatingResult r = personalized_pagerank(W, prior, 0.85, c);
  Vec ref = 0.15 * oracle::dense_solve(Mat::Identity(4, 4) - 0.85 * W, prior);
  CHECK(oracle::rel_err(r.x, ref) < 1e-6);
  CHECK(r.x.sum() == doctest::Approx(1.0).epsilon(1e-6));
  Mat bad = W;
  bad(1, 0) = 0.5;
  CHECK_THROWS_AS(personalized_pagerank(bad, prior, 0.85, c), Error);
}

TEST_CASE("Laplacian projections") {
  std::mt19937_64 rng(4);
  WeightedGraph g = random_graph(10, 6, rng);
  SolverConfig c;
  c.eps = 1e-12;
  c.max_rounds = 20000;
  // The constant vector projects to zero.
  CHECK(oracle::max_abs(eigen_projection(g, c).x) < 1e-10);
  Vec rhs = oracle::randn(10, rng);
  RatingResult r = eigen_projection(g, rhs, c);
  Mat L = weighted_laplacian(g);
  Vec ref = L.completeOrthogonalDecomposition().pseudoInverse() * rhs;
  CHECK(oracle::rel_err(r.x, ref) < 1e-8);
  CHECK(std::abs(r.x.sum()) < 1e-10);

  RatingResult f = eigen_projection_full_cost(g, c);
  Mat A = Mat::Identity(10, 10) + 0.5 * L;
  CHECK(oracle::rel_err(f.x, oracle::dense_solve(A, Vec::Ones(10))) < 1e-8);
  // 1 is a fixed point: L 1 = 0.
  CHECK((f.x.array() - 1.0).abs().maxCoeff() < 1e-8);

  WeightedGraph split;
  split.n = 3;
  split.edges = {{0, 1, 1.0}};
  CHECK_THROWS_AS(eigen_projection(split, c), Error);
}

TEST_CASE("rating graph files") {
  fs::path d = fs::temp_directory_path() / "gabp_ratings_test";
  fs::create_directories(d);
  std::ofstream(d / "e.tsv") << "src\tdst\tweight\n# comment\n0\t1\t2.5\n1 2\n";
  std::ofstream(d / "p.csv") << "node,value\n0,1.5\n1,null\n2,\n";
  WeightedGraph g = read_rating_graph((d / "e.tsv").string(), (d / "p.csv").string());
  CHECK(g.n == 3);
  REQUIRE(g.edges.size() == 2);
  CHECK(g.edges[0].w == 2.5);
  CHECK(g.edges[1].w == 1.0);
  CHECK(g.prior[0] == 1.5);
  CHECK_FALSE(g.prior[1].has_value());
  CHECK_FALSE(g.prior[2].has_value());
  CHECK(edge_matrix(g)(0, 1) == 2.5);
  CHECK(edge_matrix(g)(1, 0) == 0.0);
  std::ofstream(d / "bad.tsv") << "0 1 x\n";
  CHECK_THROWS_AS(read_rating_graph((d / "bad.tsv").string()), Error);
  CHECK_THROWS_AS(read_rating_graph((d / "missing.tsv").string()), Error);
}

TEST_CASE("degree-weighted priors of one give a layout fixed point") {
  std::mt19937_64 rng(6);
  WeightedGraph g = random_graph(14, 9, rng);
  Mat W = edge_matrix(g);
  W = W + W.transpose().eval();
  Vec deg = W.rowwise().sum();
  g.node_weight = deg;
  for (auto& y : g.prior) y = 1.0;
  MethodConfig c;
  c.solver.eps = 1e-12;
  c.solver.max_rounds = 20000;
  RatingResult r = rate(RatingProblem{g, 1.0}, c);
  REQUIRE(r.report.status == Status::converged);
  Vec res = r.x - (W * r.x).cwiseQuotient(deg);
  CHECK(res.maxCoeff() - res.minCoeff() < 1e-6);
}
