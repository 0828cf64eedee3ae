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
#include <functional>
#include <fstream>

#include "gabp/numcore.hpp"
#include "oracles.hpp"

using namespace gabp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path d = fs::temp_directory_path() / "gabp_numcore_test";
  fs::create_directories(d);
  return d / name;
}

void write_text(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<ErrorCode>(0);
}

}  // namespace

TEST_CASE("symmetric system mirrors and rejects duplicates") {
  SymmetricSystem s(Vec::Ones(3), Vec::Zero(3), {{0, 2, 3.0}, {1, 0, -2.0}});
  CHECK(s.coeff(2, 0) == 3.0);
  CHECK(s.coeff(0, 1) == -2.0);
  CHECK(s.coeff(1, 2) == 0.0);
  CHECK(s.edge_count() == 2);
  CHECK((s.dense() - oracle::toy::A()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(code_of([] { SymmetricSystem(Vec::Ones(2), Vec::Zero(2), {{0, 1, 1.0}, {1, 0, 1.0}}); }) ==
        ErrorCode::duplicate_entry);
  CHECK(code_of([] { SymmetricSystem(Vec::Ones(2), Vec::Zero(3), {}); }) == ErrorCode::dimension);
  CHECK(code_of([] { SymmetricSystem(Vec::Ones(2), Vec::Zero(2), {{0, 5, 1.0}}); }) == ErrorCode::dimension);
}

TEST_CASE("from_dense checks symmetry") {
  Mat A = oracle::toy::A();
  SymmetricSystem s = SymmetricSystem::from_dense(A, oracle::toy::b());
  CHECK(s.multiply(oracle::toy::x()).isApprox(oracle::toy::b()));
  A(0, 1) += 1e-3;
  CHECK(code_of([&] { SymmetricSystem::from_dense(A, Vec::Zero(3)); }) == ErrorCode::asymmetric);
  CHECK_NOTHROW(SymmetricSystem::from_dense(A, Vec::Zero(3), 1e-2));
}

TEST_CASE("dominance classes") {
  CHECK(dominance_class(SymmetricSystem(Vec::Constant(2, 2.0), Vec::Zero(2), {{0, 1, 1.0}})) ==
        DominanceClass::strict);
  // Path 0-1-2 with the ends strict and the middle tight.
  SymmetricSystem irr(Vec::Constant(3, 2.0), Vec::Zero(3), {{0, 1, 1.0}, {1, 2, 1.0}});
  CHECK(dominance_class(irr) == DominanceClass::irreducible);
  // Two disconnected tight pairs.
  SymmetricSystem weak(Vec::Ones(4), Vec::Zero(4), {{0, 1, 1.0}, {2, 3, 1.0}});
  CHECK(dominance_class(weak) == DominanceClass::weak);
  CHECK(dominance_class(SymmetricSystem::from_dense(oracle::toy::A(), oracle::toy::b())) == DominanceClass::none);
}

TEST_CASE("unit-diagonal normalization preserves the solution up to scaling") {
  std::mt19937_64 rng(3);
  Mat A;
  SymmetricSystem s = oracle::random_dominant(12, 0.4, rng, &A);
  SymmetricSystem u = normalize_unit_diag(s);
  for (int i = 0; i < u.n(); ++i) CHECK(u.diag(i) == doctest::Approx(1.0));
  Vec d = A.diagonal().cwiseSqrt();
  Vec x = oracle::dense_solve(A, s.b());
  Vec y = oracle::dense_solve(u.dense(), u.b());
  CHECK(oracle::rel_err(y.cwiseQuotient(d), x) < 1e-12);
  CHECK(code_of([] { normalize_unit_diag(SymmetricSystem(Vec::Zero(1), Vec::Zero(1), {})); }) ==
        ErrorCode::normalization);
}

TEST_CASE("spectral radius agrees with the dense eigensolver on both paths") {
  std::mt19937_64 rng(11);
  for (int n : {10, 80}) {
    Mat M = oracle::randn(n, n, rng).cwiseAbs();
    M = 0.5 * (M + M.transpose()).eval();
    CHECK(spectral_radius(M, 1e-10) == doctest::Approx(oracle::sym_spectral_radius(M)).epsilon(1e-6));
  }
}

TEST_CASE("residual per equation") {
  SymmetricSystem s = SymmetricSystem::from_dense(oracle::toy::A(), oracle::toy::b());
  CHECK(residual_per_equation(s, oracle::toy::x()) == 0.0);
  CHECK(residual_per_equation(s, Vec::Zero(3)) == doctest::Approx(std::sqrt(40.0) / 3.0));
}

TEST_CASE("weighted graph Laplacian") {
  WeightedGraph g;
  g.n = 3;
  g.edges = {{0, 1, 2.0}, {1, 2, 1.0}, {2, 1, 3.0}};
  bool sym = false;
  Mat W = symmetric_weights(g, &sym);
  CHECK(sym);
  CHECK(W(0, 1) == 2.0);
  CHECK(W(1, 0) == 2.0);
  CHECK(W(1, 2) == 2.0);
  Mat L = weighted_laplacian(g);
  CHECK((L * Vec::Ones(3)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((L - L.transpose()).cwiseAbs().maxCoeff() == 0.0);
  g.edges.push_back({0, 0, 1.0});
  CHECK(code_of([&] { g.validate(); }) == ErrorCode::invalid_argument);
}

TEST_CASE("poisson model problem") {
  SymmetricSystem s = poisson2d(3);
  CHECK(s.n() == 9);
  CHECK(s.edge_count() == 12);
  CHECK(s.b()[0] == doctest::Approx(1.0 / 16.0));
  CHECK(dominance_class(s) == DominanceClass::irreducible);
  CHECK(oracle::is_pd(s.dense()));
  CHECK(connected(s));
  SymmetricSystem big = poisson2d(10);
  CHECK(big.n() + 2 * static_cast<int>(big.edge_count()) == 460);
  CHECK(poisson2d(1).b()[0] == doctest::Approx(0.25));
}

TEST_CASE("matrix market round trip and errors") {
  SymmetricSystem s = SymmetricSystem::from_dense(oracle::toy::A(), oracle::toy::b());
  auto a = scratch("toy_A.mtx"), b = scratch("toy_b.mtx");
  write_matrix_market(s, a.string());
  write_vector_mtx(s.b(), b.string());
  SymmetricSystem r = read_matrix_market(a.string(), read_vector_mtx(b.string()));
  CHECK((r.dense() - s.dense()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((r.b() - s.b()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(read_matrix_market(a.string()).b() == Vec::Zero(3));

  auto lower = scratch("lower.mtx");
  write_text(lower, "%%MatrixMarket matrix coordinate real symmetric\n2 2 3\n1 1 2\n2 1 -1\n2 2 3\n");
  CHECK(read_matrix_market(lower.string()).coeff(0, 1) == -1.0);

  auto general = scratch("general.mtx");
  write_text(general, "%%MatrixMarket matrix coordinate real general\n2 2 4\n1 1 2\n1 2 1\n2 1 1\n2 2 3\n");
  CHECK(read_matrix_market(general.string()).coeff(0, 1) == 1.0);

  auto asym = scratch("asym.mtx");
  write_text(asym, "%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 2\n1 2 1\n2 2 3\n");
  CHECK(code_of([&] { read_matrix_market(asym.string()); }) == ErrorCode::asymmetric);

  auto dup = scratch("dup.mtx");
  write_text(dup, "%%MatrixMarket matrix coordinate real symmetric\n2 2 3\n1 1 2\n2 1 1\n2 1 1\n");
  CHECK(code_of([&] { read_matrix_market(dup.string()); }) == ErrorCode::duplicate_entry);

  auto bad = scratch("bad.mtx");
  write_text(bad, "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 x 2\n");
  CHECK(code_of([&] { read_matrix_market(bad.string()); }) == ErrorCode::parse);

  CHECK(code_of([] { read_matrix_market("/nonexistent/file.mtx"); }) == ErrorCode::io);
}
