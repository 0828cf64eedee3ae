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

// Exercises the shared library through its C header only.

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>

#include "gabp/gabp_c.h"

namespace {

const double kToyA[9] = {1, -2, 3, -2, 1, 0, 3, 0, 1};
const double kToyB[3] = {-6, 0, 2};

std::string take(char* s) {
  std::string out = s ? s : "";
  gabp_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("toy solve through the C API") {
  gabp_system* s = nullptr;
  REQUIRE(gabp_system_from_dense(3, kToyA, kToyB, &s) == GABP_OK);
  CHECK(gabp_system_size(s) == 3);
  gabp_solver_options o;
  gabp_solver_options_default(&o);
  o.eps = 1e-12;
  gabp_report* r = nullptr;
  REQUIRE(gabp_solve(s, &o, &r) == GABP_OK);
  CHECK(gabp_report_status(r) == GABP_CONVERGED);
  CHECK(gabp_report_rounds(r) <= 4);
  REQUIRE(gabp_report_size(r) == 3);
  const double* x = gabp_report_x(r);
  const double* P = gabp_report_precision(r);
  const double xe[3] = {1, 2, -1}, pe[3] = {-12, 1.5, 4};
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(x[i] - xe[i]) < 1e-9);
    CHECK(std::abs(P[i] - pe[i]) < 1e-9);
  }
  char* csv = nullptr;
  REQUIRE(gabp_report_trace_csv(r, &csv) == GABP_OK);
  CHECK(take(csv).rfind("round,max_dmsg,residual", 0) == 0);
  char* sum = nullptr;
  REQUIRE(gabp_report_summary(r, &sum) == GABP_OK);
  CHECK(take(sum).find("converged") != std::string::npos);
  gabp_report_free(r);

  o.method = GABP_METHOD_JACOBI;
  REQUIRE(gabp_solve(s, &o, &r) == GABP_OK);
  CHECK(gabp_report_precision(r) == nullptr);
  gabp_report_free(r);
  gabp_system_free(s);
}

TEST_CASE("error codes and messages") {
  gabp_system* s = nullptr;
  const double asym[4] = {2, 1, 0, 2};
  const double b[2] = {1, 1};
  CHECK(gabp_system_from_dense(2, asym, b, &s) == GABP_E_ASYMMETRIC);
  CHECK(s == nullptr);
  CHECK(std::strlen(gabp_last_error()) > 0);
  CHECK(gabp_system_read_mtx("/nonexistent/a.mtx", nullptr, &s) == GABP_E_IO);
  CHECK(gabp_system_from_dense(3, nullptr, b, &s) == GABP_E_INVALID);
  CHECK(gabp_system_gold(5, &s) == GABP_E_INVALID);
  gabp_solver_options o;
  gabp_solver_options_default(&o);
  o.eps = -1.0;
  REQUIRE(gabp_system_gold(3, &s) == GABP_OK);
  gabp_report* r = nullptr;
  CHECK(gabp_solve(s, &o, &r) == GABP_E_INVALID);
  CHECK(r == nullptr);
  CHECK(gabp_solve(nullptr, &o, &r) == GABP_E_INVALID);
  gabp_system_free(s);
  gabp_system_free(nullptr);
  gabp_report_free(nullptr);
}

TEST_CASE("diagnostics, omega and files") {
  gabp_system* s = nullptr;
  REQUIRE(gabp_system_gold(4, &s) == GABP_OK);
  char* kv = nullptr;
  REQUIRE(gabp_diagnose(s, 1e-6, &kv) == GABP_OK);
  std::string d = take(kv);
  CHECK(d.find("rho_abs=0.874") != std::string::npos);
  CHECK(d.find("walk_summable=true") != std::string::npos);
  double w = 0.0;
  REQUIRE(gabp_optimal_omega(s, 1e-6, &w) == GABP_OK);
  CHECK(w >= 1.0);
  CHECK(w < 2.0);

  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "gabp_capi_test";
  fs::create_directories(dir);
  std::string a = (dir / "a.mtx").string(), bb = (dir / "b.mtx").string();
  REQUIRE(gabp_system_write_mtx(s, a.c_str(), bb.c_str()) == GABP_OK);
  gabp_system* t = nullptr;
  REQUIRE(gabp_system_read_mtx(a.c_str(), bb.c_str(), &t) == GABP_OK);
  gabp_solver_options o;
  gabp_solver_options_default(&o);
  o.eps = 1e-12;
  gabp_report *r1 = nullptr, *r2 = nullptr;
  REQUIRE(gabp_solve(s, &o, &r1) == GABP_OK);
  REQUIRE(gabp_solve(t, &o, &r2) == GABP_OK);
  for (int i = 0; i < 4; ++i) CHECK(gabp_report_x(r1)[i] == doctest::Approx(gabp_report_x(r2)[i]).epsilon(1e-12));
  gabp_report_free(r1);
  gabp_report_free(r2);
  gabp_system_free(t);
  gabp_system_free(s);
}

TEST_CASE("convergence fix through the C API") {
  // Eigenvalues 2.2, 0.4, 0.4; walk radius 1.2.
  const double A[9] = {1.0, 0.6, 0.6, 0.6, 1.0, 0.6, 0.6, 0.6, 1.0};
  const double b[3] = {1, 2, 3};
  gabp_system* s = nullptr;
  REQUIRE(gabp_system_from_dense(3, A, b, &s) == GABP_OK);
  gabp_solver_options in;
  gabp_solver_options_default(&in);
  in.eps = 1e-12;
  in.max_rounds = 5000;
  gabp_fix_options f;
  gabp_fix_options_default(&f);
  f.outer_eps = 1e-10;
  f.max_outer = 5000;
  gabp_report* r = nullptr;
  char* outer = nullptr;
  REQUIRE(gabp_fix(s, &in, &f, &r, &outer) == GABP_OK);
  CHECK(gabp_report_status(r) == GABP_CONVERGED);
  CHECK(take(outer).rfind("outer,inner_rounds,dx", 0) == 0);
  // Residual check against A.
  const double* x = gabp_report_x(r);
  for (int i = 0; i < 3; ++i) {
    double ax = 0.0;
    for (int j = 0; j < 3; ++j) ax += A[3 * i + j] * x[j];
    CHECK(std::abs(ax - b[i]) < 1e-8);
  }
  gabp_report_free(r);
  gabp_system_free(s);
}

TEST_CASE("demo entry points") {
  gabp_solver_options o;
  gabp_solver_options_default(&o);
  o.eps = 1e-12;
  o.max_rounds = 5000;
  char* csv = nullptr;
  REQUIRE(gabp_kalman_demo(3, 2, 3, 7, &o, &csv) == GABP_OK);
  CHECK(take(csv).rfind("step,p_diff,x_diff,rounds", 0) == 0);
  REQUIRE(gabp_cdma_demo(32, 8, 0.1, 1, 1, &o, &csv) == GABP_OK);
  CHECK(!take(csv).empty());
  int conv = 0;
  REQUIRE(gabp_num(10, 20, 3.0, 2, "direct", 1e-4, 100, 0.0, 1, &csv, &conv) == GABP_OK);
  CHECK(conv == 1);
  CHECK(take(csv).rfind("step,gap,inner_iters", 0) == 0);
  CHECK(gabp_num(10, 20, 3.0, 2, "simplex", 1e-4, 100, 0.0, 1, &csv, &conv) == GABP_E_INVALID);
  CHECK(std::strlen(gabp_version()) > 0);
}
