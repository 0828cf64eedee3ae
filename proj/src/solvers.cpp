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

#include "gabp/solvers.hpp"

namespace gabp {

SolveReport solve(const SymmetricSystem& sys, const MethodConfig& cfg) {
  switch (cfg.method) {
    case Method::gabp: return solve_gabp(sys, cfg.solver);
    case Method::gabp_broadcast: return solve_gabp_broadcast(sys, cfg.solver);
    default: break;
  }
  StationaryConfig sc;
  sc.eps = cfg.solver.eps;
  sc.max_rounds = cfg.solver.max_rounds;
  sc.accel = cfg.solver.accel;
  sc.omega = cfg.omega;
  switch (cfg.method) {
    case Method::jacobi: sc.method = StationaryMethod::jacobi; break;
    case Method::gauss_seidel: sc.method = StationaryMethod::gauss_seidel; break;
    case Method::sor: sc.method = StationaryMethod::sor; break;
    case Method::sor_optimal:
      sc.method = StationaryMethod::sor;
      sc.omega = optimal_sor_omega(sys, sc.eps, sc.max_rounds);
      break;
    default: break;
  }
  return solve_stationary(sys, sc);
}

const char* to_string(Method m) {
  switch (m) {
    case Method::gabp: return "gabp";
    case Method::gabp_broadcast: return "gabp-broadcast";
    case Method::jacobi: return "jacobi";
    case Method::gauss_seidel: return "gs";
    case Method::sor: return "sor";
    case Method::sor_optimal: return "sor-opt";
  }
  return "gabp";
}

Method parse_method(const std::string& s) {
  if (s == "gabp") return Method::gabp;
  if (s == "gabp-broadcast" || s == "broadcast") return Method::gabp_broadcast;
  if (s == "jacobi") return Method::jacobi;
  if (s == "gs" || s == "gauss-seidel") return Method::gauss_seidel;
  if (s == "sor") return Method::sor;
  if (s == "sor-opt") return Method::sor_optimal;
  throw Error(ErrorCode::invalid_argument, "unknown method '" + s + "'");
}

Schedule parse_schedule(const std::string& s) {
  if (s == "serial") return Schedule::serial;
  if (s == "parallel") return Schedule::parallel;
  throw Error(ErrorCode::invalid_argument, "unknown schedule '" + s + "'");
}

Accel parse_accel(const std::string& s) {
  if (s == "none") return Accel::none;
  if (s == "aitken") return Accel::aitken;
  if (s == "steffensen") return Accel::steffensen;
  throw Error(ErrorCode::invalid_argument, "unknown acceleration '" + s + "'");
}

}  // namespace gabp
