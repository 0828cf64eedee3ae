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

#pragma once

#include <string>

#include "gabp/stationary.hpp"

namespace gabp {

enum class Method { gabp, gabp_broadcast, jacobi, gauss_seidel, sor, sor_optimal };

struct MethodConfig {
  Method method = Method::gabp;
  SolverConfig solver;  // schedule, eps, max_rounds, accel, threads
  double omega = 1.0;   // SOR only
};

SolveReport solve(const SymmetricSystem& sys, const MethodConfig& cfg);

const char* to_string(Method m);
Method parse_method(const std::string& s);
Schedule parse_schedule(const std::string& s);
Accel parse_accel(const std::string& s);

}  // namespace gabp
