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

#include <optional>
#include <string>

#include "gabp/numcore.hpp"

namespace gabp {

struct ConvergenceReport {
  bool strict_dd = false;
  DominanceClass dominance = DominanceClass::none;
  double rho_abs = 0.0;  // rho(|I - A_norm|)
  bool walk_summable = false;
  std::optional<double> gamma;
  std::optional<int> bound_rounds;
};

ConvergenceReport check_conditions(const SymmetricSystem& sys, double eps = 1e-6);

// ceil(log eps / log gamma), both arguments in (0,1).
int bound_rounds(double gamma, double eps);

// rho(|I - A|) of the unit-diagonal normalization of a positive-diagonal system.
double walk_radius(const SymmetricSystem& sys);

std::string to_key_values(const ConvergenceReport& r);

}  // namespace gabp
