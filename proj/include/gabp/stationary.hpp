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

#include "gabp/accel.hpp"

namespace gabp {

enum class StationaryMethod { jacobi, gauss_seidel, sor };

const char* to_string(StationaryMethod m);

struct StationaryConfig {
  StationaryMethod method = StationaryMethod::jacobi;
  double omega = 1.0;
  double eps = 1e-6;
  int max_rounds = 10000;
  std::optional<Vec> x0;  // defaults to b
  Accel accel = Accel::none;
};

class StationaryProcess : public IterativeProcess {
 public:
  StationaryProcess(const SymmetricSystem& sys, StationaryMethod method, double omega, Vec x0);
  Vec current() const override { return x_; }
  double step() override;
  bool diverged() const override;
  bool restartable() const override { return true; }
  void restart(const Vec& x) override { x_ = x; }
  double residual(const Vec& x) const override { return residual_per_equation(sys_, x); }

 private:
  const SymmetricSystem& sys_;
  StationaryMethod method_;
  double omega_;
  Vec x_, scratch_;
};

SolveReport solve_stationary(const SymmetricSystem& sys, const StationaryConfig& cfg);

// Classical optimum 2/(1+sqrt(1-rho(B_J)^2)) when B_J has a real spectrum with
// rho < 1; golden-section search over (0,2) on the iteration count otherwise.
double optimal_sor_omega(const SymmetricSystem& sys, double eps = 1e-6, int max_rounds = 10000);

// Iterations used by SOR at the given omega (max_rounds + 1 when not converged).
int sor_iterations(const SymmetricSystem& sys, double omega, double eps, int max_rounds);

}  // namespace gabp
