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

#include "gabp/gabp.hpp"

namespace gabp {

// Componentwise Aitken delta-squared. Components whose second difference is
// below 1e-14 * (1 + |x2|) pass x2 through.
Vec aitken(const Vec& x0, const Vec& x1, const Vec& x2);

// A solver that can be advanced one step at a time.
class IterativeProcess {
 public:
  virtual ~IterativeProcess() = default;
  virtual Vec current() const = 0;
  // Advances one step and returns the solver's own change metric.
  virtual double step() = 0;
  virtual bool diverged() const = 0;
  virtual bool restartable() const { return false; }
  virtual void restart(const Vec&) {}
  virtual double residual(const Vec& x) const = 0;
  virtual Vec precisions() const { return {}; }
};

// Two steps, one Aitken combine, restart from the combined point when the
// process allows it. Each cycle counts 3 rounds.
SolveReport steffensen(IterativeProcess& p, const SolverConfig& cfg);

// Aitken over a sliding window of the last three iterates; one round per step.
SolveReport aitken_sliding(IterativeProcess& p, const SolverConfig& cfg);

class GabpProcess : public IterativeProcess {
 public:
  explicit GabpProcess(GabpEngine& e) : e_(e) {}
  Vec current() const override { return e_.means(); }
  double step() override { return e_.round(); }
  bool diverged() const override { return e_.diverged(); }
  double residual(const Vec& x) const override { return residual_per_equation(e_.system(), x); }
  Vec precisions() const override { return e_.precisions(); }

 private:
  GabpEngine& e_;
};

}  // namespace gabp
