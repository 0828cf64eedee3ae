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

#include "gabp/accel.hpp"

#include <cmath>
#include <limits>

namespace gabp {

Vec aitken(const Vec& x0, const Vec& x1, const Vec& x2) {
  if (x0.size() != x1.size() || x1.size() != x2.size())
    throw Error(ErrorCode::dimension, "aitken inputs differ in length");
  Vec y = x2;
  for (int i = 0; i < y.size(); ++i) {
    const double d = x2[i] - 2.0 * x1[i] + x0[i];
    if (std::abs(d) < 1e-14 * (1.0 + std::abs(x2[i]))) continue;
    const double t = x1[i] - x0[i];
    y[i] = x0[i] - t * t / d;
  }
  return y;
}

namespace {

double max_abs_diff(const Vec& a, const Vec& b) {
  return a.size() ? (a - b).cwiseAbs().maxCoeff() : 0.0;
}

// One counted underlying step. Returns true when the run is finished.
bool advance(IterativeProcess& p, const SolverConfig& cfg, SolveReport& rep) {
  double d = p.step();
  ++rep.rounds;
  rep.x = p.current();
  rep.trace.push_back({rep.rounds, d, p.residual(rep.x)});
  if (p.diverged() || !std::isfinite(d)) {
    rep.status = Status::diverged;
    return true;
  }
  if (d < cfg.eps) {
    rep.status = Status::converged;
    return true;
  }
  return rep.rounds >= cfg.max_rounds;
}

}  // namespace

SolveReport steffensen(IterativeProcess& p, const SolverConfig& cfg) {
  SolveReport rep;
  rep.status = Status::max_rounds;
  bool have_prev = false;
  Vec y_prev;
  while (rep.rounds < cfg.max_rounds) {
    Vec x0 = p.current();
    ++rep.cycles;
    if (advance(p, cfg, rep)) break;
    Vec x1 = p.current();
    if (advance(p, cfg, rep)) break;
    Vec x2 = p.current();
    Vec y = aitken(x0, x1, x2);
    ++rep.rounds;
    double change = have_prev ? max_abs_diff(y, y_prev) : std::numeric_limits<double>::infinity();
    rep.x = y;
    rep.trace.push_back({rep.rounds, change, p.residual(y)});
    if (!y.allFinite()) {
      rep.status = Status::diverged;
      break;
    }
    if (p.restartable()) p.restart(y);
    if (change < cfg.eps) {
      rep.status = Status::converged;
      break;
    }
    y_prev = std::move(y);
    have_prev = true;
  }
  rep.P = p.precisions();
  return rep;
}

SolveReport aitken_sliding(IterativeProcess& p, const SolverConfig& cfg) {
  SolveReport rep;
  rep.status = Status::max_rounds;
  Vec xm2, xm1 = p.current(), y_prev;
  int have = 1;
  bool have_y = false;
  while (rep.rounds < cfg.max_rounds) {
    double d = p.step();
    ++rep.rounds;
    Vec x = p.current();
    if (p.diverged() || !std::isfinite(d)) {
      rep.x = x;
      rep.trace.push_back({rep.rounds, d, p.residual(x)});
      rep.status = Status::diverged;
      break;
    }
    if (d < cfg.eps) {
      rep.x = x;
      rep.trace.push_back({rep.rounds, d, p.residual(x)});
      rep.status = Status::converged;
      break;
    }
    ++have;
    if (have >= 3) {
      Vec y = aitken(xm2, xm1, x);
      double change = have_y ? max_abs_diff(y, y_prev) : std::numeric_limits<double>::infinity();
      rep.x = y;
      rep.trace.push_back({rep.rounds, change, p.residual(y)});
      if (have_y && change < cfg.eps) {
        rep.status = Status::converged;
        break;
      }
      y_prev = std::move(y);
      have_y = true;
    } else {
      rep.x = x;
      rep.trace.push_back({rep.rounds, d, p.residual(x)});
    }
    xm2 = std::move(xm1);
    xm1 = std::move(x);
  }
  rep.P = p.precisions();
  return rep;
}

}  // namespace gabp
