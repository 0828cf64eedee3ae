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

#include "gabp/gabp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "gabp/accel.hpp"

namespace gabp {

namespace {
constexpr double kDivergeBound = 1e12;
}

const char* to_string(Schedule s) { return s == Schedule::serial ? "serial" : "parallel"; }

const char* to_string(Accel a) {
  switch (a) {
    case Accel::none: return "none";
    case Accel::aitken: return "aitken";
    case Accel::steffensen: return "steffensen";
  }
  return "none";
}

const char* to_string(Status s) {
  switch (s) {
    case Status::converged: return "converged";
    case Status::max_rounds: return "max_rounds";
    case Status::diverged: return "diverged";
  }
  return "max_rounds";
}

GabpEngine::GabpEngine(const SymmetricSystem& sys, Schedule schedule, Rule rule, int threads)
    : sys_(sys), schedule_(schedule), rule_(rule), threads_(std::max(1, threads)) {
  const int n = sys_.n();
  offset_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) offset_[i + 1] = offset_[i] + static_cast<int>(sys_.neighbors(i).size());
  const int E = offset_[n];
  src_.resize(E);
  dst_.resize(E);
  a_.resize(E);
  rev_.resize(E);
  for (int i = 0; i < n; ++i) {
    int e = offset_[i];
    for (const auto& nb : sys_.neighbors(i)) {
      src_[e] = i;
      dst_[e] = nb.j;
      a_[e] = nb.a;
      ++e;
    }
  }
  for (int e = 0; e < E; ++e) rev_[e] = edge_index(dst_[e], src_[e]);
  reset();
}

void GabpEngine::reset() {
  const int E = edge_count();
  st_.P.assign(E, 0.0);
  st_.M.assign(E, 0.0);
  prev_ = st_;
}

void GabpEngine::set_rhs(const Vec& b) { sys_ = sys_.with_b(b); }

int GabpEngine::edge_index(int i, int j) const {
  auto first = dst_.begin() + offset_[i];
  auto last = dst_.begin() + offset_[i + 1];
  auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return -1;
  return static_cast<int>(it - dst_.begin());
}

void GabpEngine::node_aggregate(int i, const MessageState& in, double& Pt, double& ht) const {
  Pt = sys_.diag(i);
  ht = sys_.b()[i];
  for (int e = offset_[i]; e < offset_[i + 1]; ++e) {
    int f = rev_[e];
    Pt += in.P[f];
    ht += in.P[f] * in.M[f];
  }
}

void GabpEngine::compute_node(int i, const MessageState& in, MessageState& out) {
  const int lo = offset_[i], hi = offset_[i + 1];
  if (lo == hi) return;
  double Pt = 0.0, ht = 0.0;
  if (rule_ == Rule::broadcast) node_aggregate(i, in, Pt, ht);
  // Outgoing slots of i are never read while computing i's messages, so the
  // serial schedule can write into the same state it reads.
  for (int e = lo; e < hi; ++e) {
    const int j = dst_[e];
    const double A = a_[e];
    double Pex, hex;
    if (rule_ == Rule::broadcast) {
      const int f = rev_[e];
      Pex = Pt - in.P[f];
      hex = ht - in.P[f] * in.M[f];
    } else {
      Pex = sys_.diag(i);
      hex = sys_.b()[i];
      for (int g = lo; g < hi; ++g) {
        if (g == e) continue;
        const int f = rev_[g];
        Pex += in.P[f];
        hex += in.P[f] * in.M[f];
      }
    }
    if (Pex == 0.0) throw SingularSubgraph(i, j);
    if (rule_ == Rule::max_product) {
      // x_i at the maximum, as an affine function alpha + beta x_j, substituted
      // back into the exponent -1/2 Pex x_i^2 + hex x_i - A x_i x_j.
      const double alpha = hex / Pex;
      const double beta = -A / Pex;
      const double c2 = -0.5 * Pex * beta * beta - A * beta;
      const double c1 = -Pex * alpha * beta + hex * beta - A * alpha;
      out.P[e] = -2.0 * c2;
      out.M[e] = c1 / out.P[e];
    } else {
      out.P[e] = -A * A / Pex;
      out.M[e] = hex / A;
    }
  }
}

double GabpEngine::round() {
  const int n = sys_.n();
  prev_ = st_;
  if (schedule_ == Schedule::serial) {
    for (int i = 0; i < n; ++i) compute_node(i, st_, st_);
  } else if (threads_ == 1 || n < 256) {
    for (int i = 0; i < n; ++i) compute_node(i, prev_, st_);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex mu;
    const int chunk = (n + threads_ - 1) / threads_;
    for (int t = 0; t < threads_; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (int i = t * chunk; i < std::min(n, (t + 1) * chunk); ++i) compute_node(i, prev_, st_);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!err) err = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
  }
  emitted_ = 0;
  if (rule_ == Rule::broadcast) {
    for (int i = 0; i < n; ++i) emitted_ += offset_[i + 1] > offset_[i] ? 1 : 0;
  } else {
    emitted_ = edge_count();
  }
  double d = 0.0;
  for (int e = 0; e < edge_count(); ++e) {
    double dp = std::abs(st_.P[e] - prev_.P[e]);
    double dm = std::abs(st_.M[e] - prev_.M[e]);
    if (std::isnan(dp) || std::isnan(dm)) return INFINITY;
    d = std::max(d, std::max(dp, dm));
  }
  return d;
}

bool GabpEngine::diverged() const {
  // M = h / A is unbounded for round-off sized A, so bound P M instead.
  for (int e = 0; e < edge_count(); ++e)
    if (!std::isfinite(st_.P[e]) || !std::isfinite(st_.M[e]) || std::abs(st_.P[e] * st_.M[e]) > kDivergeBound)
      return true;
  return false;
}

Vec GabpEngine::precisions() const {
  const int n = sys_.n();
  Vec P(n);
  for (int i = 0; i < n; ++i) {
    double Pt, ht;
    node_aggregate(i, st_, Pt, ht);
    P[i] = Pt;
  }
  return P;
}

Vec GabpEngine::means() const {
  const int n = sys_.n();
  Vec x(n);
  for (int i = 0; i < n; ++i) {
    double Pt, ht;
    node_aggregate(i, st_, Pt, ht);
    x[i] = ht / Pt;
  }
  return x;
}

void gabp_round(const SymmetricSystem& sys, MessageState& state, Schedule schedule) {
  GabpEngine e(sys, schedule);
  if (state.P.size() != static_cast<std::size_t>(e.edge_count()) || state.M.size() != state.P.size())
    throw Error(ErrorCode::dimension, "message state does not match the edge set");
  e.state() = state;
  e.round();
  state = e.state();
}

namespace {

void check_diagonal(const SymmetricSystem& sys, const SolverConfig& cfg) {
  if (cfg.eps <= 0.0) throw Error(ErrorCode::invalid_argument, "eps must be positive");
  if (cfg.max_rounds < 1) throw Error(ErrorCode::invalid_argument, "max_rounds must be at least 1");
  if (cfg.allow_zero_diagonal) return;
  for (int i = 0; i < sys.n(); ++i)
    if (sys.diag(i) == 0.0)
      throw Error(ErrorCode::invalid_argument, "zero diagonal entry at index " + std::to_string(i));
}

}  // namespace

SolveReport solve_gabp_with(GabpEngine& engine, const SolverConfig& cfg) {
  check_diagonal(engine.system(), cfg);
  GabpProcess proc(engine);
  if (cfg.accel == Accel::steffensen) return steffensen(proc, cfg);
  if (cfg.accel == Accel::aitken) return aitken_sliding(proc, cfg);

  SolveReport rep;
  for (int r = 1; r <= cfg.max_rounds; ++r) {
    double d = engine.round();
    rep.rounds = r;
    rep.x = engine.means();
    rep.trace.push_back({r, d, residual_per_equation(engine.system(), rep.x)});
    if (engine.diverged()) {
      rep.status = Status::diverged;
      break;
    }
    if (d < cfg.eps) {
      rep.status = Status::converged;
      break;
    }
  }
  rep.P = engine.precisions();
  return rep;
}

SolveReport solve_gabp(const SymmetricSystem& sys, const SolverConfig& cfg) {
  check_diagonal(sys, cfg);
  GabpEngine e(sys, cfg.schedule, Rule::sum_product, cfg.threads);
  return solve_gabp_with(e, cfg);
}

SolveReport solve_gabp_broadcast(const SymmetricSystem& sys, const SolverConfig& cfg) {
  check_diagonal(sys, cfg);
  GabpEngine e(sys, cfg.schedule, Rule::broadcast, cfg.threads);
  return solve_gabp_with(e, cfg);
}

SolveReport solve_gabp_max_product(const SymmetricSystem& sys, const SolverConfig& cfg) {
  check_diagonal(sys, cfg);
  GabpEngine e(sys, cfg.schedule, Rule::max_product, cfg.threads);
  return solve_gabp_with(e, cfg);
}

JacobiGabp::JacobiGabp(const SymmetricSystem& sys) : sys_(sys) {
  h_.resize(sys.n());
  for (int i = 0; i < sys.n(); ++i) h_[i].assign(sys.neighbors(i).size(), 0.0);
}

void JacobiGabp::round() {
  const int n = sys_.n();
  // mu_{i\j} is the same for every j once node j's own message is included.
  Vec mu(n);
  for (int i = 0; i < n; ++i) {
    double s = sys_.b()[i];
    for (double v : h_[i]) s += v;
    mu[i] = s / sys_.diag(i);
  }
  for (int i = 0; i < n; ++i) {
    const auto& nbs = sys_.neighbors(i);
    for (std::size_t k = 0; k < nbs.size(); ++k) h_[i][k] = -nbs[k].a * mu[nbs[k].j];
  }
}

Vec JacobiGabp::means() const {
  Vec x(sys_.n());
  for (int i = 0; i < sys_.n(); ++i) {
    double s = sys_.b()[i];
    for (double v : h_[i]) s += v;
    x[i] = s / sys_.diag(i);
  }
  return x;
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream os;
  os << "round,max_dmsg,residual\n";
  char buf[96];
  for (const auto& r : trace) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", r.round, r.max_dmsg, r.residual);
    os << buf;
  }
  return os.str();
}

void write_trace_csv(const std::vector<TraceRow>& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path);
  out << trace_csv(trace);
}

}  // namespace gabp
