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
#include <vector>

#include "gabp/numcore.hpp"

namespace gabp {

enum class Schedule { serial, parallel };
enum class Accel { none, aitken, steffensen };
enum class Status { converged, max_rounds, diverged };

const char* to_string(Schedule s);
const char* to_string(Accel a);
const char* to_string(Status s);

struct SolverConfig {
  Schedule schedule = Schedule::parallel;
  double eps = 1e-6;
  int max_rounds = 1000;
  Accel accel = Accel::none;
  int threads = 1;
  // Zero diagonal entries are legal for the message rules as long as every
  // P_{i\j} stays nonzero (augmented systems with a zero noise block).
  bool allow_zero_diagonal = false;
};

struct TraceRow {
  int round;
  double max_dmsg;
  double residual;
};

struct SolveReport {
  Vec x;
  Vec P;
  int rounds = 0;
  int cycles = 0;  // Steffensen map applications; 0 for other runs
  std::vector<TraceRow> trace;
  Status status = Status::max_rounds;
};

// Directed edge e = (i -> j) lives in node i's slot range [offset[i], offset[i+1]).
// P[e], M[e] are the precision and mean of the message i -> j.
struct MessageState {
  std::vector<double> P;
  std::vector<double> M;
};

// Message update rule used by a round.
enum class Rule {
  sum_product,  // per-edge exclusion sums
  broadcast,    // per-node aggregates, peers subtract their own term
  max_product,  // maximize over x_i instead of integrating
};

class GabpEngine {
 public:
  explicit GabpEngine(const SymmetricSystem& sys, Schedule schedule = Schedule::parallel,
                      Rule rule = Rule::sum_product, int threads = 1);

  // One round over every directed edge; returns the max |dP|, |dmu| change.
  double round();
  void set_rhs(const Vec& b);
  void reset();

  Vec means() const;
  Vec precisions() const;
  const MessageState& state() const { return st_; }
  MessageState& state() { return st_; }
  bool diverged() const;

  int src(int e) const { return src_[e]; }
  int dst(int e) const { return dst_[e]; }
  int edge_count() const { return static_cast<int>(dst_.size()); }
  int edge_index(int i, int j) const;
  int emitted_last_round() const { return emitted_; }
  const SymmetricSystem& system() const { return sys_; }

 private:
  void compute_node(int i, const MessageState& in, MessageState& out);
  void node_aggregate(int i, const MessageState& in, double& Pt, double& ht) const;

  SymmetricSystem sys_;
  Schedule schedule_;
  Rule rule_;
  int threads_;
  std::vector<int> offset_, src_, dst_, rev_;
  std::vector<double> a_;
  MessageState st_, prev_;
  int emitted_ = 0;
};

// Message state after one round from `state`, following the printed rules.
void gabp_round(const SymmetricSystem& sys, MessageState& state, Schedule schedule);

SolveReport solve_gabp(const SymmetricSystem& sys, const SolverConfig& cfg);
SolveReport solve_gabp_broadcast(const SymmetricSystem& sys, const SolverConfig& cfg);
SolveReport solve_gabp_max_product(const SymmetricSystem& sys, const SolverConfig& cfg);
SolveReport solve_gabp_with(GabpEngine& engine, const SolverConfig& cfg);

// GaBP with zeroed precision messages and the full neighborhood; carries
// the products P_ij mu_ij, initialized to zero. After t rounds the means
// equal Jacobi's x^t started from x^0 = D^-1 b.
class JacobiGabp {
 public:
  explicit JacobiGabp(const SymmetricSystem& sys);
  void round();
  Vec means() const;

 private:
  SymmetricSystem sys_;
  std::vector<std::vector<double>> h_;  // h_[i][k]: product message from neighbor k to i
};

void write_trace_csv(const std::vector<TraceRow>& trace, const std::string& path);
std::string trace_csv(const std::vector<TraceRow>& trace);

}  // namespace gabp
