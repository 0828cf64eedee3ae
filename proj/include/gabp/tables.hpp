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
#include <vector>

#include "gabp/solvers.hpp"

namespace gabp {

// Iteration-count benchmarks: eps = 1e-6, classical methods start at x0 = b
// and stop on max |dx|; GaBP stops on the message change.
struct TableCell {
  std::string instance;
  int iterations = 0;  // Steffensen map applications for Steffensen rows
  int rounds = 0;      // counted rounds, combine steps included
  Status status = Status::max_rounds;
  std::optional<int> target;  // nullopt: divergence expected
  double tolerance = 0.0;     // absolute
  bool pass = false;
};

struct TableRow {
  std::string method;
  std::vector<TableCell> cells;
  bool pass = false;
};

struct Table {
  std::string name;
  std::vector<std::string> instances;
  std::vector<TableRow> rows;
  bool pass() const;
};

// "tab_1", "tab_2", "tab_nonPSD", "tab_2D_Poisson".
std::vector<std::string> table_names();
Table make_table(const std::string& name, int threads = 1);

// table,method,<instance>,<instance>_target,<instance>_rounds,...,pass
std::string table_csv(const Table& t);

SymmetricSystem non_psd_system();

// 3x3 grid Poisson problem with f = -1 on the unit square.
SymmetricSystem poisson_table_system();

}  // namespace gabp
