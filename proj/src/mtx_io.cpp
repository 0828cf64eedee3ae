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

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "gabp/numcore.hpp"

namespace gabp {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void parse_error(const std::string& path, const std::string& msg) {
  throw Error(ErrorCode::parse, path + ": " + msg);
}

}  // namespace

MtxData read_mtx(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) parse_error(path, "empty file");
  std::istringstream hs(line);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
    parse_error(path, "malformed header");
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format != "coordinate" && format != "array") parse_error(path, "unknown format '" + format + "'");
  if (field != "real" && field != "integer" && field != "double")
    parse_error(path, "unsupported field '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric")
    parse_error(path, "unsupported symmetry '" + symmetry + "'");

  MtxData d;
  d.array = format == "array";
  d.symmetric = symmetry == "symmetric";

  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '%') continue;
    break;
  }
  std::istringstream ss(line);
  long nnz = 0;
  if (!(ss >> d.rows >> d.cols)) parse_error(path, "missing size line");
  if (!d.array && !(ss >> nnz)) parse_error(path, "missing entry count");
  if (d.rows < 0 || d.cols < 0 || nnz < 0) parse_error(path, "negative size");
  if (d.symmetric && d.rows != d.cols) parse_error(path, "symmetric matrix must be square");

  if (d.array) {
    // Column-major; symmetric arrays store the lower triangle only.
    std::vector<double> vals;
    double v;
    while (in >> v) vals.push_back(v);
    std::size_t expect = d.symmetric ? static_cast<std::size_t>(d.rows) * (d.rows + 1) / 2
                                     : static_cast<std::size_t>(d.rows) * d.cols;
    if (vals.size() != expect) parse_error(path, "array entry count mismatch");
    std::size_t k = 0;
    for (int c = 0; c < d.cols; ++c)
      for (int r = d.symmetric ? c : 0; r < d.rows; ++r) d.entries.push_back({r, c, vals[k++]});
    return d;
  }

  std::map<std::pair<int, int>, double> seen;
  for (long k = 0; k < nnz; ++k) {
    int r, c;
    double v;
    if (!(in >> r >> c >> v)) parse_error(path, "truncated entry list");
    if (r < 1 || c < 1 || r > d.rows || c > d.cols) parse_error(path, "entry index out of range");
    --r;
    --c;
    if (!seen.emplace(std::make_pair(r, c), v).second)
      throw Error(ErrorCode::duplicate_entry, path + ": duplicate entry (" + std::to_string(r + 1) +
                                                  "," + std::to_string(c + 1) + ")");
    if (d.symmetric && r != c) {
      auto it = seen.find({c, r});
      if (it != seen.end() && it->second != v)
        throw Error(ErrorCode::asymmetric, path + ": conflicting mirrored entries");
    }
    d.entries.push_back({r, c, v});
  }
  return d;
}

SymmetricSystem read_matrix_market(const std::string& path, const Vec& b) {
  MtxData d = read_mtx(path);
  if (d.rows != d.cols) throw Error(ErrorCode::dimension, path + ": matrix is not square");
  if (b.size() != d.rows) throw Error(ErrorCode::dimension, path + ": rhs length differs from matrix size");
  const int n = d.rows;
  Vec diag = Vec::Zero(n);
  std::map<std::pair<int, int>, double> off;
  for (const auto& e : d.entries) {
    if (e.i == e.j) {
      diag[e.i] = e.v;
      continue;
    }
    auto key = std::make_pair(std::min(e.i, e.j), std::max(e.i, e.j));
    auto it = off.find(key);
    if (it == off.end()) {
      off.emplace(key, e.v);
    } else if (it->second != e.v) {
      throw Error(ErrorCode::asymmetric, path + ": matrix is not symmetric at (" +
                                             std::to_string(e.i + 1) + "," + std::to_string(e.j + 1) + ")");
    }
  }
  if (!d.symmetric) {
    // A general file must list both halves of every pair.
    std::map<std::pair<int, int>, int> count;
    for (const auto& e : d.entries)
      if (e.i != e.j && e.v != 0.0) ++count[{std::min(e.i, e.j), std::max(e.i, e.j)}];
    for (const auto& [key, c] : count)
      if (c != 2)
        throw Error(ErrorCode::asymmetric, path + ": matrix is not symmetric at (" +
                                               std::to_string(key.first + 1) + "," +
                                               std::to_string(key.second + 1) + ")");
  }
  std::vector<Triplet> t;
  for (const auto& [key, v] : off) t.push_back({key.first, key.second, v});
  return SymmetricSystem(diag, b, t);
}

SymmetricSystem read_matrix_market(const std::string& path) {
  MtxData d = read_mtx(path);
  return read_matrix_market(path, Vec::Zero(d.rows));
}

Mat read_dense_mtx(const std::string& path) {
  MtxData d = read_mtx(path);
  Mat M = Mat::Zero(d.rows, d.cols);
  for (const auto& e : d.entries) {
    M(e.i, e.j) = e.v;
    if (d.symmetric) M(e.j, e.i) = e.v;
  }
  return M;
}

Vec read_vector_mtx(const std::string& path) {
  Mat M = read_dense_mtx(path);
  if (M.cols() != 1 && M.rows() != 1) throw Error(ErrorCode::dimension, path + ": not a vector");
  return M.cols() == 1 ? Vec(M.col(0)) : Vec(M.row(0).transpose());
}

void write_matrix_market(const SymmetricSystem& sys, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path);
  const int n = sys.n();
  std::size_t nnz = sys.edge_count() + n;
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << n << " " << n << " " << nnz << "\n";
  for (int j = 0; j < n; ++j) {
    out << j + 1 << " " << j + 1 << " " << fmt17(sys.diag(j)) << "\n";
    for (const auto& nb : sys.neighbors(j))
      if (nb.j > j) out << nb.j + 1 << " " << j + 1 << " " << fmt17(nb.a) << "\n";
  }
  if (!out) throw Error(ErrorCode::io, "write failed for " + path);
}

void write_dense_mtx(const Mat& M, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path);
  out << "%%MatrixMarket matrix array real general\n";
  out << M.rows() << " " << M.cols() << "\n";
  for (int c = 0; c < M.cols(); ++c)
    for (int r = 0; r < M.rows(); ++r) out << fmt17(M(r, c)) << "\n";
  if (!out) throw Error(ErrorCode::io, "write failed for " + path);
}

void write_vector_mtx(const Vec& v, const std::string& path) { write_dense_mtx(Mat(v), path); }

}  // namespace gabp
