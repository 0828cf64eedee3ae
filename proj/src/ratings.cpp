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

#include "gabp/ratings.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <numeric>
#include <queue>

#include "gabp/convfix.hpp"

namespace gabp {

namespace {

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) i = parent[i] = parent[parent[i]];
  return i;
}

RatingResult wrap(SolveReport rep, bool flag) {
  RatingResult r;
  r.x = rep.x;
  r.report = std::move(rep);
  r.symmetrized = flag;
  return r;
}

}  // namespace

RatingSystem assemble_rating_system(const RatingProblem& p) {
  const WeightedGraph& g = p.graph;
  if (!(p.beta >= 0.0) || !std::isfinite(p.beta)) throw Error(ErrorCode::invalid_argument, "beta must be finite and non-negative");
  RatingSystem out;
  Mat W = symmetric_weights(g, &out.symmetrized);
  const int n = g.n;
  Vec diag = Vec::Zero(n), b = Vec::Zero(n);
  std::vector<bool> anchored(n, false);
  for (int i = 0; i < n; ++i) {
    const double w = g.node_w(i);
    if (w < 0.0) throw Error(ErrorCode::invalid_argument, "negative node weight at index " + std::to_string(i));
    if (!g.prior.empty() && g.prior[i]) {
      diag[i] = w;
      b[i] = w * *g.prior[i];
      anchored[i] = w > 0.0;
    }
  }
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<Triplet> t;
  if (p.beta > 0.0) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (W(i, j) > 0.0) {
          t.push_back({i, j, -p.beta * W(i, j)});
          diag[i] += p.beta * W(i, j);
          diag[j] += p.beta * W(i, j);
          parent[find_root(parent, i)] = find_root(parent, j);
        }
  }
  std::vector<bool> comp_ok(n, false);
  for (int i = 0; i < n; ++i)
    if (anchored[i]) comp_ok[find_root(parent, i)] = true;
  for (int i = 0; i < n; ++i)
    if (!comp_ok[find_root(parent, i)])
      throw Error(ErrorCode::degenerate, "node " + std::to_string(i) + " lies in a component without any prior; the minimizer is not unique");
  out.sys = SymmetricSystem(diag, b, t);
  return out;
}

double rating_cost(const RatingProblem& p, const Vec& x) {
  const WeightedGraph& g = p.graph;
  Mat W = symmetric_weights(g, nullptr);
  double e = 0.0;
  for (int i = 0; i < g.n; ++i) {
    if (!g.prior.empty() && g.prior[i]) e += g.node_w(i) * std::pow(x[i] - *g.prior[i], 2);
    for (int j = i + 1; j < g.n; ++j) e += p.beta * W(i, j) * std::pow(x[i] - x[j], 2);
  }
  return e;
}

RatingResult rate(const RatingProblem& p, const MethodConfig& cfg) {
  RatingSystem rs = assemble_rating_system(p);
  return wrap(solve(rs.sys, cfg), rs.symmetrized);
}

RatingResult solve_shifted(const Mat& B, double alpha, const Vec& rhs, const SolverConfig& cfg) {
  const int n = static_cast<int>(B.rows());
  if (B.cols() != n || rhs.size() != n) throw Error(ErrorCode::dimension, "shifted solve dimensions differ");
  const double tol = 1e-12 * std::max(1.0, B.cwiseAbs().maxCoeff());

  if ((B - B.transpose()).cwiseAbs().maxCoeff() <= tol) {
    Mat A = Mat::Identity(n, n) - alpha * B;
    return wrap(solve_gabp(SymmetricSystem::from_dense(A, rhs, tol), cfg), false);
  }

  // Try D B D^-1 symmetric: d_j = d_i sqrt(B_ij / B_ji) along a spanning forest.
  bool similar = true;
  for (int i = 0; i < n && similar; ++i)
    for (int j = 0; j < n; ++j)
      if ((B(i, j) != 0.0) != (B(j, i) != 0.0) || B(i, j) * B(j, i) < 0.0) {
        similar = false;
        break;
      }
  Vec d = Vec::Zero(n);
  if (similar) {
    for (int s = 0; s < n; ++s) {
      if (d[s] != 0.0) continue;
      d[s] = 1.0;
      std::queue<int> q;
      q.push(s);
      while (!q.empty()) {
        int i = q.front();
        q.pop();
        for (int j = 0; j < n; ++j)
          if (j != i && B(i, j) != 0.0 && d[j] == 0.0) {
            d[j] = d[i] * std::sqrt(B(i, j) / B(j, i));
            q.push(j);
          }
      }
    }
    Mat S = d.asDiagonal() * B * d.cwiseInverse().asDiagonal();
    similar = (S - S.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, S.cwiseAbs().maxCoeff());
    if (similar) {
      Mat A = Mat::Identity(n, n) - alpha * 0.5 * (S + S.transpose());
      SolveReport rep = solve_gabp(SymmetricSystem::from_dense(A, d.cwiseProduct(rhs)), cfg);
      rep.x = rep.x.cwiseQuotient(d);
      return wrap(std::move(rep), false);
    }
  }

  Mat A = Mat::Identity(n, n) - alpha * B;
  Mat N = A.transpose() * A;
  N = (0.5 * (N + N.transpose())).eval();
  SymmetricSystem sys = SymmetricSystem::from_dense(N, A.transpose() * rhs);
  FixReport fr = double_loop_solve(sys, LoadingSpec{}, cfg, OuterConfig{cfg.eps, 5000});
  return wrap(fr.report, true);
}

RatingResult spatial_rank(const Mat& R, double alpha, const SolverConfig& cfg) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw Error(ErrorCode::invalid_argument, "alpha must lie in [0,1)");
  if (R.rows() != R.cols()) throw Error(ErrorCode::dimension, "trust matrix must be square");
  if ((R.array() < 0.0).any()) throw Error(ErrorCode::invalid_argument, "trust matrix has a negative entry");
  for (int i = 0; i < R.rows(); ++i)
    if (R.row(i).sum() > 1.0 + 1e-12) throw Error(ErrorCode::invalid_argument, "trust row " + std::to_string(i) + " sums above one");
  return solve_shifted(R, alpha, Vec::Ones(R.rows()), cfg);
}

RatingResult personalized_pagerank(const Mat& M, const Vec& prior, double alpha, const SolverConfig& cfg) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::invalid_argument, "alpha must lie in (0,1)");
  if (M.rows() != M.cols() || prior.size() != M.rows()) throw Error(ErrorCode::dimension, "PageRank dimensions differ");
  if ((M.array() < 0.0).any()) throw Error(ErrorCode::invalid_argument, "transition matrix has a negative entry");
  for (int j = 0; j < M.cols(); ++j)
    if (std::abs(M.col(j).sum() - 1.0) > 1e-8)
      throw Error(ErrorCode::invalid_argument, "column " + std::to_string(j) + " of the transition matrix does not sum to one");
  RatingResult r = solve_shifted(M, alpha, prior, cfg);
  r.x *= 1.0 - alpha;
  r.report.x = r.x;
  return r;
}

RatingResult eigen_projection(const WeightedGraph& g, const SolverConfig& cfg) {
  return eigen_projection(g, Vec::Ones(g.n), cfg);
}

RatingResult eigen_projection(const WeightedGraph& g, const Vec& rhs, const SolverConfig& cfg) {
  Mat L = weighted_laplacian(g);
  const int n = g.n;
  if (rhs.size() != n) throw Error(ErrorCode::dimension, "rhs length differs from node count");
  if (n == 0) throw Error(ErrorCode::invalid_argument, "empty graph");
  SymmetricSystem full = SymmetricSystem::from_dense(L, rhs);
  if (!connected(full)) throw Error(ErrorCode::invalid_argument, "graph is not connected");
  Vec r = rhs.array() - rhs.mean();
  Vec x = Vec::Zero(n);
  SolveReport rep;
  if (n > 1) {
    rep = solve_gabp(SymmetricSystem::from_dense(L.bottomRightCorner(n - 1, n - 1), r.tail(n - 1)), cfg);
    x.tail(n - 1) = rep.x;
  } else {
    rep.status = Status::converged;
  }
  x.array() -= x.mean();
  rep.x = x;
  return wrap(std::move(rep), false);
}

RatingResult eigen_projection_full_cost(const WeightedGraph& g, const SolverConfig& cfg) {
  Mat A = 0.5 * weighted_laplacian(g);
  A.diagonal().array() += 1.0;
  return wrap(solve_gabp(SymmetricSystem::from_dense(A, Vec::Ones(g.n)), cfg), false);
}

namespace {

bool is_number(const std::string& s) {
  if (s.empty()) return false;
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return end && *end == '\0';
}

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

int parse_index(const std::string& tok, const std::string& path, int line) {
  if (!is_number(tok)) throw Error(ErrorCode::parse, path + ":" + std::to_string(line) + ": bad node index '" + tok + "'");
  double v = std::strtod(tok.c_str(), nullptr);
  if (v < 0 || v != std::floor(v) || v > 1e8)
    throw Error(ErrorCode::parse, path + ":" + std::to_string(line) + ": bad node index '" + tok + "'");
  return static_cast<int>(v);
}

}  // namespace

WeightedGraph read_rating_graph(const std::string& edges_path, const std::string& priors_path) {
  WeightedGraph g;
  std::ifstream in(edges_path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + edges_path);
  std::string line;
  int ln = 0, maxn = -1;
  while (std::getline(in, line)) {
    ++ln;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string a, b, w;
    ss >> a >> b >> w;
    if (g.edges.empty() && !is_number(a)) continue;
    if (b.empty()) throw Error(ErrorCode::parse, edges_path + ":" + std::to_string(ln) + ": expected 'src dst [weight]'");
    WeightedEdge e{parse_index(a, edges_path, ln), parse_index(b, edges_path, ln), 1.0};
    if (!w.empty()) {
      if (!is_number(w)) throw Error(ErrorCode::parse, edges_path + ":" + std::to_string(ln) + ": bad weight '" + w + "'");
      e.w = std::strtod(w.c_str(), nullptr);
    }
    maxn = std::max({maxn, e.src, e.dst});
    g.edges.push_back(e);
  }
  std::vector<std::pair<int, std::optional<double>>> pri;
  if (!priors_path.empty()) {
    std::ifstream pin(priors_path);
    if (!pin) throw Error(ErrorCode::io, "cannot open " + priors_path);
    ln = 0;
    while (std::getline(pin, line)) {
      ++ln;
      line = trim(line);
      if (line.empty() || line[0] == '#') continue;
      auto comma = line.find(',');
      std::string a = trim(line.substr(0, comma));
      std::string v = comma == std::string::npos ? "" : trim(line.substr(comma + 1));
      if (pri.empty() && !is_number(a)) continue;
      int i = parse_index(a, priors_path, ln);
      maxn = std::max(maxn, i);
      if (v.empty() || v == "null") {
        pri.push_back({i, std::nullopt});
      } else {
        if (!is_number(v)) throw Error(ErrorCode::parse, priors_path + ":" + std::to_string(ln) + ": bad prior '" + v + "'");
        pri.push_back({i, std::strtod(v.c_str(), nullptr)});
      }
    }
  }
  g.n = maxn + 1;
  if (!priors_path.empty()) {
    g.prior.assign(g.n, std::nullopt);
    for (const auto& [i, v] : pri) g.prior[i] = v;
  }
  g.validate();
  return g;
}

Mat edge_matrix(const WeightedGraph& g) {
  g.validate();
  Mat W = Mat::Zero(g.n, g.n);
  for (const auto& e : g.edges) W(e.src, e.dst) += e.w;
  return W;
}

}  // namespace gabp
