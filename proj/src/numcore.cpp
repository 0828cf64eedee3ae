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

#include "gabp/numcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

namespace gabp {

SingularSubgraph::SingularSubgraph(int i, int j)
    : Error(ErrorCode::singular_subgraph,
            "singular subgraph: P_{" + std::to_string(i) + "\\" + std::to_string(j) +
                "} is zero"),
      i(i),
      j(j) {}

SymmetricSystem::SymmetricSystem(Vec diag, Vec b, const std::vector<Triplet>& offdiag)
    : diag_(std::move(diag)), b_(std::move(b)) {
  const int n = static_cast<int>(diag_.size());
  if (b_.size() != n) throw Error(ErrorCode::dimension, "rhs length differs from matrix size");
  adj_.assign(n, {});
  for (const auto& t : offdiag) {
    if (t.i < 0 || t.j < 0 || t.i >= n || t.j >= n)
      throw Error(ErrorCode::dimension, "entry index out of range");
    if (t.i == t.j) throw Error(ErrorCode::invalid_argument, "diagonal entry passed as off-diagonal");
    if (!std::isfinite(t.v)) throw Error(ErrorCode::invalid_argument, "non-finite entry");
    if (t.v == 0.0) continue;
    adj_[t.i].push_back({t.j, t.v});
    adj_[t.j].push_back({t.i, t.v});
  }
  for (int i = 0; i < n; ++i) {
    auto& row = adj_[i];
    std::sort(row.begin(), row.end(), [](const Neighbor& x, const Neighbor& y) { return x.j < y.j; });
    for (std::size_t k = 1; k < row.size(); ++k)
      if (row[k].j == row[k - 1].j)
        throw Error(ErrorCode::duplicate_entry, "duplicate entry (" + std::to_string(i) + "," +
                                                   std::to_string(row[k].j) + ")");
    edges_ += row.size();
  }
  edges_ /= 2;
}

SymmetricSystem SymmetricSystem::from_dense(const Mat& A, const Vec& b, double tol) {
  if (A.rows() != A.cols()) throw Error(ErrorCode::dimension, "matrix is not square");
  const int n = static_cast<int>(A.rows());
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(A(i, j) - A(j, i)) > tol)
        throw Error(ErrorCode::asymmetric, "matrix is not symmetric at (" + std::to_string(i) +
                                               "," + std::to_string(j) + ")");
      double v = 0.5 * (A(i, j) + A(j, i));
      if (v != 0.0) t.push_back({i, j, v});
    }
  return SymmetricSystem(A.diagonal(), b, t);
}

double SymmetricSystem::coeff(int i, int j) const {
  if (i == j) return diag_[i];
  const auto& row = adj_[i];
  auto it = std::lower_bound(row.begin(), row.end(), j,
                             [](const Neighbor& x, int key) { return x.j < key; });
  return (it != row.end() && it->j == j) ? it->a : 0.0;
}

Mat SymmetricSystem::dense() const {
  Mat A = Mat::Zero(n(), n());
  for (int i = 0; i < n(); ++i) {
    A(i, i) = diag_[i];
    for (const auto& nb : adj_[i]) A(i, nb.j) = nb.a;
  }
  return A;
}

Vec SymmetricSystem::multiply(const Vec& x) const {
  if (x.size() != n()) throw Error(ErrorCode::dimension, "vector length differs from matrix size");
  Vec y(n());
  for (int i = 0; i < n(); ++i) {
    double s = diag_[i] * x[i];
    for (const auto& nb : adj_[i]) s += nb.a * x[nb.j];
    y[i] = s;
  }
  return y;
}

std::vector<Triplet> SymmetricSystem::upper_triplets() const {
  std::vector<Triplet> t;
  t.reserve(edges_);
  for (int i = 0; i < n(); ++i)
    for (const auto& nb : adj_[i])
      if (nb.j > i) t.push_back({i, nb.j, nb.a});
  return t;
}

SymmetricSystem SymmetricSystem::with_b(Vec b) const {
  if (b.size() != n()) throw Error(ErrorCode::dimension, "rhs length differs from matrix size");
  SymmetricSystem s = *this;
  s.b_ = std::move(b);
  return s;
}

SymmetricSystem SymmetricSystem::with_diagonal(Vec diag) const {
  if (diag.size() != n()) throw Error(ErrorCode::dimension, "diagonal length differs from matrix size");
  SymmetricSystem s = *this;
  s.diag_ = std::move(diag);
  return s;
}

const char* to_string(DominanceClass c) {
  switch (c) {
    case DominanceClass::none: return "none";
    case DominanceClass::weak: return "weak";
    case DominanceClass::strict: return "strict";
    case DominanceClass::irreducible: return "irreducible";
  }
  return "none";
}

void WeightedGraph::validate() const {
  if (n < 0) throw Error(ErrorCode::invalid_argument, "negative node count");
  for (const auto& e : edges) {
    if (e.src < 0 || e.dst < 0 || e.src >= n || e.dst >= n)
      throw Error(ErrorCode::dimension, "edge endpoint out of range");
    if (e.src == e.dst) throw Error(ErrorCode::invalid_argument, "self-loop edge");
    if (!std::isfinite(e.w) || e.w < 0) throw Error(ErrorCode::invalid_argument, "edge weight must be finite and non-negative");
  }
  if (node_weight.size() && node_weight.size() != n)
    throw Error(ErrorCode::dimension, "node weight length differs from node count");
  if (!prior.empty() && static_cast<int>(prior.size()) != n)
    throw Error(ErrorCode::dimension, "prior length differs from node count");
}

namespace {

double dense_radius(const Mat& M) {
  Eigen::EigenSolver<Mat> es(M, false);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::not_converged, "dense eigensolver failed");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

double spectral_radius(const Mat& M, double tol) {
  if (M.rows() != M.cols()) throw Error(ErrorCode::dimension, "spectral radius of a non-square matrix");
  if (!M.allFinite()) throw Error(ErrorCode::invalid_argument, "non-finite matrix entry");
  const int n = static_cast<int>(M.rows());
  if (n == 0) return 0.0;
  if (n <= 64) return dense_radius(M);

  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  Vec x(n);
  for (int i = 0; i < n; ++i) x[i] = u(rng);
  x.normalize();
  double est = 0.0;
  // Iterating on M^2 handles a dominant pair +-rho (bipartite patterns).
  for (int it = 0; it < 10 * n; ++it) {
    Vec z = M * (M * x);
    double nz = z.norm();
    if (nz == 0.0) return 0.0;
    double next = std::sqrt(nz);
    if (it > 0 && std::abs(next - est) <= tol * std::max(1.0, next)) return next;
    est = next;
    x = z / nz;
  }
  throw NotConverged("power iteration did not converge", est);
}

bool connected(const SymmetricSystem& sys) {
  const int n = sys.n();
  if (n == 0) return true;
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    for (const auto& nb : sys.neighbors(i))
      if (!seen[nb.j]) {
        seen[nb.j] = 1;
        ++count;
        stack.push_back(nb.j);
      }
  }
  return count == n;
}

DominanceClass dominance_class(const SymmetricSystem& sys) {
  bool weak = true, all_strict = true, some_strict = false;
  for (int i = 0; i < sys.n(); ++i) {
    double off = 0.0;
    for (const auto& nb : sys.neighbors(i)) off += std::abs(nb.a);
    double d = std::abs(sys.diag(i));
    if (d < off) weak = false;
    if (d > off) some_strict = true;
    else all_strict = false;
  }
  if (all_strict) return DominanceClass::strict;
  if (!weak) return DominanceClass::none;
  if (some_strict && connected(sys)) return DominanceClass::irreducible;
  return DominanceClass::weak;
}

SymmetricSystem normalize_unit_diag(const SymmetricSystem& sys) {
  const int n = sys.n();
  Vec s(n);
  for (int i = 0; i < n; ++i) {
    if (!(sys.diag(i) > 0.0))
      throw Error(ErrorCode::normalization, "non-positive diagonal entry at index " + std::to_string(i));
    s[i] = 1.0 / std::sqrt(sys.diag(i));
  }
  std::vector<Triplet> t = sys.upper_triplets();
  for (auto& e : t) e.v *= s[e.i] * s[e.j];
  return SymmetricSystem(Vec::Ones(n), sys.b().cwiseProduct(s), t);
}

double residual_per_equation(const SymmetricSystem& sys, const Vec& x) {
  if (x.size() != sys.n()) throw Error(ErrorCode::dimension, "solution length differs from matrix size");
  if (sys.n() == 0) return 0.0;
  return (sys.multiply(x) - sys.b()).norm() / sys.n();
}

Mat symmetric_weights(const WeightedGraph& g, bool* symmetrized) {
  g.validate();
  Mat W = Mat::Zero(g.n, g.n);
  for (const auto& e : g.edges) W(e.src, e.dst) += e.w;
  bool sym = false;
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j) {
      const double a = W(i, j), b = W(j, i);
      if (a == b) continue;
      if (a == 0.0 || b == 0.0) {
        W(i, j) = W(j, i) = a + b;
      } else {
        W(i, j) = W(j, i) = 0.5 * (a + b);
        sym = true;
      }
    }
  if (symmetrized) *symmetrized = sym;
  return W;
}

Mat weighted_laplacian(const WeightedGraph& g) {
  Mat W = symmetric_weights(g, nullptr);
  Mat L = -W;
  L.diagonal() = W.rowwise().sum();
  return L;
}

SymmetricSystem poisson2d(int p) {
  if (p < 1) throw Error(ErrorCode::invalid_argument, "grid size must be positive");
  const int n = p * p;
  const double h = 1.0 / (p + 1);
  std::vector<Triplet> t;
  for (int r = 0; r < p; ++r)
    for (int c = 0; c < p; ++c) {
      int i = r * p + c;
      if (c + 1 < p) t.push_back({i, i + 1, -1.0});
      if (r + 1 < p) t.push_back({i, i + p, -1.0});
    }
  return SymmetricSystem(Vec::Constant(n, 4.0), Vec::Constant(n, h * h), t);
}

Mat abs_offdiag_dense(const SymmetricSystem& sys) {
  Mat R = Mat::Zero(sys.n(), sys.n());
  for (int i = 0; i < sys.n(); ++i) {
    R(i, i) = std::abs(1.0 - sys.diag(i));
    for (const auto& nb : sys.neighbors(i)) R(i, nb.j) = std::abs(nb.a);
  }
  return R;
}

}  // namespace gabp
