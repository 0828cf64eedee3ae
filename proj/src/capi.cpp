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

#include "gabp/gabp_c.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "gabp/convfix.hpp"
#include "gabp/detect.hpp"
#include "gabp/diagnostics.hpp"
#include "gabp/kalman.hpp"
#include "gabp/lpnum.hpp"
#include "gabp/ratings.hpp"
#include "gabp/tables.hpp"

struct gabp_system {
  gabp::SymmetricSystem sys;
};

struct gabp_report {
  gabp::SolveReport rep;
  bool has_precision = false;
};

namespace {

thread_local std::string g_last_error;

gabp_status fail(gabp_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <class F>
gabp_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const gabp::Error& e) {
    return fail(static_cast<gabp_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(GABP_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(GABP_E_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

gabp::MethodConfig to_method(const gabp_solver_options* o) {
  gabp_solver_options d;
  gabp_solver_options_default(&d);
  if (!o) o = &d;
  gabp::MethodConfig m;
  switch (o->method) {
    case GABP_METHOD_GABP: m.method = gabp::Method::gabp; break;
    case GABP_METHOD_GABP_BROADCAST: m.method = gabp::Method::gabp_broadcast; break;
    case GABP_METHOD_JACOBI: m.method = gabp::Method::jacobi; break;
    case GABP_METHOD_GAUSS_SEIDEL: m.method = gabp::Method::gauss_seidel; break;
    case GABP_METHOD_SOR: m.method = gabp::Method::sor; break;
    case GABP_METHOD_SOR_OPTIMAL: m.method = gabp::Method::sor_optimal; break;
    default: throw gabp::Error(gabp::ErrorCode::invalid_argument, "unknown method code");
  }
  if (o->schedule != GABP_SCHEDULE_SERIAL && o->schedule != GABP_SCHEDULE_PARALLEL)
    throw gabp::Error(gabp::ErrorCode::invalid_argument, "unknown schedule code");
  m.solver.schedule = o->schedule == GABP_SCHEDULE_SERIAL ? gabp::Schedule::serial : gabp::Schedule::parallel;
  switch (o->accel) {
    case GABP_ACCEL_NONE: m.solver.accel = gabp::Accel::none; break;
    case GABP_ACCEL_AITKEN: m.solver.accel = gabp::Accel::aitken; break;
    case GABP_ACCEL_STEFFENSEN: m.solver.accel = gabp::Accel::steffensen; break;
    default: throw gabp::Error(gabp::ErrorCode::invalid_argument, "unknown acceleration code");
  }
  if (!(o->eps > 0.0)) throw gabp::Error(gabp::ErrorCode::invalid_argument, "eps must be positive");
  if (o->max_rounds < 1) throw gabp::Error(gabp::ErrorCode::invalid_argument, "max_rounds must be positive");
  if (o->threads < 1) throw gabp::Error(gabp::ErrorCode::invalid_argument, "threads must be positive");
  m.solver.eps = o->eps;
  m.solver.max_rounds = o->max_rounds;
  m.solver.threads = o->threads;
  m.omega = o->omega;
  return m;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

gabp::SymmetricSystem& sys_of(const gabp_system* s) {
  if (!s) throw gabp::Error(gabp::ErrorCode::invalid_argument, "null system handle");
  return const_cast<gabp_system*>(s)->sys;
}

}  // namespace

extern "C" {

const char* gabp_version(void) { return "0.1.0"; }

const char* gabp_last_error(void) { return g_last_error.c_str(); }

void gabp_string_free(char* s) { std::free(s); }

void gabp_solver_options_default(gabp_solver_options* o) {
  if (!o) return;
  o->method = GABP_METHOD_GABP;
  o->schedule = GABP_SCHEDULE_PARALLEL;
  o->eps = 1e-6;
  o->max_rounds = 1000;
  o->accel = GABP_ACCEL_NONE;
  o->threads = 1;
  o->omega = 1.0;
}

void gabp_fix_options_default(gabp_fix_options* o) {
  if (!o) return;
  o->loading_mode = GABP_LOADING_PER_NODE;
  o->gamma = 0.0;
  o->margin = 0.1;
  o->outer_eps = 1e-3;
  o->max_outer = 500;
  o->single_loop = 0;
  o->step = 0.5;
}

gabp_status gabp_system_read_mtx(const char* a_path, const char* b_path, gabp_system** out) {
  return guarded([&] {
    if (!a_path || !out) return fail(GABP_E_INVALID, "null argument");
    auto* s = new gabp_system;
    try {
      s->sys = b_path ? gabp::read_matrix_market(a_path, gabp::read_vector_mtx(b_path))
                      : gabp::read_matrix_market(a_path);
    } catch (...) {
      delete s;
      throw;
    }
    *out = s;
    return GABP_OK;
  });
}

gabp_status gabp_system_from_dense(int n, const double* a, const double* b, gabp_system** out) {
  return guarded([&] {
    if (n < 1 || !a || !b || !out) return fail(GABP_E_INVALID, "bad dense system arguments");
    gabp::Mat A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = a[i * n + j];
    gabp::Vec bv = Eigen::Map<const gabp::Vec>(b, n);
    *out = new gabp_system{gabp::SymmetricSystem::from_dense(A, bv)};
    return GABP_OK;
  });
}

gabp_status gabp_system_poisson2d(int p, gabp_system** out) {
  return guarded([&] {
    if (!out) return fail(GABP_E_INVALID, "null argument");
    *out = new gabp_system{gabp::poisson2d(p)};
    return GABP_OK;
  });
}

gabp_status gabp_system_gold(int which, gabp_system** out) {
  return guarded([&] {
    if (!out) return fail(GABP_E_INVALID, "null argument");
    if (which != 3 && which != 4) return fail(GABP_E_INVALID, "gold fixture must be 3 or 4");
    *out = new gabp_system{which == 3 ? gabp::gold_r3() : gabp::gold_r4()};
    return GABP_OK;
  });
}

gabp_status gabp_system_write_mtx(const gabp_system* s, const char* a_path, const char* b_path) {
  return guarded([&] {
    if (!a_path) return fail(GABP_E_INVALID, "null path");
    gabp::write_matrix_market(sys_of(s), a_path);
    if (b_path) gabp::write_vector_mtx(sys_of(s).b(), b_path);
    return GABP_OK;
  });
}

int gabp_system_size(const gabp_system* s) { return s ? s->sys.n() : 0; }

void gabp_system_free(gabp_system* s) { delete s; }

gabp_status gabp_solve(const gabp_system* s, const gabp_solver_options* o, gabp_report** out) {
  return guarded([&] {
    if (!out) return fail(GABP_E_INVALID, "null argument");
    gabp::MethodConfig m = to_method(o);
    auto* r = new gabp_report;
    try {
      r->rep = gabp::solve(sys_of(s), m);
    } catch (...) {
      delete r;
      throw;
    }
    r->has_precision = r->rep.P.size() == r->rep.x.size() && r->rep.P.size() > 0;
    *out = r;
    return GABP_OK;
  });
}

int gabp_report_status(const gabp_report* r) {
  if (!r) return GABP_DIVERGED;
  switch (r->rep.status) {
    case gabp::Status::converged: return GABP_CONVERGED;
    case gabp::Status::max_rounds: return GABP_MAX_ROUNDS;
    case gabp::Status::diverged: return GABP_DIVERGED;
  }
  return GABP_DIVERGED;
}

int gabp_report_rounds(const gabp_report* r) { return r ? r->rep.rounds : 0; }
int gabp_report_size(const gabp_report* r) { return r ? static_cast<int>(r->rep.x.size()) : 0; }
const double* gabp_report_x(const gabp_report* r) { return r ? r->rep.x.data() : nullptr; }
const double* gabp_report_precision(const gabp_report* r) {
  return r && r->has_precision ? r->rep.P.data() : nullptr;
}

gabp_status gabp_report_trace_csv(const gabp_report* r, char** out) {
  return guarded([&] {
    if (!r || !out) return fail(GABP_E_INVALID, "null argument");
    *out = dup_string(gabp::trace_csv(r->rep.trace));
    return GABP_OK;
  });
}

gabp_status gabp_report_summary(const gabp_report* r, char** out) {
  return guarded([&] {
    if (!r || !out) return fail(GABP_E_INVALID, "null argument");
    std::ostringstream os;
    os << "status=" << gabp::to_string(r->rep.status) << "\n";
    os << "rounds=" << r->rep.rounds << "\n";
    os << "x=[";
    for (int i = 0; i < r->rep.x.size(); ++i) os << (i ? "," : "") << fmt(r->rep.x[i]);
    os << "]\n";
    if (r->has_precision) {
      os << "P=[";
      for (int i = 0; i < r->rep.P.size(); ++i) os << (i ? "," : "") << fmt(r->rep.P[i]);
      os << "]\n";
    }
    *out = dup_string(os.str());
    return GABP_OK;
  });
}

void gabp_report_free(gabp_report* r) { delete r; }

gabp_status gabp_diagnose(const gabp_system* s, double eps, char** out) {
  return guarded([&] {
    if (!out) return fail(GABP_E_INVALID, "null argument");
    *out = dup_string(gabp::to_key_values(gabp::check_conditions(sys_of(s), eps)));
    return GABP_OK;
  });
}

gabp_status gabp_optimal_omega(const gabp_system* s, double eps, double* omega) {
  return guarded([&] {
    if (!omega) return fail(GABP_E_INVALID, "null argument");
    *omega = gabp::optimal_sor_omega(sys_of(s), eps);
    return GABP_OK;
  });
}

gabp_status gabp_fix(const gabp_system* s, const gabp_solver_options* inner, const gabp_fix_options* f,
                     gabp_report** out, char** outer_csv) {
  return guarded([&] {
    if (!out) return fail(GABP_E_INVALID, "null argument");
    gabp_fix_options fd;
    gabp_fix_options_default(&fd);
    if (!f) f = &fd;
    gabp::MethodConfig m = to_method(inner);
    gabp::LoadingSpec ls;
    if (f->loading_mode == GABP_LOADING_SCALAR) {
      ls.mode = gabp::LoadingMode::scalar_gamma;
      ls.gamma = f->gamma;
    } else if (f->loading_mode == GABP_LOADING_PER_NODE) {
      ls.mode = gabp::LoadingMode::per_node_gamma_star;
      ls.margin = f->margin;
    } else {
      return fail(GABP_E_INVALID, "unknown loading mode");
    }
    gabp::FixReport fr = f->single_loop
                             ? gabp::single_loop_solve(sys_of(s), ls, f->step, m.solver)
                             : gabp::double_loop_solve(sys_of(s), ls, m.solver, gabp::OuterConfig{f->outer_eps, f->max_outer});
    auto* r = new gabp_report;
    r->rep = fr.report;
    r->has_precision = false;
    *out = r;
    if (outer_csv) {
      std::ostringstream os;
      os << "outer,inner_rounds,dx\n";
      for (const auto& row : fr.outer_trace) os << row.outer << "," << row.inner_rounds << "," << fmt(row.dx) << "\n";
      *outer_csv = dup_string(os.str());
    }
    return GABP_OK;
  });
}

gabp_status gabp_cdma_demo(int n, int k, double sigma2, uint64_t seed, int use_fix, const gabp_solver_options* o,
                           char** csv) {
  return guarded([&] {
    if (!csv) return fail(GABP_E_INVALID, "null argument");
    gabp::MethodConfig m = to_method(o);
    gabp::CdmaInstance inst = gabp::generate_cdma(n, k, sigma2, seed);
    gabp::SymmetricSystem sys = gabp::cdma_correlation_system(inst);
    gabp::Vec dense = sys.dense().ldlt().solve(sys.b());
    double rho = gabp::walk_radius(sys);
    gabp::SolveReport rep;
    int inner = 0;
    if (use_fix) {
      gabp::FixReport fr = gabp::double_loop_solve(sys, gabp::LoadingSpec{}, m.solver, gabp::OuterConfig{1e-8, 2000});
      rep = fr.report;
      inner = fr.inner_total;
    } else {
      rep = gabp::solve(sys, m);
      inner = rep.rounds;
    }
    int errors = 0;
    for (int i = 0; i < k; ++i) {
      double bit = rep.x[i] > 0 ? 1.0 : -1.0;
      if (bit != inst.bits[i]) ++errors;
    }
    const double diff = rep.x.allFinite() ? (rep.x - dense).cwiseAbs().maxCoeff() : INFINITY;
    std::ostringstream os;
    os << "n,k,sigma2,seed,fixed,rho_abs,status,rounds,inner_total,bit_errors,max_abs_diff_dense\n";
    os << n << "," << k << "," << fmt(sigma2) << "," << seed << "," << (use_fix ? 1 : 0) << "," << fmt(rho) << ","
       << gabp::to_string(rep.status) << "," << rep.rounds << "," << inner << "," << errors << "," << fmt(diff)
       << "\n";
    *csv = dup_string(os.str());
    if (rep.status != gabp::Status::converged)
      return fail(rep.status == gabp::Status::diverged ? GABP_E_DIVERGED : GABP_E_NOT_CONVERGED,
                  "solver did not converge; try the convergence fix");
    return GABP_OK;
  });
}

gabp_status gabp_krr(const char* points_path, const char* labels_path, double width, double lambda, int loading,
                     int bias, const gabp_solver_options* o, char** csv) {
  return guarded([&] {
    if (!points_path || !labels_path || !csv) return fail(GABP_E_INVALID, "null argument");
    gabp::MethodConfig m = to_method(o);
    gabp::Mat pts = gabp::read_dense_mtx(points_path);
    gabp::Vec y = gabp::read_vector_mtx(labels_path);
    gabp::KrrResult r = gabp::krr_solve(pts, y, width, lambda, loading != 0, m.solver, bias != 0);
    std::ostringstream os;
    os << "index,label,coef,alpha,fit\n";
    for (int i = 0; i < y.size(); ++i)
      os << i << "," << fmt(y[i]) << "," << fmt(r.coef[i]) << "," << fmt(r.alpha[i]) << ","
         << fmt(gabp::krr_predict(pts, r.coef, width, pts.row(i).transpose(), bias != 0)) << "\n";
    *csv = dup_string(os.str());
    if (r.report.status != gabp::Status::converged)
      return fail(r.report.status == gabp::Status::diverged ? GABP_E_DIVERGED : GABP_E_NOT_CONVERGED,
                  "GaBP did not converge on K + lambda I; enable loading");
    return GABP_OK;
  });
}

gabp_status gabp_rate(const char* edges_path, const char* priors_path, const char* mode, double beta, double alpha,
                      const gabp_solver_options* o, char** csv, int* symmetrized) {
  return guarded([&] {
    if (!edges_path || !mode || !csv) return fail(GABP_E_INVALID, "null argument");
    gabp::MethodConfig m = to_method(o);
    gabp::WeightedGraph g = gabp::read_rating_graph(edges_path, priors_path ? priors_path : "");
    std::string md = mode;
    gabp::RatingResult r;
    if (md == "cost") {
      r = gabp::rate(gabp::RatingProblem{g, beta}, m);
    } else if (md == "spatial") {
      gabp::Mat W = gabp::edge_matrix(g);
      for (int i = 0; i < W.rows(); ++i) {
        double s = W.row(i).sum();
        if (s > 0) W.row(i) /= s;
      }
      r = gabp::spatial_rank(W, alpha, m.solver);
    } else if (md == "pagerank") {
      gabp::Mat W = gabp::edge_matrix(g);
      // Column j holds the out-links of node j; dangling nodes keep a self-loop.
      gabp::Mat M = W.transpose();
      for (int j = 0; j < M.cols(); ++j) {
        double s = M.col(j).sum();
        if (s > 0) M.col(j) /= s;
        else M(j, j) = 1.0;
      }
      gabp::Vec prior = gabp::Vec::Constant(g.n, 1.0 / std::max(1, g.n));
      if (!g.prior.empty()) {
        prior.setZero();
        for (int i = 0; i < g.n; ++i)
          if (g.prior[i]) prior[i] = *g.prior[i];
      }
      r = gabp::personalized_pagerank(M, prior, alpha, m.solver);
    } else if (md == "eigen") {
      r = gabp::eigen_projection(g, m.solver);
    } else {
      return fail(GABP_E_INVALID, "unknown rating mode '" + md + "'");
    }
    if (symmetrized) *symmetrized = r.symmetrized ? 1 : 0;
    std::ostringstream os;
    os << "node,x\n";
    for (int i = 0; i < r.x.size(); ++i) os << i << "," << fmt(r.x[i]) << "\n";
    *csv = dup_string(os.str());
    if (r.report.status != gabp::Status::converged)
      return fail(r.report.status == gabp::Status::diverged ? GABP_E_DIVERGED : GABP_E_NOT_CONVERGED,
                  "rating solve did not converge");
    return GABP_OK;
  });
}

gabp_status gabp_kalman_demo(int d, int m, int steps, uint64_t seed, const gabp_solver_options* o, char** csv) {
  return guarded([&] {
    if (!csv) return fail(GABP_E_INVALID, "null argument");
    gabp::MethodConfig mc = to_method(o);
    auto rows = gabp::kalman_demo(d, m, steps, seed, mc.solver);
    std::ostringstream os;
    os << "step,p_diff,x_diff,rounds\n";
    for (const auto& r : rows) os << r.step << "," << fmt(r.p_diff) << "," << fmt(r.x_diff) << "," << r.rounds << "\n";
    *csv = dup_string(os.str());
    return GABP_OK;
  });
}

gabp_status gabp_num(int flows, int links, double route_len, uint64_t seed, const char* solver, double gap_tol,
                     int max_iters, double step, int threads, char** csv, int* converged) {
  return guarded([&] {
    if (!solver || !csv) return fail(GABP_E_INVALID, "null argument");
    gabp::NumProblem np = gabp::generate_num(flows, links, route_len, seed);
    std::string s = solver;
    bool ok = false;
    if (s == "gabp" || s == "direct") {
      gabp::NumConfig cfg;
      cfg.inner = s == "gabp" ? gabp::NumInner::gabp : gabp::NumInner::direct;
      cfg.gap_tol = gap_tol;
      cfg.max_steps = max_iters;
      cfg.solver.threads = threads;
      gabp::NumResult r = gabp::solve_num_pd(np, cfg);
      *csv = dup_string(gabp::num_trace_csv(r.trace));
      ok = r.converged;
    } else if (s == "dualdecomp") {
      gabp::DualDecompResult r = gabp::solve_num_dual_decomp(np, step, gap_tol, max_iters);
      std::ostringstream os;
      os << "step,gap,inner_iters,dual\n";
      for (const auto& row : r.trace) os << row.iter << "," << fmt(row.gap) << ",0," << fmt(row.dual) << "\n";
      *csv = dup_string(os.str());
      ok = r.converged;
    } else {
      return fail(GABP_E_INVALID, "unknown NUM solver '" + s + "'");
    }
    if (converged) *converged = ok ? 1 : 0;
    if (!ok) return fail(GABP_E_NOT_CONVERGED, "gap tolerance not reached");
    return GABP_OK;
  });
}

gabp_status gabp_tables(const char* which, int threads, char** csv, int* all_pass) {
  return guarded([&] {
    if (!which || !csv) return fail(GABP_E_INVALID, "null argument");
    std::string w = which;
    std::vector<std::string> names = w == "all" ? gabp::table_names() : std::vector<std::string>{w};
    std::ostringstream os;
    bool pass = true;
    for (std::size_t i = 0; i < names.size(); ++i) {
      gabp::Table t = gabp::make_table(names[i], threads);
      if (i) os << "\n";
      os << gabp::table_csv(t);
      pass = pass && t.pass();
    }
    *csv = dup_string(os.str());
    if (all_pass) *all_pass = pass ? 1 : 0;
    return GABP_OK;
  });
}

}  // extern "C"
