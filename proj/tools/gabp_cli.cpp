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

// Command-line front end over the C API.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "gabp/gabp_c.h"

namespace {

constexpr int kOk = 0;
constexpr int kSolverFailure = 1;
constexpr int kUsage = 2;

struct SolverFlags {
  std::string method = "gabp";
  std::string schedule = "parallel";
  std::string accel = "none";
  double eps = 1e-6;
  int max_rounds = 1000;
  double omega = 1.0;
};

int threads = 1;
std::uint64_t seed = 42;

void add_solver_flags(CLI::App* app, SolverFlags& f) {
  app->add_option("--method", f.method, "gabp | gabp-broadcast | jacobi | gs | sor | sor-opt")
      ->check(CLI::IsMember({"gabp", "gabp-broadcast", "jacobi", "gs", "sor", "sor-opt"}))
      ->capture_default_str();
  app->add_option("--schedule", f.schedule, "serial | parallel")
      ->check(CLI::IsMember({"serial", "parallel"}))
      ->capture_default_str();
  app->add_option("--accel", f.accel, "none | aitken | steffensen")
      ->check(CLI::IsMember({"none", "aitken", "steffensen"}))
      ->capture_default_str();
  app->add_option("--eps", f.eps, "stopping threshold")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--max-rounds", f.max_rounds, "round cap")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--omega", f.omega, "SOR relaxation")->capture_default_str();
}

gabp_solver_options to_options(const SolverFlags& f) {
  static const std::map<std::string, int> methods = {
      {"gabp", GABP_METHOD_GABP},       {"gabp-broadcast", GABP_METHOD_GABP_BROADCAST},
      {"jacobi", GABP_METHOD_JACOBI},   {"gs", GABP_METHOD_GAUSS_SEIDEL},
      {"sor", GABP_METHOD_SOR},         {"sor-opt", GABP_METHOD_SOR_OPTIMAL}};
  static const std::map<std::string, int> accels = {
      {"none", GABP_ACCEL_NONE}, {"aitken", GABP_ACCEL_AITKEN}, {"steffensen", GABP_ACCEL_STEFFENSEN}};
  gabp_solver_options o;
  gabp_solver_options_default(&o);
  o.method = methods.at(f.method);
  o.schedule = f.schedule == "serial" ? GABP_SCHEDULE_SERIAL : GABP_SCHEDULE_PARALLEL;
  o.accel = accels.at(f.accel);
  o.eps = f.eps;
  o.max_rounds = f.max_rounds;
  o.omega = f.omega;
  o.threads = threads;
  return o;
}

int exit_for(gabp_status s) {
  switch (s) {
    case GABP_OK: return kOk;
    case GABP_E_INVALID:
    case GABP_E_DIMENSION:
    case GABP_E_IO:
    case GABP_E_PARSE:
    case GABP_E_DUPLICATE:
    case GABP_E_ASYMMETRIC:
    case GABP_E_NORMALIZATION: return kUsage;
    default: return kSolverFailure;
  }
}

int report_error(gabp_status s) {
  std::fprintf(stderr, "error: %s\n", gabp_last_error());
  return exit_for(s);
}

void write_trace(const char* name, const gabp_report* r) {
  const char* dir = std::getenv("GABP_TRACE_DIR");
  if (!dir || !*dir) return;
  char* csv = nullptr;
  if (gabp_report_trace_csv(r, &csv) != GABP_OK) return;
  std::string path = std::string(dir) + "/" + name + "_trace.csv";
  std::ofstream out(path);
  if (out) out << csv;
  else std::fprintf(stderr, "warning: cannot write %s\n", path.c_str());
  gabp_string_free(csv);
}

// Prints the summary; exit status follows the solve status.
int finish_report(const char* name, gabp_report* r) {
  char* text = nullptr;
  gabp_report_summary(r, &text);
  std::fputs(text, stdout);
  gabp_string_free(text);
  write_trace(name, r);
  int code = gabp_report_status(r) == GABP_CONVERGED ? kOk : kSolverFailure;
  gabp_report_free(r);
  return code;
}

// Takes the address so the call producing s is sequenced before the read.
int emit_csv(gabp_status s, char** csv) {
  if (*csv) {
    std::fputs(*csv, stdout);
    gabp_string_free(*csv);
    *csv = nullptr;
  }
  return s == GABP_OK ? kOk : report_error(s);
}

int load_system(const std::string& a, const std::string& b, gabp_system** sys) {
  gabp_status s = gabp_system_read_mtx(a.c_str(), b.empty() ? nullptr : b.c_str(), sys);
  return s == GABP_OK ? kOk : report_error(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian belief propagation solvers and demos"};
  app.require_subcommand(1);
  app.add_option("--threads", threads, "worker threads for parallel-schedule rounds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", seed, "seed for randomized demos")->capture_default_str();
  app.footer(
      "CSV outputs:\n"
      "  solve/fix/poisson trace ($GABP_TRACE_DIR/<cmd>_trace.csv): round,max_dmsg,residual\n"
      "  fix --outer-trace: outer,inner_rounds,dx\n"
      "  cdma-demo: n,k,sigma2,seed,fixed,rho_abs,status,rounds,inner_total,bit_errors,max_abs_diff_dense\n"
      "  krr: index,label,coef,alpha,fit\n"
      "  rate: node,x\n"
      "  kalman-demo: step,p_diff,x_diff,rounds\n"
      "  num: step,gap,inner_iters,... (dual_residual,fallback for gabp/direct; dual for dualdecomp)\n"
      "  tables: table,method,<case>,<case>_target,<case>_rounds,...,pass\n"
      "Exit codes: 0 success, 1 solver failure, 2 usage error.");

  SolverFlags sf;
  std::string a_path, b_path;

  auto* solve = app.add_subcommand("solve", "solve A x = b from Matrix Market files");
  solve->add_option("A", a_path, "matrix (.mtx)")->required()->check(CLI::ExistingFile);
  solve->add_option("b", b_path, "right-hand side (.mtx, default all ones)")->check(CLI::ExistingFile);
  add_solver_flags(solve, sf);

  double diag_eps = 1e-6;
  auto* diagnose = app.add_subcommand("diagnose", "print sufficient-condition diagnostics");
  diagnose->add_option("A", a_path, "matrix (.mtx)")->required()->check(CLI::ExistingFile);
  diagnose->add_option("b", b_path, "right-hand side (.mtx)")->check(CLI::ExistingFile);
  diagnose->add_option("--eps", diag_eps, "threshold for the round bound")->capture_default_str();

  gabp_fix_options fo;
  gabp_fix_options_default(&fo);
  std::string loading = "per-node";
  bool single_loop = false, outer_trace = false;
  auto* fix = app.add_subcommand("fix", "solve with diagonal loading and outer correction");
  fix->add_option("A", a_path, "matrix (.mtx)")->required()->check(CLI::ExistingFile);
  fix->add_option("b", b_path, "right-hand side (.mtx)")->check(CLI::ExistingFile);
  add_solver_flags(fix, sf);
  fix->add_option("--loading", loading, "per-node | scalar")->check(CLI::IsMember({"per-node", "scalar"}))->capture_default_str();
  fix->add_option("--gamma", fo.gamma, "scalar loading")->capture_default_str();
  fix->add_option("--margin", fo.margin, "per-node loading margin")->capture_default_str();
  fix->add_option("--outer-eps", fo.outer_eps, "outer stopping threshold")->capture_default_str();
  fix->add_option("--max-outer", fo.max_outer, "outer iteration cap")->capture_default_str();
  fix->add_flag("--single-loop", single_loop, "damped single-loop variant");
  fix->add_option("--step", fo.step, "single-loop damping")->capture_default_str();
  fix->add_flag("--outer-trace", outer_trace, "print the outer trace CSV after the summary");

  int grid = 3;
  auto* poisson = app.add_subcommand("poisson", "solve the 2-D Poisson model problem");
  poisson->add_option("--p", grid, "interior grid size")->check(CLI::PositiveNumber)->capture_default_str();
  add_solver_flags(poisson, sf);

  int cn = 64, ck = 16;
  double sigma2 = 0.1;
  bool use_fix = false;
  auto* cdma = app.add_subcommand("cdma-demo", "random CDMA decorrelator / MMSE detection");
  cdma->add_option("--n", cn, "spreading length")->capture_default_str();
  cdma->add_option("--k", ck, "users")->capture_default_str();
  cdma->add_option("--sigma2", sigma2, "noise variance")->capture_default_str();
  cdma->add_flag("--fix", use_fix, "use the double-loop convergence fix");
  add_solver_flags(cdma, sf);

  std::string pts, labels;
  double width = 1.0, lambda = 1.0;
  bool krr_loading = false, bias = false;
  auto* krr = app.add_subcommand("krr", "kernel ridge regression with an RBF kernel");
  krr->add_option("points", pts, "dense N x d .mtx")->required()->check(CLI::ExistingFile);
  krr->add_option("labels", labels, "N-vector .mtx")->required()->check(CLI::ExistingFile);
  krr->add_option("--width", width, "RBF width")->capture_default_str();
  krr->add_option("--lambda", lambda, "ridge parameter")->capture_default_str();
  krr->add_flag("--loading", krr_loading, "double loop when K + lambda I is not strictly dominant");
  krr->add_flag("--bias", bias, "append the constant 1/N feature");
  add_solver_flags(krr, sf);

  std::string edges, priors, mode = "cost";
  double beta = 1.0, alpha = 0.85;
  auto* rate = app.add_subcommand("rate", "rate nodes of a weighted graph");
  rate->add_option("edges", edges, "edge list TSV: src dst weight")->required()->check(CLI::ExistingFile);
  rate->add_option("--priors", priors, "CSV node,value")->check(CLI::ExistingFile);
  rate->add_option("--mode", mode, "cost | spatial | pagerank | eigen")
      ->check(CLI::IsMember({"cost", "spatial", "pagerank", "eigen"}))
      ->capture_default_str();
  rate->add_option("--beta", beta, "smoothness weight (cost mode)")->capture_default_str();
  rate->add_option("--alpha", alpha, "damping (spatial, pagerank)")->capture_default_str();
  add_solver_flags(rate, sf);

  int kd = 3, km = 2, ksteps = 20;
  auto* kalman = app.add_subcommand("kalman-demo", "compare GaBP and classical Kalman covariance steps");
  kalman->add_option("--d", kd, "state dimension")->capture_default_str();
  kalman->add_option("--m", km, "measurement dimension")->capture_default_str();
  kalman->add_option("--steps", ksteps, "time steps")->capture_default_str();
  add_solver_flags(kalman, sf);

  int flows = 100, links = 200, max_iters = 100;
  double route_len = 10.0, gap_tol = 1e-4, ddstep = 0.01;
  std::string num_solver = "gabp";
  auto* num = app.add_subcommand("num", "network utility maximization");
  num->add_option("--flows", flows, "number of flows")->capture_default_str();
  num->add_option("--links", links, "number of links")->capture_default_str();
  num->add_option("--route-len", route_len, "mean route length")->capture_default_str();
  num->add_option("--solver", num_solver, "gabp | direct | dualdecomp")
      ->check(CLI::IsMember({"gabp", "direct", "dualdecomp"}))
      ->capture_default_str();
  num->add_option("--gap-tol", gap_tol, "duality-gap tolerance")->capture_default_str();
  num->add_option("--max-iters", max_iters, "Newton steps or subgradient iterations")->capture_default_str();
  num->add_option("--step", ddstep, "dual-decomposition step size")->capture_default_str();

  std::string which = "all";
  auto* tables = app.add_subcommand("tables", "regenerate the iteration-count tables");
  tables->add_option("--which", which, "tab_1 | tab_2 | tab_nonPSD | tab_2D_Poisson | all")
      ->check(CLI::IsMember({"tab_1", "tab_2", "tab_nonPSD", "tab_2D_Poisson", "all"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return e.get_exit_code() == 0 ? rc : kUsage;
  }

  gabp_solver_options opts = to_options(sf);

  if (*solve || *diagnose || *fix) {
    gabp_system* sys = nullptr;
    if (int rc = load_system(a_path, b_path, &sys)) return rc;
    int code = kOk;
    if (*solve) {
      gabp_report* r = nullptr;
      gabp_status s = gabp_solve(sys, &opts, &r);
      code = s == GABP_OK ? finish_report("solve", r) : report_error(s);
    } else if (*diagnose) {
      char* kv = nullptr;
      code = emit_csv(gabp_diagnose(sys, diag_eps, &kv), &kv);
    } else {
      fo.loading_mode = loading == "scalar" ? GABP_LOADING_SCALAR : GABP_LOADING_PER_NODE;
      fo.single_loop = single_loop ? 1 : 0;
      gabp_report* r = nullptr;
      char* outer = nullptr;
      gabp_status s = gabp_fix(sys, &opts, &fo, &r, &outer);
      if (s == GABP_OK) {
        code = finish_report("fix", r);
        if (outer_trace && outer) std::fputs(outer, stdout);
      } else {
        code = report_error(s);
      }
      gabp_string_free(outer);
    }
    gabp_system_free(sys);
    return code;
  }
  if (*poisson) {
    gabp_system* sys = nullptr;
    gabp_status s = gabp_system_poisson2d(grid, &sys);
    if (s != GABP_OK) return report_error(s);
    gabp_report* r = nullptr;
    s = gabp_solve(sys, &opts, &r);
    gabp_system_free(sys);
    return s == GABP_OK ? finish_report("poisson", r) : report_error(s);
  }
  char* csv = nullptr;
  if (*cdma) return emit_csv(gabp_cdma_demo(cn, ck, sigma2, seed, use_fix ? 1 : 0, &opts, &csv), &csv);
  if (*krr)
    return emit_csv(gabp_krr(pts.c_str(), labels.c_str(), width, lambda, krr_loading ? 1 : 0, bias ? 1 : 0, &opts, &csv), &csv);
  if (*rate) {
    int sym = 0;
    gabp_status s = gabp_rate(edges.c_str(), priors.empty() ? nullptr : priors.c_str(), mode.c_str(), beta, alpha,
                              &opts, &csv, &sym);
    if (sym) std::fprintf(stderr, "note: asymmetric weights were symmetrized\n");
    return emit_csv(s, &csv);
  }
  if (*kalman) return emit_csv(gabp_kalman_demo(kd, km, ksteps, seed, &opts, &csv), &csv);
  if (*num) {
    int conv = 0;
    return emit_csv(gabp_num(flows, links, route_len, seed, num_solver.c_str(), gap_tol, max_iters, ddstep, threads,
                             &csv, &conv), &csv);
  }
  if (*tables) {
    int pass = 0;
    gabp_status s = gabp_tables(which.c_str(), threads, &csv, &pass);
    int code = emit_csv(s, &csv);
    return code;
  }
  return kUsage;
}
