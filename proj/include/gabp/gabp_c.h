/* Copyright 2026 The gabp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GABP_C_H_
#define GABP_C_H_

#include <stdint.h>

#if defined(GABP_BUILDING_LIBRARY)
#define GABP_API __attribute__((visibility("default")))
#else
#define GABP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct gabp_system gabp_system;
typedef struct gabp_report gabp_report;

/* Return codes. Nonzero values carry a message in gabp_last_error(). */
typedef enum {
  GABP_OK = 0,
  GABP_E_INVALID = 1,
  GABP_E_DIMENSION = 2,
  GABP_E_SINGULAR = 3,
  GABP_E_NORMALIZATION = 4,
  GABP_E_NOT_CONVERGED = 5,
  GABP_E_DIVERGED = 6,
  GABP_E_IO = 7,
  GABP_E_PARSE = 8,
  GABP_E_DUPLICATE = 9,
  GABP_E_ASYMMETRIC = 10,
  GABP_E_DEGENERATE = 11,
  GABP_E_LINE_SEARCH = 12,
  GABP_E_INTERNAL = 100
} gabp_status;

typedef enum {
  GABP_METHOD_GABP = 0,
  GABP_METHOD_GABP_BROADCAST = 1,
  GABP_METHOD_JACOBI = 2,
  GABP_METHOD_GAUSS_SEIDEL = 3,
  GABP_METHOD_SOR = 4,
  GABP_METHOD_SOR_OPTIMAL = 5
} gabp_method;

typedef enum { GABP_SCHEDULE_SERIAL = 0, GABP_SCHEDULE_PARALLEL = 1 } gabp_schedule;
typedef enum { GABP_ACCEL_NONE = 0, GABP_ACCEL_AITKEN = 1, GABP_ACCEL_STEFFENSEN = 2 } gabp_accel;
typedef enum { GABP_CONVERGED = 0, GABP_MAX_ROUNDS = 1, GABP_DIVERGED = 2 } gabp_solve_status;

typedef struct {
  int method;
  int schedule;
  double eps;
  int max_rounds;
  int accel;
  int threads;
  double omega;
} gabp_solver_options;

typedef enum {
  GABP_LOADING_SCALAR = 0,
  GABP_LOADING_PER_NODE = 1
} gabp_loading_mode;

typedef struct {
  int loading_mode;
  double gamma;     /* scalar loading */
  double margin;    /* per-node loading margin */
  double outer_eps;
  int max_outer;
  int single_loop;  /* nonzero: damped single-loop variant */
  double step;      /* single-loop damping s in (0,1] */
} gabp_fix_options;

GABP_API const char* gabp_version(void);
/* Message of the last failing call on this thread. */
GABP_API const char* gabp_last_error(void);
GABP_API void gabp_string_free(char* s);

GABP_API void gabp_solver_options_default(gabp_solver_options* o);
GABP_API void gabp_fix_options_default(gabp_fix_options* o);

/* b_path may be NULL: b is then all ones. */
GABP_API gabp_status gabp_system_read_mtx(const char* a_path, const char* b_path, gabp_system** out);
/* Row-major n x n matrix; must be symmetric. */
GABP_API gabp_status gabp_system_from_dense(int n, const double* a, const double* b, gabp_system** out);
GABP_API gabp_status gabp_system_poisson2d(int p, gabp_system** out);
/* which = 3 or 4: the Gold-code cross-correlation fixtures with b = 1. */
GABP_API gabp_status gabp_system_gold(int which, gabp_system** out);
GABP_API gabp_status gabp_system_write_mtx(const gabp_system* s, const char* a_path, const char* b_path);
GABP_API int gabp_system_size(const gabp_system* s);
GABP_API void gabp_system_free(gabp_system* s);

GABP_API gabp_status gabp_solve(const gabp_system* s, const gabp_solver_options* o, gabp_report** out);
GABP_API int gabp_report_status(const gabp_report* r);
GABP_API int gabp_report_rounds(const gabp_report* r);
GABP_API int gabp_report_size(const gabp_report* r);
GABP_API const double* gabp_report_x(const gabp_report* r);
/* Marginal precisions; NULL for the classical methods. */
GABP_API const double* gabp_report_precision(const gabp_report* r);
/* "round,max_dmsg,residual" rows. */
GABP_API gabp_status gabp_report_trace_csv(const gabp_report* r, char** out);
/* Text summary: status, rounds, x, P. */
GABP_API gabp_status gabp_report_summary(const gabp_report* r, char** out);
GABP_API void gabp_report_free(gabp_report* r);

/* key=value lines: strict_dd, dominance, rho_abs, walk_summable, gamma, bound_rounds. */
GABP_API gabp_status gabp_diagnose(const gabp_system* s, double eps, char** out);
GABP_API gabp_status gabp_optimal_omega(const gabp_system* s, double eps, double* omega);

/* Diagonal-loading convergence fix. outer_csv gets "outer,inner_rounds,dx". */
GABP_API gabp_status gabp_fix(const gabp_system* s, const gabp_solver_options* inner, const gabp_fix_options* f,
                              gabp_report** out, char** outer_csv);

/* Random CDMA instance, decorrelator/MMSE solve, comparison with a dense solve. */
GABP_API gabp_status gabp_cdma_demo(int n, int k, double sigma2, uint64_t seed, int use_fix,
                                    const gabp_solver_options* o, char** csv);

/* points: dense N x d .mtx, labels: N-vector .mtx. CSV "index,label,coef,alpha,fit". */
GABP_API gabp_status gabp_krr(const char* points_path, const char* labels_path, double width, double lambda,
                              int loading, int bias, const gabp_solver_options* o, char** csv);

/* mode: "cost", "spatial", "pagerank", "eigen". edges: TSV src dst weight;
   priors: CSV node,value (value may be empty or "null"), may be NULL. CSV "node,x". */
GABP_API gabp_status gabp_rate(const char* edges_path, const char* priors_path, const char* mode, double beta,
                               double alpha, const gabp_solver_options* o, char** csv, int* symmetrized);

/* CSV "step,p_diff,x_diff,rounds". */
GABP_API gabp_status gabp_kalman_demo(int d, int m, int steps, uint64_t seed, const gabp_solver_options* o,
                                      char** csv);

/* solver: "gabp", "direct", "dualdecomp". CSV starts "step,gap,inner_iters". */
GABP_API gabp_status gabp_num(int flows, int links, double route_len, uint64_t seed, const char* solver,
                              double gap_tol, int max_iters, double step, int threads, char** csv,
                              int* converged);

/* which: a table name or "all". all_pass is set to 1 when every row passes. */
GABP_API gabp_status gabp_tables(const char* which, int threads, char** csv, int* all_pass);

#ifdef __cplusplus
}
#endif

#endif /* GABP_C_H_ */
