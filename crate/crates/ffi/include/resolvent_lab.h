#ifndef RESOLVENT_LAB_H
#define RESOLVENT_LAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RlIterStatus {
  RL_ITER_STATUS_CONVERGED = 0,
  RL_ITER_STATUS_MAX_ITER = 1,
  RL_ITER_STATUS_DIVERGED = 2,
} RlIterStatus;

typedef enum RlMapProperty {
  RL_MAP_PROPERTY_CONIC = 0,
  RL_MAP_PROPERTY_AVERAGED = 1,
  RL_MAP_PROPERTY_NONEXPANSIVE = 2,
  RL_MAP_PROPERTY_COCOERCIVE = 3,
  RL_MAP_PROPERTY_LIPSCHITZ = 4,
  RL_MAP_PROPERTY_STRONGLY_MONOTONE = 5,
} RlMapProperty;

/**
 * Table row of a matrix's optimal comonotonicity modulus.
 */
typedef enum RlRegime {
  RL_REGIME_COCOERCIVE = 0,
  RL_REGIME_MONOTONE = 1,
  RL_REGIME_AVERAGED = 2,
  RL_REGIME_NONEXPANSIVE = 3,
  RL_REGIME_CONIC = 4,
  RL_REGIME_MAYBE_MULTIVALUED = 5,
} RlRegime;

typedef enum RlStatus {
  RL_STATUS_OK = 0,
  RL_STATUS_NULL_POINTER = 1,
  RL_STATUS_INVALID_ARGUMENT = 2,
  RL_STATUS_DIMENSION = 3,
  RL_STATUS_DOMAIN = 4,
  RL_STATUS_REGIME = 5,
  RL_STATUS_RESOLVENT_UNDEFINED = 6,
  RL_STATUS_BRACKET = 7,
  RL_STATUS_PARSE = 8,
  RL_STATUS_PANIC = 9,
} RlStatus;

/**
 * Opaque operator graph.
 */
typedef struct RlGraph RlGraph;

/**
 * Opaque square matrix.
 */
typedef struct RlMatrix RlMatrix;

/**
 * Summary of a certification report.
 */
typedef struct RlCert {
  bool passed;
  double worst_margin;
  uintptr_t samples_used;
} RlCert;

/**
 * Summary of a proximal-point run.
 */
typedef struct RlTrace {
  enum RlIterStatus status;
  uintptr_t iterations;
  double last;
  double last_residual;
} RlTrace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failing call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *rl_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *rl_version(void);

/**
 * Builds an `n × n` matrix from `n*n` row-major doubles.
 *
 * # Safety
 * `data` must point to `n*n` doubles; `out` must be writable.
 */
enum RlStatus rl_matrix_new(uintptr_t n, const double *data, struct RlMatrix **out_m);

/**
 * Parses a matrix file `{"n": k, "rows": [[..], ..]}`.
 *
 * # Safety
 * `json` must be NUL-terminated; `out` must be writable.
 */
enum RlStatus rl_matrix_from_json(const char *json, struct RlMatrix **out_m);

/**
 * # Safety
 * `m` must be null or a handle from this library, freed at most once.
 */
void rl_matrix_free(struct RlMatrix *m);

/**
 * Side length of the matrix, 0 for null.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
uintptr_t rl_matrix_dim(const struct RlMatrix *m);

/**
 * `y = M x` for vectors of length `rl_matrix_dim(m)`.
 *
 * # Safety
 * `x` and `y` must hold `rl_matrix_dim(m)` doubles.
 */
enum RlStatus rl_matrix_apply(const struct RlMatrix *m, const double *x, double *y);

/**
 * Largest ρ with `A` ρ-monotone.
 *
 * # Safety
 * `m` must be a live handle; `rho` must be writable.
 */
enum RlStatus rl_matrix_optimal_monotone(const struct RlMatrix *m, double *rho);

/**
 * Largest ρ with `A` ρ-comonotone; `+INFINITY` for the zero matrix.
 *
 * # Safety
 * `m` must be a live handle; `rho` must be writable.
 */
enum RlStatus rl_matrix_optimal_comonotone(const struct RlMatrix *m, double *rho);

/**
 * `(I + A)⁻¹` as a new handle.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum RlStatus rl_matrix_resolvent(const struct RlMatrix *m, struct RlMatrix **out_m);

/**
 * Certifies a map property of the matrix viewed as `x ↦ Mx` on sampled pairs.
 *
 * # Safety
 * `m` must be a live handle; `result` must be writable.
 */
enum RlStatus rl_matrix_certify(const struct RlMatrix *m,
                                enum RlMapProperty property,
                                double param,
                                uint64_t seed,
                                double tol,
                                struct RlCert *result);

/**
 * Regime of the matrix and whether every claim of its row certified.
 *
 * # Safety
 * `m` must be a live handle; outputs must be writable.
 */
enum RlStatus rl_matrix_correspond(const struct RlMatrix *m,
                                   uint64_t seed,
                                   double tol,
                                   enum RlRegime *regime,
                                   bool *passed);

/**
 * Parses a graph file `{"dim": n, "pairs": [{"x": [..], "u": [..]}, ..]}`.
 *
 * # Safety
 * `json` must be NUL-terminated; `out` must be writable.
 */
enum RlStatus rl_graph_from_json(const char *json, struct RlGraph **out_g);

/**
 * Graph of `{(x, Mx)}` at the given `count` points of dimension `rl_matrix_dim(m)`.
 *
 * # Safety
 * `points` must hold `count * rl_matrix_dim(m)` doubles; `out` must be writable.
 */
enum RlStatus rl_graph_from_matrix(const struct RlMatrix *m,
                                   const double *points,
                                   uintptr_t count,
                                   struct RlGraph **out_g);

/**
 * # Safety
 * `g` must be null or a handle from this library, freed at most once.
 */
void rl_graph_free(struct RlGraph *g);

/**
 * Number of graph points, 0 for null.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
uintptr_t rl_graph_len(const struct RlGraph *g);

/**
 * Resolvent graph `{(x + u, x)}` as a new handle.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum RlStatus rl_graph_resolvent(const struct RlGraph *g, struct RlGraph **out_g);

/**
 * # Safety
 * `g` must be a live handle; `result` must be writable.
 */
enum RlStatus rl_graph_check_rho_monotone(const struct RlGraph *g,
                                          double rho,
                                          double tol,
                                          struct RlCert *result);

/**
 * # Safety
 * `g` must be a live handle; `result` must be writable.
 */
enum RlStatus rl_graph_check_rho_comonotone(const struct RlGraph *g,
                                            double rho,
                                            double tol,
                                            struct RlCert *result);

/**
 * # Safety
 * `g` must be a live handle; `result` must be writable.
 */
enum RlStatus rl_graph_check_single_valued(const struct RlGraph *g, struct RlCert *result);

/**
 * Principal branch of the Lambert W function, `z ≥ −1/e`.
 *
 * # Safety
 * `w` must be writable.
 */
enum RlStatus rl_lambert_w0(double z, double *w);

/**
 * Closed-form prox of `e^y − y²/(2λ)` with step `μ ≤ λ`.
 *
 * # Safety
 * `y` must be writable.
 */
enum RlStatus rl_prox_exp(double lambda, double mu, double x, double *y);

/**
 * Prox of `ι_[lo,hi] − y²/(2λ)` with step `μ < λ`; infinite bounds allowed.
 *
 * # Safety
 * `y` must be writable.
 */
enum RlStatus rl_prox_indicator_quadratic(double lambda,
                                          double mu,
                                          double lo,
                                          double hi,
                                          double x,
                                          double *y);

/**
 * Proximal-point iteration on the exp family from `x0`.
 *
 * # Safety
 * `trace` must be writable.
 */
enum RlStatus rl_proximal_point_exp(double lambda,
                                    double mu,
                                    double x0,
                                    uintptr_t max_iter,
                                    double tol,
                                    struct RlTrace *trace);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RESOLVENT_LAB_H */
