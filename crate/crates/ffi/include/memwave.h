#ifndef MEMWAVE_H
#define MEMWAVE_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MwStatus {
  MW_STATUS_OK = 0,
  MW_STATUS_NULL_POINTER = 1,
  MW_STATUS_INVALID_ARGUMENT = 2,
  MW_STATUS_NUMERICAL = 3,
  MW_STATUS_HYPOTHESIS_VIOLATED = 4,
  MW_STATUS_CHECK_FAILED = 5,
  MW_STATUS_INFEASIBLE = 6,
  MW_STATUS_NOT_POSITIVE = 7,
  MW_STATUS_PANIC = 8,
} MwStatus;

/**
 * Opaque solution handle built from sine coefficients.
 */
typedef struct MwModeSet MwModeSet;

/**
 * Roots of one mode: exponents `i ω`, `−i conj(ω)` and `r`.
 */
typedef struct MwSpectralTriple {
  double omega_re;
  double omega_im;
  double r;
  double phi;
  double psi;
} MwSpectralTriple;

typedef struct MwThresholds {
  double beta0;
  /**
   * `INFINITY` when no horizon suffices.
   */
  double t0;
  double s;
  double gamma;
} MwThresholds;

typedef struct MwMuEstimate {
  double mu_hat;
  uint32_t k1;
  uint32_t k2;
} MwMuEstimate;

typedef struct MwObservabilityReport {
  double lhs;
  double rhs_sum;
  double s;
  double c0;
  double t0;
  double beta0;
  double margin;
  double gamma;
  double mu;
  double beta;
  double horizon;
  double theta;
  size_t kmax;
  bool verdict;
  bool below_threshold;
  bool mu_estimated;
} MwObservabilityReport;

typedef struct MwInghamReport {
  double lhs;
  double rhs;
  double s;
  double margin;
  /**
   * Number of violated hypotheses.
   */
  size_t violations;
} MwInghamReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code. Never null.
 */
const char *mw_status_message(enum MwStatus status);

/**
 * Message for the last failing call on this thread; empty after success.
 * Valid until the next call into this library on the same thread.
 */
const char *mw_last_error_message(void);

/**
 * Closed-form roots of `z³ + η z² + λ z + (η − β) λ`.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum MwStatus mw_characteristic_roots(double beta,
                                      double eta,
                                      double lambda,
                                      struct MwSpectralTriple *out);

/**
 * Gap constant `γ(β)` for `β ∈ [0, 2/√3]`.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum MwStatus mw_gamma(double beta, double *out);

/**
 * `β0`, `T0`, `S` and `γ(β)` for the given kernel amplitude and coupling.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum MwStatus mw_thresholds(double beta, double mu, double theta, struct MwThresholds *out);

/**
 * Observability constant `c0(T, β, S)`; may be negative below the threshold.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum MwStatus mw_c0(double horizon, double beta, double s, double *out);

/**
 * Build a mode set from `kmax × kmax` sine coefficients of `u(0)` and
 * `u_t(0)`, row-major in `k1`. Free the handle with [`mw_modeset_free`].
 *
 * # Safety
 * `a` and `b` must point to `kmax * kmax` doubles; `out` must be writable.
 */
enum MwStatus mw_modeset_new(double beta,
                             double eta,
                             size_t kmax,
                             const double *a,
                             const double *b,
                             struct MwModeSet **out);

/**
 * Release a handle; null is ignored.
 *
 * # Safety
 * `set` must be null or come from [`mw_modeset_new`] and not be freed twice.
 */
void mw_modeset_free(struct MwModeSet *set);

/**
 * Truncated solution `u(t, x, y)`.
 *
 * # Safety
 * `set` must be a live handle and `out` writable.
 */
enum MwStatus mw_modeset_evaluate(const struct MwModeSet *set,
                                  double t,
                                  double x,
                                  double y,
                                  double *out);

/**
 * Boundary-trace energy over the bottom and left edges on `[0, T]`.
 *
 * # Safety
 * `set` must be a live handle and `out` writable.
 */
enum MwStatus mw_modeset_boundary_lhs(const struct MwModeSet *set, double horizon, double *out);

/**
 * `Σ λ |C|² (1 + e^{−2 Im ω T})`.
 *
 * # Safety
 * `set` must be a live handle and `out` writable.
 */
enum MwStatus mw_modeset_rhs_sum(const struct MwModeSet *set, double horizon, double *out);

/**
 * Empirical coupling constant `max |R| √λ / |C|`.
 *
 * # Safety
 * `set` must be a live handle and `out` writable.
 */
enum MwStatus mw_modeset_estimate_mu(const struct MwModeSet *set, struct MwMuEstimate *out);

/**
 * Evaluate the observability inequality in the limiting regime.
 *
 * `a` and `b` hold `data_kmax × data_kmax` coefficients; the check uses
 * modes up to `kmax`. A negative or NaN `mu` requests the empirical
 * estimate. On [`MwStatus::Infeasible`] `out` is still filled.
 *
 * # Safety
 * `a` and `b` must point to `data_kmax * data_kmax` doubles; `out` must be writable.
 */
enum MwStatus mw_observe(double beta,
                         double horizon,
                         size_t kmax,
                         size_t data_kmax,
                         const double *a,
                         const double *b,
                         double mu,
                         double theta,
                         struct MwObservabilityReport *out);

/**
 * Both sides of the Ingham-type lower bound for a family of `len` terms.
 *
 * `out` is filled whenever the inputs form a family; the status is then
 * [`MwStatus::HypothesisViolated`] if any hypothesis fails and
 * [`MwStatus::CheckFailed`] if the bound itself fails.
 *
 * # Safety
 * Each array must point to `len` doubles; `out` must be writable.
 */
enum MwStatus mw_ingham_bound(const double *omega_re,
                              const double *omega_im,
                              const double *r,
                              const double *c_re,
                              const double *c_im,
                              const double *big_r,
                              size_t len,
                              double gamma,
                              size_t tau,
                              double theta,
                              double mu,
                              double horizon,
                              struct MwInghamReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MEMWAVE_H */
