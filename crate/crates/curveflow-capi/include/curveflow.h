#ifndef CURVEFLOW_H
#define CURVEFLOW_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of a C API call.
typedef enum CfStatus {
  // Success.
  CF_STATUS_OK = 0,
  // Invalid argument (null pointer, non-finite number, bad buffer size).
  CF_STATUS_INVALID = 1,
  // No nonconstant soliton exists for the requested constants.
  CF_STATUS_NO_SOLITON = 2,
  // Curvature left the admissible domain of the integrand or speed law.
  CF_STATUS_DOMAIN = 3,
  // A stability or stiffness limit stopped the computation.
  CF_STATUS_STABILITY = 4,
} CfStatus;

// An immutable sampled plane curve (opaque).
typedef struct CfCurve CfCurve;

// Translation fit of a trajectory against its initial state.
typedef struct CfFit {
  double vx;
  double vy;
  double shape_residual;
  double linearity_residual;
} CfFit;

// Value and first three curvature derivatives of an integrand.
typedef struct CfJet {
  double value;
  double d1;
  double d2;
  double d3;
} CfJet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static description of a status code.
const char *cf_status_message(enum CfStatus status);

// Builds the translating soliton of the flow `(kappa^p + b)/a` (or the
// logarithmic law when `log_mode` is set) at first-integral level `d`,
// over `s` in `[-half_span, half_span]`. On success `*out` owns a new
// curve handle.
//
// # Safety
// `out` must be a valid pointer to writable storage for one pointer.
enum CfStatus cf_soliton_build(bool log_mode,
                               double p,
                               double b,
                               double d,
                               double half_span,
                               double tol,
                               struct CfCurve **out);

// Builds a curve handle from raw xy samples. `closed` marks a closed
// polyline (the wrap edge is implied, do not repeat the first point).
//
// # Safety
// `xs` and `ys` must point to `n` readable doubles; `out` must be valid.
enum CfStatus cf_curve_from_points(const double *xs,
                                   const double *ys,
                                   size_t n,
                                   bool closed,
                                   struct CfCurve **out);

// Releases a curve handle. Null is ignored.
//
// # Safety
// `curve` must have been produced by this library and not freed before.
void cf_curve_free(struct CfCurve *curve);

// Number of samples in the curve; 0 for null.
//
// # Safety
// `curve` must be a live handle or null.
size_t cf_curve_len(const struct CfCurve *curve);

// Whether the curve is a closed polyline.
//
// # Safety
// `curve` must be a live handle or null.
bool cf_curve_is_closed(const struct CfCurve *curve);

// Copies per-sample data into caller buffers. Any of the buffer pointers
// may be null to skip that column; non-null buffers must hold `cap`
// doubles and `cap` must cover the whole curve.
//
// # Safety
// Non-null buffers must be writable for `cap` doubles.
enum CfStatus cf_curve_samples(const struct CfCurve *curve,
                               double *arc,
                               double *x,
                               double *y,
                               double *kappa,
                               size_t cap);

// Largest violation of the prescribed-curvature soliton equation
// `speed_law(kappa) + b = a <N, V>` over the samples, with `V = (vx, vy)`.
//
// # Safety
// `curve` must be a live handle; `out` must be writable.
enum CfStatus cf_soliton_residual(const struct CfCurve *curve,
                                  bool log_mode,
                                  double p,
                                  double a,
                                  double b,
                                  double vx,
                                  double vy,
                                  double *out);

// Evolves a curve under the flow `(speed_law(kappa) + b)/a` to `t_end`
// and reports the translation fit of the trajectory. On success
// `*out_final` owns the final state.
//
// # Safety
// `initial` must be a live handle; `out_final` and `out_fit` must be
// writable.
enum CfStatus cf_flow_evolve(const struct CfCurve *initial,
                             bool log_mode,
                             double p,
                             double a,
                             double b,
                             double t_end,
                             double cfl,
                             double interior_margin,
                             struct CfCurve **out_final,
                             struct CfFit *out_fit);

// Evaluates an integrand jet. `kind` selects the family: 0 power
// (`kappa^p + lambda`), 1 entropy (`kappa log kappa + lambda`), 2 log
// (`log kappa + lambda`); `p` is read for the power family only.
//
// # Safety
// `out` must be writable.
enum CfStatus cf_energy_evaluate(uint32_t kind,
                                 double p,
                                 double lambda,
                                 double kappa,
                                 struct CfJet *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CURVEFLOW_H */
