#ifndef UNDERBARRIER_H
#define UNDERBARRIER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every call. Solver codes equal the CLI exit codes.
typedef enum UbStatus {
  UB_STATUS_OK = 0,
  UB_STATUS_CONFIG = 2,
  UB_STATUS_IO = 3,
  UB_STATUS_NO_CONVERGENCE = 10,
  UB_STATUS_NEAR_FOLD = 11,
  UB_STATUS_STEP_COLLAPSE = 12,
  UB_STATUS_QUADRATURE_FAILURE = 13,
  UB_STATUS_NO_REAL_ROOT = 14,
  UB_STATUS_FOLDS_MERGED = 15,
  UB_STATUS_WINDOW_VIOLATION = 16,
  UB_STATUS_TRACER_STALL = 17,
  UB_STATUS_INTEGRATOR_TOLERANCE = 18,
  UB_STATUS_NO_ROOT = 19,
  UB_STATUS_DOMAIN = 20,
  UB_STATUS_REGIME_VIOLATION = 21,
  UB_STATUS_SOLVER_FAILURE = 22,
  UB_STATUS_OUT_OF_RANGE = 23,
  UB_STATUS_EXPONENT_CAP = 24,
  UB_STATUS_INVALID_PARAMS = 25,
  UB_STATUS_NULL_POINTER = 100,
  UB_STATUS_INVALID_UTF8 = 101,
  UB_STATUS_PANIC = 102,
} UbStatus;

// Barrier parameters, immutable once created.
typedef struct UbBarrier UbBarrier;

// Owned, NUL-terminated text produced by the library.
typedef struct UbText UbText;

typedef struct UbCriticalWidth {
  double a0;
  double x0;
  double v0;
} UbCriticalWidth;

typedef struct UbPenetration {
  double action_a0;
  double action_a1;
  // Natural-log penetration exponent.
  double w_log;
  // Same exponent for the homogeneous wire.
  double wkb_log;
  double x_b;
  double v_b;
} UbPenetration;

typedef struct UbThreshold {
  double a_r;
  double slope;
  double x_b;
} UbThreshold;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// Valid until the next call on the same thread.
const char *ub_last_error_message(void);

// Library version as a static string.
const char *ub_version(void);

// Create a barrier from B, γ, α0² and a.
//
// # Safety
// `out` must be null or point to writable storage for one handle.
enum UbStatus ub_barrier_new(double b,
                             double gamma,
                             double alpha0_sq,
                             double a,
                             struct UbBarrier **out);

// Release a barrier. Null is ignored.
//
// # Safety
// `h` must be null or a handle from [`ub_barrier_new`] not yet freed.
void ub_barrier_free(struct UbBarrier *h);

// Critical width a0 and the cusp location for the barrier's B, γ, α0.
//
// # Safety
// `h` must be a live handle and `out` writable.
enum UbStatus ub_critical_width(const struct UbBarrier *h, struct UbCriticalWidth *out);

// Penetration exponent along the imaginary-time trajectory.
//
// # Safety
// `h` must be a live handle and `out` writable.
enum UbStatus ub_penetration(const struct UbBarrier *h, struct UbPenetration *out);

// Width a_R at which the tunneling action A0 + A1 vanishes, with the slope
// d(A0 + A1)/da / B there. The handle's own a is ignored.
//
// # Safety
// `h` must be a live handle and `out` writable.
enum UbStatus ub_threshold(const struct UbBarrier *h, struct UbThreshold *out);

// Run every scenario in a config text and return the rendered outputs,
// concatenated in section order.
//
// # Safety
// `config` must be a NUL-terminated string and `out` writable.
enum UbStatus ub_run_config(const char *config, struct UbText **out);

// Contents of a text handle, valid until it is freed.
//
// # Safety
// `t` must be null or a live text handle.
const char *ub_text_data(const struct UbText *t);

// Release a text handle. Null is ignored.
//
// # Safety
// `t` must be null or a handle from [`ub_run_config`] not yet freed.
void ub_text_free(struct UbText *t);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UNDERBARRIER_H */
