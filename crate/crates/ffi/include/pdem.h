#ifndef PDEM_H
#define PDEM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  PDEM_STATUS_OK = 0,
  PDEM_STATUS_NULL_POINTER = 1,
  PDEM_STATUS_INVALID_ARGUMENT = 2,
  PDEM_STATUS_BELOW_THRESHOLD = 3,
  PDEM_STATUS_SINGULAR_MATCHING = 4,
  PDEM_STATUS_NO_CONVERGENCE = 5,
  PDEM_STATUS_NUMERIC_FAILURE = 6,
  PDEM_STATUS_PANIC = 7,
} PdemStatus;

typedef enum {
  PDEM_SIDE_LEFT = 0,
  PDEM_SIDE_RIGHT = 1,
} PdemSide;

typedef enum {
  PDEM_METHOD_ANALYTIC = 0,
  PDEM_METHOD_ORACLE = 1,
} PdemMethod;

/**
 * Opaque device handle.
 */
typedef struct PdemDevice PdemDevice;

typedef struct {
  double re;
  double im;
} PdemComplex;

/**
 * Amplitudes for one incidence side.
 */
typedef struct {
  PdemComplex r;
  PdemComplex t;
  double condition;
} PdemScatter;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a device. On success `*out` owns a handle for [`pdem_device_free`].
 *
 * # Safety
 * `out` must be null or valid for a pointer write.
 */
PdemStatus pdem_device_new(double g, double mu1, double mu2, double a0, PdemDevice **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `dev` must be null or a handle from [`pdem_device_new`] not yet freed.
 */
void pdem_device_free(PdemDevice *dev);

/**
 * Threshold V₀ of the exterior.
 *
 * # Safety
 * `dev` must be a live handle; `out` valid for a write.
 */
PdemStatus pdem_threshold(const PdemDevice *dev, double *out);

/**
 * Reflection and transmission amplitudes at real energy above threshold.
 *
 * # Safety
 * `dev` must be a live handle; `out` valid for a write.
 */
PdemStatus pdem_scatter(const PdemDevice *dev,
                        double energy,
                        PdemSide side,
                        PdemMethod method,
                        PdemScatter *out);

/**
 * Bound-state energies in ascending order. `*count` receives the number
 * found; at most `capacity` of them are written to `energies`, which may be
 * null when `capacity` is 0.
 *
 * # Safety
 * `dev` must be a live handle, `count` valid for a write, and `energies`
 * valid for `capacity` writes.
 */
PdemStatus pdem_bound_states(const PdemDevice *dev,
                             double *energies,
                             uintptr_t capacity,
                             uintptr_t *count);

/**
 * Potential V(z) of the full device.
 *
 * # Safety
 * `dev` must be a live handle; `out` valid for a write.
 */
PdemStatus pdem_potential(const PdemDevice *dev, double z, PdemComplex *out);

/**
 * Effective mass m(z) of the full device.
 *
 * # Safety
 * `dev` must be a live handle; `out` valid for a write.
 */
PdemStatus pdem_mass(const PdemDevice *dev, double z, double *out);

/**
 * ₂F₁(a, b; c; y) for |y| ≤ 0.75.
 *
 * # Safety
 * `out` must be valid for a write.
 */
PdemStatus pdem_hyp2f1(PdemComplex a,
                       PdemComplex b,
                       PdemComplex c,
                       PdemComplex y,
                       PdemComplex *out);

/**
 * Message for the last failed call on this thread, or "" after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *pdem_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PDEM_H */
