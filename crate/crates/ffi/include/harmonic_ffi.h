#ifndef HARMONIC_FFI_H
#define HARMONIC_FFI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Casey frame: unit circumcircle, interior limiting point at `(d, 0)`.
 */
#define HP_FRAME_CASEY 0

/**
 * Inversive frame: regular polygon inverted about `(x0, 0)`.
 */
#define HP_FRAME_INVERSIVE 1

typedef enum HpStatus {
  HP_STATUS_OK = 0,
  HP_STATUS_NULL_POINTER = 1,
  HP_STATUS_INVALID_ARGUMENT = 2,
  HP_STATUS_DEGENERATE = 3,
  HP_STATUS_NOT_HARMONIC = 4,
  HP_STATUS_BUFFER_TOO_SMALL = 5,
  HP_STATUS_PANIC = 6,
} HpStatus;

typedef enum HpVerdict {
  HP_VERDICT_INVARIANT = 0,
  HP_VERDICT_VARIES = 1,
  HP_VERDICT_ZERO = 2,
  HP_VERDICT_INCONCLUSIVE = 3,
} HpVerdict;

/**
 * Opaque family handle.
 */
typedef struct HpFamily HpFamily;

typedef struct HpPoint {
  double x;
  double y;
} HpPoint;

/**
 * Stationary objects of a family, in the family's frame. The pencil
 * fields are zero and `has_pencil` is 0 for the regular polygon.
 */
typedef struct HpBrocard {
  struct HpPoint circumcenter;
  double circumradius;
  struct HpPoint symmedian;
  struct HpPoint brocard1;
  struct HpPoint brocard2;
  double inellipse_cx;
  double inellipse_a;
  double inellipse_b;
  double brocard_angle;
  uint8_t has_pencil;
  struct HpPoint brocard_center;
  double brocard_radius;
  struct HpPoint l1;
  struct HpPoint l2;
} HpBrocard;

typedef struct HpInvariantSummary {
  double mean;
  double max_abs_dev;
  double relative_dev;
  /**
   * NaN when no closed form is known.
   */
  double closed_form;
  enum HpVerdict verdict;
} HpInvariantSummary;

typedef struct HpLateralAreas {
  double a1;
  double a2;
  double inv_sum;
} HpLateralAreas;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static NUL-terminated string.
 */
const char *hp_version(void);

/**
 * Static description of a status code.
 */
const char *hp_status_string(enum HpStatus status);

/**
 * Message of the last failed call on this thread; empty after a success.
 * Valid until the next call into the library on this thread.
 */
const char *hp_last_error_message(void);

/**
 * Create a family of `n`-gons. `frame` is [`HP_FRAME_CASEY`] or
 * [`HP_FRAME_INVERSIVE`]; `param` is `d` or `x0` with `|param| < 1`.
 *
 * # Safety
 * `out` must be NULL or valid for writing one pointer.
 */
enum HpStatus hp_family_new(uint32_t n, uint32_t frame, double param, struct HpFamily **out);

/**
 * Release a family. NULL is ignored.
 *
 * # Safety
 * `fam` must be NULL or a handle from [`hp_family_new`] not yet freed.
 */
void hp_family_free(struct HpFamily *fam);

/**
 * # Safety
 * `fam` must be a live handle; `out` valid for writing.
 */
enum HpStatus hp_family_vertex_count(const struct HpFamily *fam, uint32_t *out);

/**
 * Write the `N` vertices at phase `t` into `buf`, which holds `len`
 * points.
 *
 * # Safety
 * `fam` must be a live handle; `buf` valid for writing `len` points.
 */
enum HpStatus hp_family_vertices(const struct HpFamily *fam,
                                 double t,
                                 struct HpPoint *buf,
                                 size_t len);

/**
 * # Safety
 * `fam` must be a live handle; `out` valid for writing.
 */
enum HpStatus hp_family_brocard(const struct HpFamily *fam, struct HpBrocard *out);

/**
 * Brocard angle `arccot(Σs²/(4A))` measured on the polygon at `t`.
 *
 * # Safety
 * `fam` must be a live handle; `out` valid for writing.
 */
enum HpStatus hp_family_brocard_angle_measured(const struct HpFamily *fam, double t, double *out);

/**
 * Largest side-to-inellipse tangency residual at `t`.
 *
 * # Safety
 * `fam` must be a live handle; `out` valid for writing.
 */
enum HpStatus hp_family_closure_residual(const struct HpFamily *fam, double t, double *out);

/**
 * Sweep one quantity, named as on the command line (`sum-inv-sq-sides`,
 * `cotpow:3`, `elemsym:2`, ...), over `samples` phases.
 *
 * # Safety
 * `fam` must be a live handle; `quantity` a NUL-terminated string; `out`
 * valid for writing.
 */
enum HpStatus hp_family_invariant(const struct HpFamily *fam,
                                  const char *quantity,
                                  uint32_t samples,
                                  struct HpInvariantSummary *out);

/**
 * Brocard angle of the polygon at `t` inverted about `(qx, qy)`.
 *
 * # Safety
 * `fam` must be a live handle; `out` valid for writing.
 */
enum HpStatus hp_family_omega_prime(const struct HpFamily *fam,
                                    double t,
                                    double qx,
                                    double qy,
                                    double *out);

/**
 * Areas of the polar images about the inner foci of the homothetic
 * `n`-gon at `t` with inner semiaxes `(ah, bh)` centered at the origin.
 *
 * # Safety
 * `out` must be valid for writing.
 */
enum HpStatus hp_lateral_areas(uint32_t n,
                               double ah,
                               double bh,
                               double t,
                               struct HpLateralAreas *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HARMONIC_FFI_H */
