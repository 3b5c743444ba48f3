#ifndef HOLONOMIC_H
#define HOLONOMIC_H

/* Generated by cbindgen from holonomic-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible call.
 */
typedef enum HoloStatus {
  HOLO_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  HOLO_STATUS_NULL_ARGUMENT = 1,
  /**
   * An argument was out of range or otherwise malformed.
   */
  HOLO_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The inputs produced a degenerate configuration (constant function,
   * tangential level, or non-finite data).
   */
  HOLO_STATUS_DEGENERATE = 3,
  /**
   * The query point lies inside the exclusion tube around the curve.
   */
  HOLO_STATUS_ON_CURVE = 4,
  /**
   * The curve has a near-zero velocity and is rejected.
   */
  HOLO_STATUS_NOT_IMMERSED = 5,
  /**
   * An adaptive computation exceeded its refinement budget.
   */
  HOLO_STATUS_NON_CONVERGENT = 6,
  /**
   * A panic was caught at the boundary.
   */
  HOLO_STATUS_PANIC = 7,
} HoloStatus;

/**
 * Opaque handle to a closed immersed curve.
 */
typedef struct HoloCurve HoloCurve;

/**
 * Opaque handle to a trigonometric polynomial.
 */
typedef struct HoloTrigPoly HoloTrigPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version of the underlying library as a static NUL-terminated string.
 */
const char *holo_version(void);

/**
 * Builds a seeded random polynomial of the given degree with
 * coefficients drawn uniformly from `[-amplitude, amplitude]`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum HoloStatus holo_trigpoly_random(uint64_t seed,
                                     size_t degree,
                                     double amplitude,
                                     struct HoloTrigPoly **out);

/**
 * Builds a polynomial from a mean value and `pairs` harmonic
 * coefficients laid out as `[a1, b1, a2, b2, …]` (frequency `k` has
 * coefficient `a_k cos(kt) + b_k sin(kt)`).
 *
 * # Safety
 * `coeffs` must point to `2 * pairs` doubles (may be NULL when `pairs`
 * is zero); `out` must be a valid pointer.
 */
enum HoloStatus holo_trigpoly_new(double mean,
                                  const double *coeffs,
                                  size_t pairs,
                                  struct HoloTrigPoly **out);

/**
 * Evaluates the polynomial at parameter `t`.
 *
 * # Safety
 * `poly` must be a live handle; `out` must be a valid pointer.
 */
enum HoloStatus holo_trigpoly_evaluate(const struct HoloTrigPoly *poly, double t, double *out);

/**
 * Returns a new handle holding the derivative.
 *
 * # Safety
 * `poly` must be a live handle; `out` must be a valid pointer.
 */
enum HoloStatus holo_trigpoly_derivative(const struct HoloTrigPoly *poly,
                                         struct HoloTrigPoly **out);

/**
 * Releases a polynomial handle. NULL is ignored.
 *
 * # Safety
 * `poly` must have come from this library and not been freed before.
 */
void holo_trigpoly_free(struct HoloTrigPoly *poly);

/**
 * Builds the closed curve `(x(t), y(t))`; fails with
 * `HOLO_STATUS_NOT_IMMERSED` when the velocity can vanish.
 *
 * # Safety
 * `x` and `y` must be live handles; `out` must be a valid pointer.
 */
enum HoloStatus holo_curve_new(const struct HoloTrigPoly *x,
                               const struct HoloTrigPoly *y,
                               struct HoloCurve **out);

/**
 * Builds the curve `(f'(t), f(t))`.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum HoloStatus holo_curve_holonomic(const struct HoloTrigPoly *f, struct HoloCurve **out);

/**
 * Releases a curve handle. NULL is ignored.
 *
 * # Safety
 * `curve` must have come from this library and not been freed before.
 */
void holo_curve_free(struct HoloCurve *curve);

/**
 * Writes the axis-aligned bounding box as `[x0, y0, x1, y1]`.
 *
 * # Safety
 * `curve` must be a live handle; `out` must point to four doubles.
 */
enum HoloStatus holo_curve_bounding_box(const struct HoloCurve *curve, double *out);

/**
 * Rotation number about `(x, y)` by certified ray crossings, with the
 * two-sided level perturbation fallback.
 *
 * # Safety
 * `curve` must be a live handle; `out` must be a valid pointer.
 */
enum HoloStatus holo_curve_rotation_ray(const struct HoloCurve *curve,
                                        double x,
                                        double y,
                                        int64_t *out);

/**
 * Rotation number about `(x, y)` by adaptive angle accumulation;
 * `residual` receives the distance of the raw turn count from the
 * returned integer.
 *
 * # Safety
 * `curve` must be a live handle; `out` and `residual` must be valid.
 */
enum HoloStatus holo_curve_rotation_angle(const struct HoloCurve *curve,
                                          double x,
                                          double y,
                                          int64_t *out,
                                          double *residual);

/**
 * Winding of the tangent vector about the origin.
 *
 * # Safety
 * `curve` must be a live handle; `out` must be a valid pointer.
 */
enum HoloStatus holo_curve_whitney(const struct HoloCurve *curve, int64_t *out);

/**
 * Rotation numbers on an `nx × ny` grid over `[x0, x1] × [y0, y1]`,
 * serialized as the region-map JSON document
 * `{"bounds", "nx", "ny", "values", "sentinel"}` with row-major values
 * from the bottom row up and failed cells at the sentinel.
 *
 * # Safety
 * `curve` must be a live handle; `out` must be a valid pointer.
 */
enum HoloStatus holo_curve_region_map_json(const struct HoloCurve *curve,
                                           double x0,
                                           double y0,
                                           double x1,
                                           double y1,
                                           size_t nx,
                                           size_t ny,
                                           char **out);

/**
 * Runs the randomized whole-statement sweep and returns the JSON report
 * (with `elapsed_ms` zeroed so identical seeds give identical bytes).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum HoloStatus holo_verify_theorem_json(uint64_t seed,
                                         uint64_t trials,
                                         size_t n_max,
                                         size_t f_degree,
                                         char **out);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must have come from this library and not been freed before.
 */
void holo_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOLONOMIC_H */
