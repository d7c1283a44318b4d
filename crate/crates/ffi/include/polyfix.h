#ifndef POLYFIX_H
#define POLYFIX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Classification of a fixed point by the modulus of its multiplier.
 */
typedef enum PfClass {
  PF_CLASS_ATTRACTIVE = 0,
  PF_CLASS_NEUTRAL = 1,
  PF_CLASS_REPELLING = 2,
} PfClass;

/**
 * Result codes. Zero is success.
 */
typedef enum PfStatus {
  PF_STATUS_OK = 0,
  PF_STATUS_NULL_POINTER = 1,
  PF_STATUS_INVALID_ARGUMENT = 2,
  PF_STATUS_NON_FINITE = 3,
  PF_STATUS_DEGREE_TOO_SMALL = 4,
  PF_STATUS_NO_CONVERGENCE = 5,
  PF_STATUS_NODES_TOO_CLOSE = 6,
  PF_STATUS_BUFFER_TOO_SMALL = 7,
  PF_STATUS_PANIC = 8,
} PfStatus;

/**
 * Opaque polynomial handle.
 */
typedef struct PfPolynomial PfPolynomial;

/**
 * Root-finding and classification settings. Obtain defaults from
 * [`pf_options_default`].
 */
typedef struct PfOptions {
  double tol;
  size_t max_iter;
  uint64_t seed;
  double eps_class;
  double eps_line;
} PfOptions;

/**
 * One fixed point `theta` with multiplier `p'(theta)`.
 */
typedef struct PfFixedPoint {
  double theta_re;
  double theta_im;
  double multiplier_re;
  double multiplier_im;
  enum PfClass classification;
} PfFixedPoint;

/**
 * Collinear attractive count against `ceil(degree / 2)`.
 */
typedef struct PfBoundReport {
  size_t degree;
  size_t attractive_count;
  size_t max_collinear_attractive;
  size_t bound;
  bool satisfied;
} PfBoundReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Default options.
 */
struct PfOptions pf_options_default(void);

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *pf_last_error(void);

/**
 * Static description of a status code.
 */
const char *pf_status_string(enum PfStatus status);

/**
 * Builds a polynomial from `count` coefficients in ascending degree, given
 * as `2 * count` interleaved doubles.
 */
enum PfStatus pf_polynomial_new(const double *coeffs, size_t count, struct PfPolynomial **out);

/**
 * The member of the extremal family with `n` superattracting roots of unity.
 */
enum PfStatus pf_polynomial_exemplar(size_t n, struct PfPolynomial **out);

/**
 * Hermite interpolant through `count` nodes, each four doubles
 * `(z_re, z_im, alpha_re, alpha_im)`: `h(z_i) = z_i`, `h'(z_i) = alpha_i`.
 */
enum PfStatus pf_synthesize(const double *nodes, size_t count, struct PfPolynomial **out);

/**
 * Releases a handle. Null is ignored.
 */
void pf_polynomial_free(struct PfPolynomial *p);

/**
 * Degree of the polynomial; 0 for a null handle.
 */
size_t pf_polynomial_degree(const struct PfPolynomial *p);

/**
 * Writes the coefficients into `out` (room for `capacity` complex values)
 * and their number into `count`. With a short buffer nothing is written
 * except `count`, and the call fails with `BufferTooSmall`.
 */
enum PfStatus pf_polynomial_coeffs(const struct PfPolynomial *p,
                                   double *out,
                                   size_t capacity,
                                   size_t *count);

/**
 * Evaluates `p(re + i im)` into `out[0..2]`.
 */
enum PfStatus pf_polynomial_eval(const struct PfPolynomial *p, double re, double im, double *out);

/**
 * Fixed points with multipliers and classes, in lexicographic order. `count`
 * receives the number of fixed points (the degree); `out` must have room
 * for that many records. `opts` may be null for defaults.
 */
enum PfStatus pf_fixed_points(const struct PfPolynomial *p,
                              const struct PfOptions *opts,
                              struct PfFixedPoint *out,
                              size_t capacity,
                              size_t *count);

/**
 * Largest set of collinear attractive fixed points against `ceil(degree/2)`.
 */
enum PfStatus pf_check_half_bound(const struct PfPolynomial *p,
                                  const struct PfOptions *opts,
                                  struct PfBoundReport *out);

/**
 * `max Re p'(theta)` over the fixed points.
 */
enum PfStatus pf_conjecture_margin(const struct PfPolynomial *p,
                                   const struct PfOptions *opts,
                                   double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POLYFIX_H */
