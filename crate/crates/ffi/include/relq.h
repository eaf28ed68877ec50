#ifndef RELQ_H
#define RELQ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum RelqStatus {
  RELQ_STATUS_OK = 0,
  RELQ_STATUS_NULL_POINTER = 1,
  RELQ_STATUS_INVALID_MODEL = 2,
  RELQ_STATUS_INVALID_ARGUMENT = 3,
  RELQ_STATUS_INDEX_OUT_OF_RANGE = 4,
  RELQ_STATUS_BUFFER_TOO_SMALL = 5,
  RELQ_STATUS_INTERNAL = 6,
} RelqStatus;

/**
 * Opaque model handle.
 */
typedef struct RelqModel RelqModel;

typedef struct RelqComplex {
  double re;
  double im;
} RelqComplex;

/**
 * `<+j| q1(t') q1(t) |+j>` and the two closed forms it is compared with.
 */
typedef struct RelqTwoPoint {
  struct RelqComplex value;
  struct RelqComplex derived;
  struct RelqComplex reference;
} RelqTwoPoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *relq_version(void);

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`) and returns the length the full message needs,
 * including the terminator. Passing a null `buf` only queries the length.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t relq_last_error(char *buf, size_t len);

/**
 * Builds the model with constraint constant `m` (the Hilbert-space
 * dimension) and stores the handle in `*out`.
 *
 * # Safety
 * `out` must be valid for one pointer write.
 */
enum RelqStatus relq_model_new(int64_t m, struct RelqModel **out);

/**
 * Releases a handle from [`relq_model_new`]. Null is ignored.
 *
 * # Safety
 * `model` must be null or a handle not yet freed.
 */
void relq_model_free(struct RelqModel *model);

/**
 * Hilbert-space dimension `N = M`, or 0 for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
size_t relq_model_dimension(const struct RelqModel *model);

/**
 * `j = (M - 1)/2`, or NaN for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
double relq_model_j(const struct RelqModel *model);

/**
 * Zeros of `H_n` in increasing order and, if `weights` is not null, the
 * matching Gauss–Hermite weights normalized to sum to one.
 *
 * # Safety
 * `roots` (and `weights` when not null) must be valid for `len` writes.
 */
enum RelqStatus relq_hermite_roots(size_t n, double *roots, double *weights, size_t len);

/**
 * Row-major `N x N` matrix of `q1(t)` in the basis `m = -j, ..., +j`.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for `len` writes.
 */
enum RelqStatus relq_q1_operator(const struct RelqModel *model,
                                 double t,
                                 struct RelqComplex *out,
                                 size_t len);

/**
 * Row-major `N x N` matrix of `p1(t)`.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for `len` writes.
 */
enum RelqStatus relq_p1_operator(const struct RelqModel *model,
                                 double t,
                                 struct RelqComplex *out,
                                 size_t len);

/**
 * Eigenvalue `q_k` of `q1(t)`, `k = 1..=N` in increasing order.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for one write.
 */
enum RelqStatus relq_root(const struct RelqModel *model, size_t k, double *out);

/**
 * Amplitudes `<m|q_k(t)>` for `m = -j, ..., +j`.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for `len` writes.
 */
enum RelqStatus relq_eigenstate(const struct RelqModel *model,
                                size_t k,
                                double t,
                                struct RelqComplex *out,
                                size_t len);

/**
 * Transition amplitude `<q_l(t_to)|q_k(t_from)>`.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for one write.
 */
enum RelqStatus relq_propagator(const struct RelqModel *model,
                                size_t k,
                                size_t l,
                                double t_from,
                                double t_to,
                                struct RelqComplex *out);

/**
 * Two-point function of `q1` in the state `|+j>`; needs `N >= 2`.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for one write.
 */
enum RelqStatus relq_two_point(const struct RelqModel *model,
                               double t,
                               double t_prime,
                               struct RelqTwoPoint *out);

/**
 * Runs the invariant suite with default settings. `*passed` is set to 1 if
 * every check passed and `*failures` (if not null) to the number of failed
 * checks. A failing check is not an error status.
 *
 * # Safety
 * `model` must be a live handle, `passed` valid for one write and
 * `failures` null or valid for one write.
 */
enum RelqStatus relq_verify(const struct RelqModel *model, uint8_t *passed, size_t *failures);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RELQ_H */
