#ifndef CMAPPROX_H
#define CMAPPROX_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CmStatus {
  CM_STATUS_OK = 0,
  CM_STATUS_NULL_POINTER = 1,
  CM_STATUS_INVALID_PARAMETER = 2,
  CM_STATUS_INVALID_MEASURE = 3,
  CM_STATUS_REQUIRES_MEASURE = 4,
  CM_STATUS_REQUIRES_CLASS = 5,
  CM_STATUS_DIVERGENT = 6,
  CM_STATUS_LIMIT_UNDEFINED = 7,
  CM_STATUS_UNSUPPORTED = 8,
  CM_STATUS_REQUIRES_HOLOMORPHIC = 9,
  CM_STATUS_NON_CONVERGENCE = 10,
  CM_STATUS_INSUFFICIENT_POINTS = 11,
  CM_STATUS_IO = 12,
  CM_STATUS_UTF8 = 13,
  CM_STATUS_PANIC = 14,
} CmStatus;

/**
 * Opaque completely monotone function.
 */
typedef struct CmFunctionHandle CmFunctionHandle;

/**
 * Opaque generator matrix.
 */
typedef struct CmGeneratorHandle CmGeneratorHandle;

/**
 * Scalar functionals; NaN where a value is unavailable.
 */
typedef struct CmFunctionalValues {
  double l;
  double a;
  double b;
  double c_alpha;
  double d0;
  double d1;
} CmFunctionalValues;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *cm_last_error(void);

/**
 * Library version as a static string.
 */
const char *cm_version(void);

/**
 * Parse a function spec such as "euler", "kendall:t=0.5" or "frac_tail:gamma=0.3".
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CmStatus cm_function_new(const char *spec, struct CmFunctionHandle **out_handle);

/**
 * # Safety
 * `h` must come from this library and not be freed twice. Null is ignored.
 */
void cm_function_free(struct CmFunctionHandle *h);

/**
 * g(z) for real z ≥ 0.
 *
 * # Safety
 * Pointers must be valid.
 */
enum CmStatus cm_function_eval(const struct CmFunctionHandle *h, double z, double *value);

/**
 * g(re + i·im) for re ≥ 0.
 *
 * # Safety
 * Pointers must be valid.
 */
enum CmStatus cm_function_eval_complex(const struct CmFunctionHandle *h,
                                       double re,
                                       double im,
                                       double *out_re,
                                       double *out_im);

/**
 * k-th moment of the representing measure, k ≤ 4; +∞ when infinite.
 *
 * # Safety
 * Pointers must be valid.
 */
enum CmStatus cm_function_moment(const struct CmFunctionHandle *h, uint32_t k, double *value);

/**
 * Class of the function: -1 bounded only, otherwise k for B_k.
 *
 * # Safety
 * Pointers must be valid.
 */
enum CmStatus cm_function_class(const struct CmFunctionHandle *h, int32_t *class_);

/**
 * New handle for gₙ(z) = gⁿ(z/n).
 *
 * # Safety
 * Pointers must be valid.
 */
enum CmStatus cm_function_power_scale(const struct CmFunctionHandle *h,
                                      uint32_t n,
                                      struct CmFunctionHandle **out_handle);

/**
 * L, a, b, c_α, d₀, d₁ of the function. Entries that do not exist for it are NaN.
 *
 * # Safety
 * Pointers must be valid.
 */
enum CmStatus cm_functional_values(const struct CmFunctionHandle *h,
                                   double alpha,
                                   struct CmFunctionalValues *values);

/**
 * Exact c_α of the n-th Euler power.
 *
 * # Safety
 * `value` must be valid.
 */
enum CmStatus cm_euler_c_alpha_exact(uint32_t n, double alpha, double *value);

/**
 * # Safety
 * `value` must be valid.
 */
enum CmStatus cm_digamma(double x, double *value);

/**
 * # Safety
 * `value` must be valid.
 */
enum CmStatus cm_log_gamma(double x, double *value);

/**
 * Parse a gallery generator such as "laplacian:d=64" or "diag_imag:k=32,max=100".
 *
 * # Safety
 * `spec` must be NUL-terminated and `out_handle` valid.
 */
enum CmStatus cm_generator_new(const char *spec, struct CmGeneratorHandle **out_handle);

/**
 * # Safety
 * `h` must come from this library and not be freed twice. Null is ignored.
 */
void cm_generator_free(struct CmGeneratorHandle *h);

/**
 * Dimension of the generator, 0 for null.
 *
 * # Safety
 * `h` must be null or valid.
 */
uintptr_t cm_generator_dim(const struct CmGeneratorHandle *h);

/**
 * y = gₙ(tA)x for a scheme spec ("euler", "kendall", "yosida", ...) with
 * x and y given as split real and imaginary arrays of length `len` = dim.
 *
 * # Safety
 * All arrays must hold `len` values.
 */
enum CmStatus cm_scheme_apply(const char *scheme,
                              const struct CmGeneratorHandle *generator,
                              double t,
                              uint32_t n,
                              const double *x_re,
                              const double *x_im,
                              uintptr_t len,
                              double *y_re,
                              double *y_im);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CMAPPROX_H */
