#ifndef DBSAMPLER_H
#define DBSAMPLER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every entry point.
 */
typedef enum DbsStatus {
  DBS_STATUS_OK = 0,
  DBS_STATUS_NULL_POINTER = 1,
  /**
   * Invalid input (domain, configuration, support, shape).
   */
  DBS_STATUS_INVALID = 2,
  /**
   * Numerical failure (bracketing, convergence, series radius).
   */
  DBS_STATUS_NUMERICAL = 3,
  DBS_STATUS_PANIC = 4,
} DbsStatus;

/**
 * Opaque operator description.
 */
typedef struct DbsSetup DbsSetup;

/**
 * Opaque computed spectrum.
 */
typedef struct DbsSpectrum DbsSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len - 1` bytes) and returns the full message length.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t dbs_last_error(char *buf, size_t len);

/**
 * `J_nu(x)` for `nu >= 0`, `x >= 0`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum DbsStatus dbs_bessel_j(double nu, double x, double *out);

/**
 * Free regular solution `xi_nu(z, x)`.
 *
 * # Safety
 * `out_re` and `out_im` must be null or valid for writes.
 */
enum DbsStatus dbs_xi_free(double nu,
                           double z_re,
                           double z_im,
                           double x,
                           double *out_re,
                           double *out_im);

/**
 * Creates a setup. `potential` uses the config syntax (`zero`,
 * `const:c`, `power:c:beta:r`, `bump:c:center:width`, `table:path`);
 * null means `zero`.
 *
 * # Safety
 * `potential` must be null or a NUL-terminated string; `out` must be valid
 * for writes.
 */
enum DbsStatus dbs_setup_new(double nu,
                             double s,
                             double gamma,
                             const char *potential,
                             struct DbsSetup **out);

/**
 * # Safety
 * `setup` must be null or a handle from [`dbs_setup_new`] not yet freed.
 */
void dbs_setup_free(struct DbsSetup *setup);

/**
 * Reproducing kernel `K_s(z, w) = int_0^s xi(z, x) conj(xi(w, x)) dx`.
 *
 * # Safety
 * `setup` must be a live handle; `out_re`, `out_im` valid for writes.
 */
enum DbsStatus dbs_kernel_inner(const struct DbsSetup *setup,
                                double z_re,
                                double z_im,
                                double w_re,
                                double w_im,
                                double *out_re,
                                double *out_im);

/**
 * First `n` eigenvalues and norming constants of the setup's operator.
 *
 * # Safety
 * `setup` must be a live handle; `out` valid for writes.
 */
enum DbsStatus dbs_spectrum_compute(const struct DbsSetup *setup,
                                    size_t n,
                                    struct DbsSpectrum **out);

/**
 * Number of eigenvalues held; 0 for a null handle.
 *
 * # Safety
 * `spectrum` must be null or a live handle.
 */
size_t dbs_spectrum_len(const struct DbsSpectrum *spectrum);

/**
 * Entry `i` (0-based): the operator index `n` (0 or 1 based on the angle),
 * `lambda_n` and `K(lambda_n, lambda_n)`. Any output pointer may be null.
 *
 * # Safety
 * `spectrum` must be a live handle; non-null outputs valid for writes.
 */
enum DbsStatus dbs_spectrum_get(const struct DbsSpectrum *spectrum,
                                size_t i,
                                size_t *index,
                                double *lambda,
                                double *norming);

/**
 * # Safety
 * `spectrum` must be null or a handle from [`dbs_spectrum_compute`] not yet freed.
 */
void dbs_spectrum_free(struct DbsSpectrum *spectrum);

/**
 * Relative residual of integration-by-parts identity `which` (1, 2 or 3)
 * for the setup's order and potential on `(0, b]`.
 *
 * # Safety
 * `setup` must be a live handle; `out` valid for writes.
 */
enum DbsStatus dbs_ibp_identity_residual(const struct DbsSetup *setup,
                                         uint32_t which,
                                         double a,
                                         double b,
                                         double t,
                                         double z_re,
                                         double z_im,
                                         double *out);

/**
 * Library version, static NUL-terminated string.
 */
const char *dbs_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DBSAMPLER_H */
