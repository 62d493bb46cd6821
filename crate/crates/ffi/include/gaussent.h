#ifndef GAUSSENT_H
#define GAUSSENT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#define GE_LOG_BASE_2 0

#define GE_LOG_BASE_E 1

/**
 * Result codes. Zero is success.
 */
typedef enum GeStatus {
  GE_STATUS_OK = 0,
  GE_STATUS_NULL_POINTER = 1,
  GE_STATUS_INVALID_ARGUMENT = 2,
  GE_STATUS_NON_PHYSICAL = 3,
  GE_STATUS_NUMERICAL = 4,
  GE_STATUS_UNSTABLE = 5,
  GE_STATUS_BUFFER_TOO_SMALL = 6,
  GE_STATUS_PANIC = 7,
  GE_STATUS_OTHER = 8,
} GeStatus;

/**
 * Opaque Gaussian state given by its pair contractions.
 */
typedef struct GeContraction GeContraction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, static storage.
 */
const char *ge_version(void);

/**
 * Message of the last failure on this thread; empty if none. Valid until
 * the next failing call on the same thread.
 */
const char *ge_last_error_message(void);

/**
 * Ground state of the isotropic nearest-neighbour lattice model with
 * uniform local energy `lambda`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum GeStatus ge_lattice_ground_state(size_t nx,
                                      size_t ny,
                                      bool cyclic,
                                      double delta_plus,
                                      double delta_minus,
                                      double lambda,
                                      struct GeContraction **out);

/**
 * Ground state of n uniformly coupled modes.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum GeStatus ge_fully_connected_ground_state(size_t n,
                                              double lambda,
                                              double delta_plus,
                                              double delta_minus,
                                              struct GeContraction **out);

/**
 * Lowest stable local energy of the isotropic lattice model.
 *
 * # Safety
 * `out` must point to writable storage for one double.
 */
enum GeStatus ge_lattice_critical_lambda(size_t nx,
                                         size_t ny,
                                         bool cyclic,
                                         double delta_plus,
                                         double delta_minus,
                                         double *out);

/**
 * State from row-major n x n arrays. The imaginary parts may be null.
 *
 * # Safety
 * Each non-null array must hold n * n doubles; `out` must be writable.
 */
enum GeStatus ge_contraction_new(size_t n,
                                 const double *f_plus_re,
                                 const double *f_plus_im,
                                 const double *f_minus_re,
                                 const double *f_minus_im,
                                 struct GeContraction **out);

/**
 * # Safety
 * `d` must be null or a handle from this library not yet freed.
 */
void ge_contraction_free(struct GeContraction *d);

/**
 * Number of modes, 0 for a null handle.
 *
 * # Safety
 * `d` must be null or a live handle.
 */
size_t ge_contraction_n_modes(const struct GeContraction *d);

/**
 * Symplectic eigenvalues of the state reduced to `modes`, ascending.
 * `out_len` always receives the required length.
 *
 * # Safety
 * `modes` holds `n_modes` indices; `buf` holds `cap` doubles.
 */
enum GeStatus ge_symplectic_eigenvalues(const struct GeContraction *d,
                                        const size_t *modes,
                                        size_t n_modes,
                                        double *buf,
                                        size_t cap,
                                        size_t *out_len);

/**
 * Eigenvalues of the partial transpose on `b` of the (b, c) state, ascending.
 *
 * # Safety
 * `b` and `c` hold `nb` and `nc` indices; `buf` holds `cap` doubles.
 */
enum GeStatus ge_partial_transpose_eigenvalues(const struct GeContraction *d,
                                               const size_t *b,
                                               size_t nb,
                                               const size_t *c,
                                               size_t nc,
                                               double *buf,
                                               size_t cap,
                                               size_t *out_len);

/**
 * Entanglement entropy of `modes` with the rest.
 *
 * # Safety
 * `modes` holds `n_modes` indices; `out` is writable.
 */
enum GeStatus ge_entropy(const struct GeContraction *d,
                         const size_t *modes,
                         size_t n_modes,
                         uint32_t log_base,
                         double *out);

/**
 * Logarithmic negativity between `b` and `c`. `diverging` (nullable) is set
 * when an eigenvalue sat at the lower bound.
 *
 * # Safety
 * `b` and `c` hold `nb` and `nc` indices; `out` is writable.
 */
enum GeStatus ge_log_negativity(const struct GeContraction *d,
                                const size_t *b,
                                size_t nb,
                                const size_t *c,
                                size_t nc,
                                uint32_t log_base,
                                double *out,
                                bool *diverging);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GAUSSENT_H */
