#ifndef TFB_H
#define TFB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum TfbStatus {
  TFB_STATUS_OK = 0,
  TFB_STATUS_NULL_POINTER = 1,
  TFB_STATUS_INVALID_UTF8 = 2,
  /**
   * Frame, document or mass-function axiom violation.
   */
  TFB_STATUS_INVALID_INPUT = 3,
  TFB_STATUS_INVALID_ORDER = 4,
  TFB_STATUS_OVERFLOW = 5,
  TFB_STATUS_TREE_TOO_LARGE = 6,
  TFB_STATUS_BUFFER_TOO_SMALL = 7,
  TFB_STATUS_NOT_CONVERGED = 8,
  TFB_STATUS_PANIC = 99,
} TfbStatus;

/**
 * Opaque mass-function handle.
 */
typedef struct TfbMass TfbMass;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length in bytes, or 0 when
 * no error has been recorded.
 */
size_t tfb_last_error(char *buf, size_t len);

/**
 * Parse a BPA document into a new handle.
 */
enum TfbStatus tfb_mass_from_json(const char *json, struct TfbMass **out);

/**
 * Vacuous BPA `m(Θ) = 1` on a frame with the given labels.
 */
enum TfbStatus tfb_mass_vacuous(const char *const *labels, size_t n, struct TfbMass **out);

/**
 * Release a handle. Null is ignored.
 */
void tfb_mass_free(struct TfbMass *m);

/**
 * Number of frame elements, or 0 for a null handle.
 */
size_t tfb_mass_frame_size(const struct TfbMass *m);

/**
 * Canonical JSON of a handle; free the string with [`tfb_string_free`].
 */
enum TfbStatus tfb_mass_to_json(const struct TfbMass *m, char **out);

void tfb_string_free(char *s);

/**
 * Shannon entropy (bits) of `len` probabilities.
 */
enum TfbStatus tfb_shannon(const double *p, size_t len, double *out);

enum TfbStatus tfb_deng_entropy(const struct TfbMass *m, double *out);

enum TfbStatus tfb_fb_entropy(const struct TfbMass *m, double *out);

/**
 * k-order TFB entropy; `k = 0` yields `InvalidOrder`.
 */
enum TfbStatus tfb_tfb_entropy(const struct TfbMass *m, uint64_t k, double *out);

/**
 * TFB entropy of the vacuous BPA on `n` elements.
 */
enum TfbStatus tfb_tfb_vacuous(uint32_t n, uint64_t k, double *out);

/**
 * Entropy read off the explicit k-round split tree.
 */
enum TfbStatus tfb_split_tree_entropy(const struct TfbMass *m, uint64_t k, double *out);

/**
 * `(k+1)^a − k^a`.
 */
enum TfbStatus tfb_leaf_count(uint32_t a, uint64_t k, uint64_t *out);

/**
 * Information volume `log2((k+2)^n − (k+1)^n)`.
 */
enum TfbStatus tfb_hoivmf_value(uint32_t n, uint64_t k, double *out);

/**
 * BPA attaining the k-order information volume on the given labels.
 */
enum TfbStatus tfb_max_tfb_bpa(const char *const *labels,
                               size_t n,
                               uint64_t k,
                               struct TfbMass **out);

/**
 * Iterated Deng information volume. Values go to `values[0..*len]`.
 *
 * Returns `BufferTooSmall` (with `*len` set to the required size) when
 * `capacity` is short, and `NotConverged` when `max_iter` was reached first;
 * in that case the values are still written.
 */
enum TfbStatus tfb_deng_volume(const struct TfbMass *m,
                               double epsilon,
                               size_t max_iter,
                               double *values,
                               size_t capacity,
                               size_t *len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TFB_H */
