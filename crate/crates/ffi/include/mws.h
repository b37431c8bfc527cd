#ifndef MWS_H
#define MWS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum MwsStatus {
  MWS_STATUS_OK = 0,
  MWS_STATUS_NULL_POINTER = 1,
  MWS_STATUS_INVALID_ARGUMENT = 2,
  MWS_STATUS_NOT_PRIME_POWER = 3,
  MWS_STATUS_TOO_LARGE = 4,
  MWS_STATUS_RANK_DEFICIENT = 5,
  MWS_STATUS_NOT_QUASI_MINIMAL = 6,
  MWS_STATUS_PARSE = 7,
  MWS_STATUS_INTERNAL = 8,
} MwsStatus;

/**
 * A linear code with column multiplicities.
 */
typedef struct MwsCode MwsCode;

/**
 * A finite field GF(q).
 */
typedef struct MwsField MwsField;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failed call on this thread, or NULL. The
 * pointer stays valid until the next `mws_*` call on the same thread.
 */
const char *mws_last_error_message(void);

/**
 * Static name of a status code.
 */
const char *mws_status_name(enum MwsStatus status);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void mws_string_free(char *s);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum MwsStatus mws_field_new(uint64_t q, struct MwsField **out);

/**
 * # Safety
 * `field` must be NULL or a handle from [`mws_field_new`], not yet freed.
 */
void mws_field_free(struct MwsField *field);

/**
 * Field order q, or 0 for a NULL handle.
 *
 * # Safety
 * `field` must be NULL or a live handle.
 */
uint32_t mws_field_order(const struct MwsField *field);

/**
 * # Safety
 * `field` must be a live handle and `out` valid for writes.
 */
enum MwsStatus mws_field_info_json(const struct MwsField *field, char **out);

/**
 * Parses the text matrix format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` valid for writes.
 */
enum MwsStatus mws_code_from_matrix_text(const char *text, struct MwsCode **out);

/**
 * Builds a code from `k * n` row-major element indices.
 *
 * # Safety
 * `entries` must point to `k * n` readable values and `out` be valid for writes.
 */
enum MwsStatus mws_code_from_indices(const struct MwsField *field,
                                     size_t k,
                                     size_t n,
                                     const uint32_t *entries,
                                     struct MwsCode **out);

/**
 * # Safety
 * `field` must be a live handle and `out` valid for writes.
 */
enum MwsStatus mws_code_simplex(const struct MwsField *field, size_t k, struct MwsCode **out);

/**
 * # Safety
 * `field` must be a live handle and `out` valid for writes.
 */
enum MwsStatus mws_code_identity(const struct MwsField *field, size_t k, struct MwsCode **out);

/**
 * Replaces the column multiplicities; `count` must equal the base length.
 *
 * # Safety
 * `multiplicities` must point to `count` readable values; `code` must be
 * live and `out` valid for writes.
 */
enum MwsStatus mws_code_with_multiplicities(const struct MwsCode *code,
                                            const uint64_t *multiplicities,
                                            size_t count,
                                            struct MwsCode **out);

/**
 * Power-of-two embedding of a quasi-minimal code. Fails with
 * `NotQuasiMinimal` if the input is not QM, so the result is always MWS.
 *
 * # Safety
 * `code` must be live and `out` valid for writes.
 */
enum MwsStatus mws_code_embed(const struct MwsCode *code, struct MwsCode **out);

/**
 * # Safety
 * `code` must be NULL or a live handle.
 */
void mws_code_free(struct MwsCode *code);

/**
 * # Safety
 * `code` must be NULL or a live handle.
 */
size_t mws_code_dimension(const struct MwsCode *code);

/**
 * # Safety
 * `code` must be NULL or a live handle.
 */
size_t mws_code_base_length(const struct MwsCode *code);

/**
 * # Safety
 * `code` must be live and `out` valid for writes.
 */
enum MwsStatus mws_code_is_qm(const struct MwsCode *code, bool *out);

/**
 * # Safety
 * `code` must be live and `out` valid for writes.
 */
enum MwsStatus mws_code_is_mws(const struct MwsCode *code, bool *out);

/**
 * Spectrum report as a JSON object.
 *
 * # Safety
 * `code` must be live and `out` valid for writes.
 */
enum MwsStatus mws_code_spectrum_json(const struct MwsCode *code, char **out);

/**
 * # Safety
 * `code` must be live and `out` valid for writes.
 */
enum MwsStatus mws_code_matrix_text(const struct MwsCode *code, char **out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum MwsStatus mws_lambda_q(uint64_t q, double *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum MwsStatus mws_mu_q(uint64_t q, double *out);

/**
 * Length lower bound for MWS codes, as a decimal string.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum MwsStatus mws_lower_bound(uint64_t q, uint32_t k, char **out);

/**
 * Smallest length meeting the averaging condition, as a decimal string.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum MwsStatus mws_eqbound_min_n(uint64_t q, uint32_t k, char **out);

/**
 * Bounds report for one `(q, k)` cell as a JSON object.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum MwsStatus mws_bounds_json(uint64_t q, uint32_t k, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MWS_H */
