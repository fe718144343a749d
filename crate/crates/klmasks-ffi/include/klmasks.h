#ifndef KLMASKS_H
#define KLMASKS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KlmDiagonalVariant {
  KLM_DIAGONAL_VARIANT_NE_SW = 0,
  KLM_DIAGONAL_VARIANT_NW_SE = 1,
} KlmDiagonalVariant;

typedef enum KlmStatus {
  KLM_STATUS_OK = 0,
  KLM_STATUS_NULL_POINTER = 1,
  KLM_STATUS_INVALID_UTF8 = 2,
  KLM_STATUS_PARSE = 3,
  KLM_STATUS_INVALID_ARGUMENT = 4,
  KLM_STATUS_PRECONDITION = 5,
  KLM_STATUS_GUARD_EXCEEDED = 6,
  KLM_STATUS_BUFFER_TOO_SMALL = 7,
  KLM_STATUS_INTERNAL = 8,
} KlmStatus;

typedef enum KlmStepVariant {
  KLM_STEP_VARIANT_UP_STEPS = 0,
  KLM_STEP_VARIANT_DOWN_STEPS = 1,
} KlmStepVariant;

// Opaque handle to a set of masks on a fixed reduced word.
typedef struct KlmMaskSet KlmMaskSet;

// Opaque permutation handle.
typedef struct KlmPerm KlmPerm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null. Owned by the library;
// valid until the next failing call on the same thread.
const char *klm_last_error(void);

// # Safety
// `s` must come from this library and not have been freed.
void klm_string_free(char *s);

// Parses one-line notation such as `"4231"` or `"1,3,2"`.
//
// # Safety
// `text` must be a nul-terminated string and `out` a valid pointer.
enum KlmStatus klm_perm_parse(const char *text, struct KlmPerm **out);

// # Safety
// `p` must come from [`klm_perm_parse`] and not have been freed.
void klm_perm_free(struct KlmPerm *p);

// # Safety
// `p` must be a live handle.
uintptr_t klm_perm_rank(const struct KlmPerm *p);

// # Safety
// `p` must be a live handle.
uintptr_t klm_perm_length(const struct KlmPerm *p);

// # Safety
// `p` must be a live handle.
bool klm_perm_is_cograssmannian(const struct KlmPerm *p);

// Writes the coefficients of `P_{x,w}` (constant term first) into `coeffs`.
// `len` receives the number of coefficients; when it exceeds `cap` nothing is
// written and `KLM_STATUS_BUFFER_TOO_SMALL` is returned.
//
// # Safety
// `x`, `w` must be live handles, `coeffs` must have room for `cap` values
// (it may be null when `cap` is 0) and `len` must be valid.
enum KlmStatus klm_kl_polynomial(const struct KlmPerm *x,
                                 const struct KlmPerm *w,
                                 int64_t *coeffs,
                                 uintptr_t cap,
                                 uintptr_t *len);

// The mask set of the first construction for a cograssmannian `w`.
//
// # Safety
// `w` must be a live handle and `out` a valid pointer.
enum KlmStatus klm_construction1_new(const struct KlmPerm *w,
                                     enum KlmStepVariant variant,
                                     struct KlmMaskSet **out);

// The mask set of the second construction. A negative `ordering` selects the
// first neat ordering; otherwise it indexes all orderings lexicographically.
//
// # Safety
// `w` must be a live handle and `out` a valid pointer.
enum KlmStatus klm_construction2_new(const struct KlmPerm *w,
                                     int64_t ordering,
                                     enum KlmDiagonalVariant variant,
                                     struct KlmMaskSet **out);

// # Safety
// `s` must come from a constructor of this library and not have been freed.
void klm_mask_set_free(struct KlmMaskSet *s);

// # Safety
// `s` must be a live handle.
uintptr_t klm_mask_set_len(const struct KlmMaskSet *s);

// Length of the underlying word, which is the length of every mask.
//
// # Safety
// `s` must be a live handle.
uintptr_t klm_mask_set_word_len(const struct KlmMaskSet *s);

// Copies mask `index` as 0/1 bytes into `bits`, which must hold the word length.
//
// # Safety
// `s` must be a live handle and `bits` must have room for `cap` bytes.
enum KlmStatus klm_mask_set_get(const struct KlmMaskSet *s,
                                uintptr_t index,
                                uint8_t *bits,
                                uintptr_t cap);

// Deodhar's conditions and the comparison with Kazhdan-Lusztig polynomials.
// `passed` is true when the set is bounded, admissible and reproduces every
// `P_{x,w}`.
//
// # Safety
// `s` must be a live handle and `passed` a valid pointer.
enum KlmStatus klm_mask_set_deodhar(const struct KlmMaskSet *s, bool *passed);

// The set as JSON: `{"n", "word", "masks"}` with masks as bit strings.
//
// # Safety
// `s` must be a live handle and `json` a valid pointer. The string must be
// released with [`klm_string_free`].
enum KlmStatus klm_mask_set_to_json(const struct KlmMaskSet *s, char **json);

// Runs a verification suite by name (`"all"`, `"paper-examples"`, ...) and
// returns the JSON report. `passed` tells whether every check passed.
//
// # Safety
// `suite` must be a nul-terminated string; `json` and `passed` must be valid.
enum KlmStatus klm_verify(const char *suite, uintptr_t n_max, char **json, bool *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KLMASKS_H */
