#ifndef SYMDET_H
#define SYMDET_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Bumped on any incompatible change to the exported functions or types.
#define SYMDET_ABI_VERSION 1

typedef enum SymdetStatus {
  SYMDET_STATUS_OK = 0,
  SYMDET_STATUS_NULL_POINTER = 1,
  SYMDET_STATUS_INVALID_UTF8 = 2,
  SYMDET_STATUS_SYNTAX_ERROR = 3,
  SYMDET_STATUS_VARIABLE_OUT_OF_RANGE = 4,
  SYMDET_STATUS_DIVISION_NOT_EXACT = 5,
  SYMDET_STATUS_INDEX_OUT_OF_RANGE = 6,
  SYMDET_STATUS_DIMENSION_MISMATCH = 7,
  SYMDET_STATUS_INVALID_RANGE = 8,
  SYMDET_STATUS_SIZE_GUARD_EXCEEDED = 9,
  SYMDET_STATUS_MATRIX_FORMAT = 10,
  SYMDET_STATUS_PANIC = 11,
  SYMDET_STATUS_OTHER = 12,
} SymdetStatus;

typedef enum SymdetAlgorithm {
  SYMDET_ALGORITHM_NAIVE = 0,
  SYMDET_ALGORITHM_MINOR = 1,
  SYMDET_ALGORITHM_BAREISS = 2,
} SymdetAlgorithm;

typedef enum SymdetRowKey {
  SYMDET_ROW_KEY_SUM_TERMS = 0,
  SYMDET_ROW_KEY_SUM_SQUARED_TERMS = 1,
  SYMDET_ROW_KEY_NONZERO_COUNT = 2,
  SYMDET_ROW_KEY_DISTINCT_MONOMIALS = 3,
} SymdetRowKey;

typedef enum SymdetDirection {
  SYMDET_DIRECTION_ASCENDING = 0,
  SYMDET_DIRECTION_DESCENDING = 1,
} SymdetDirection;

// Opaque matrix handle.
typedef struct SymdetMatrix SymdetMatrix;

// Opaque cost meter handle.
typedef struct SymdetMeter SymdetMeter;

// Opaque polynomial handle.
typedef struct SymdetPoly SymdetPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

uint32_t symdet_abi_version(void);

// Message for the most recent failed call on this thread; empty after a
// successful call. Valid until the next call into the library on this thread.
const char *symdet_last_error_message(void);

void symdet_string_free(char *s);

// Parses a polynomial whose variable indices are at most `s`.
enum SymdetStatus symdet_poly_parse(const char *text, size_t s, struct SymdetPoly **out);

void symdet_poly_free(struct SymdetPoly *p);

// Canonical text of `p`, or null if `p` is null. Free with `symdet_string_free`.
char *symdet_poly_to_string(const struct SymdetPoly *p);

size_t symdet_poly_nterms(const struct SymdetPoly *p);

bool symdet_poly_equal(const struct SymdetPoly *a, const struct SymdetPoly *b);

// Parses the matrix file format (header `n s`, then `;`-separated rows).
enum SymdetStatus symdet_matrix_parse(const char *text, struct SymdetMatrix **out);

void symdet_matrix_free(struct SymdetMatrix *m);

// The matrix in file format. Free with `symdet_string_free`.
char *symdet_matrix_to_string(const struct SymdetMatrix *m);

size_t symdet_matrix_dim(const struct SymdetMatrix *m);

size_t symdet_matrix_num_vars(const struct SymdetMatrix *m);

// Copy of entry `(i, j)` (0-based).
enum SymdetStatus symdet_matrix_entry(const struct SymdetMatrix *m,
                                      size_t i,
                                      size_t j,
                                      struct SymdetPoly **out);

enum SymdetStatus symdet_matrix_gen_one_homogeneous(size_t n,
                                                    size_t s,
                                                    int64_t coeff_lo,
                                                    int64_t coeff_hi,
                                                    uint64_t seed,
                                                    struct SymdetMatrix **out);

enum SymdetStatus symdet_matrix_gen_sparse_linear(size_t n,
                                                  size_t s,
                                                  double zero_prob,
                                                  size_t max_terms,
                                                  int64_t coeff_lo,
                                                  int64_t coeff_hi,
                                                  uint64_t seed,
                                                  struct SymdetMatrix **out);

struct SymdetMeter *symdet_meter_new(void);

void symdet_meter_free(struct SymdetMeter *m);

void symdet_meter_reset(struct SymdetMeter *m);

uint64_t symdet_meter_poly_mults(const struct SymdetMeter *m);

uint64_t symdet_meter_poly_divs(const struct SymdetMeter *m);

// Modeled integer operations as a decimal string (the count is unbounded).
// Free with `symdet_string_free`.
char *symdet_meter_modeled_int_ops(const struct SymdetMeter *m);

// Determinant of `m`. `meter` may be null; otherwise it accumulates.
enum SymdetStatus symdet_determinant(const struct SymdetMatrix *m,
                                     enum SymdetAlgorithm algorithm,
                                     struct SymdetMeter *meter,
                                     struct SymdetPoly **out);

// Minor expansion after sorting rows by `key` in `direction`; the result is
// sign-corrected to equal the determinant of `m`.
enum SymdetStatus symdet_sorted_minor_expansion(const struct SymdetMatrix *m,
                                                enum SymdetRowKey key,
                                                enum SymdetDirection direction,
                                                struct SymdetMeter *meter,
                                                struct SymdetPoly **out);

// Writes the stable sort permutation into `perm_out` (length `symdet_matrix_dim`)
// and its sign (+1 or -1) into `sign_out`.
enum SymdetStatus symdet_sort_permutation(const struct SymdetMatrix *m,
                                          enum SymdetRowKey key,
                                          enum SymdetDirection direction,
                                          size_t *perm_out,
                                          size_t perm_len,
                                          int32_t *sign_out);

// Closed-form minor-expansion cost as a decimal string; null if `n` or `s` is 0.
char *symdet_cost_cm(uint32_t n, uint32_t s);

// Closed-form elimination cost as a decimal string; null if `n` or `s` is 0.
char *symdet_cost_cg(uint32_t n, uint32_t s);

// Exact modeled minor-expansion cost of `m` as a decimal string.
enum SymdetStatus symdet_cost_cm_exact(const struct SymdetMatrix *m, char **out);

// Smallest `n <= n_cap` where the minor-expansion cost model exceeds
// elimination's, or 0 if there is none.
uint32_t symdet_crossover_n(uint32_t s, uint32_t n_cap);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SYMDET_H */
