#ifndef INVSEMI_H
#define INVSEMI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define INVSEMI_OK 0

#define INVSEMI_ERR_NULL 1

#define INVSEMI_ERR_PARSE 2

#define INVSEMI_ERR_STRUCTURE 3

#define INVSEMI_ERR_CAP 4

/**
 * An opaque finite semigroup multiplication table.
 */
typedef struct InvsemiTable InvsemiTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last failure message for this thread; empty when no failure occurred.
 * The pointer stays valid until the next library call on this thread.
 */
const char *invsemi_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be a pointer previously returned by this library and not yet
 * freed.
 */
void invsemi_string_free(char *s);

/**
 * Parses a plain-text multiplication table (`n` rows of `n` entries).
 * On success stores a new table in `out` and returns 0.
 *
 * # Safety
 * `text` must be a valid nul-terminated string and `out` a valid pointer.
 */
int invsemi_table_parse(const char *text, struct InvsemiTable **out);

/**
 * Builds a table from `size * size` row-major entries.
 *
 * # Safety
 * `entries` must point to `size * size` readable values and `out` must be
 * a valid pointer.
 */
int invsemi_table_from_entries(uintptr_t size, const uintptr_t *entries, struct InvsemiTable **out);

/**
 * Releases a table. Null is ignored.
 *
 * # Safety
 * `t` must be a table returned by this library and not yet freed.
 */
void invsemi_table_free(struct InvsemiTable *t);

/**
 * Number of elements, or 0 for null.
 *
 * # Safety
 * `t` must be null or a live table from this library.
 */
uintptr_t invsemi_table_size(const struct InvsemiTable *t);

/**
 * The product `a * b`, or -1 when an index is out of range or the table
 * is null.
 *
 * # Safety
 * `t` must be null or a live table from this library.
 */
int64_t invsemi_table_product(const struct InvsemiTable *t, uintptr_t a, uintptr_t b);

/**
 * The plain-text rendering of the table (parseable back). Null on error.
 *
 * # Safety
 * `t` must be null or a live table from this library.
 */
char *invsemi_table_text(const struct InvsemiTable *t);

/**
 * Structural classification of an inverse semigroup as a JSON report.
 * Null when the table is not an inverse semigroup.
 *
 * # Safety
 * `t` must be null or a live table from this library.
 */
char *invsemi_analyze_json(const struct InvsemiTable *t);

/**
 * Homogeneity report as JSON. `inverse_mode` nonzero checks isomorphisms
 * between inverse subsemigroups, zero between plain subsemigroups; `cap`
 * of 0 uses the default size cap. Null on failure.
 *
 * # Safety
 * `t` must be null or a live table from this library.
 */
char *invsemi_homog_json(const struct InvsemiTable *t, int inverse_mode, uintptr_t cap);

/**
 * Counts the automorphisms of the table. `cap` of 0 uses the default.
 * Returns an error code; the count is stored in `out`.
 *
 * # Safety
 * `t` must be null or a live table; `out` must be a valid pointer.
 */
int invsemi_aut_count(const struct InvsemiTable *t, uintptr_t cap, uint64_t *out);

/**
 * Flattens a system-of-groups JSON document to its multiplication table.
 * On success stores a new table in `out` and returns 0.
 *
 * # Safety
 * `json` must be a valid nul-terminated string and `out` a valid pointer.
 */
int invsemi_system_flatten(const char *json, struct InvsemiTable **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* INVSEMI_H */
