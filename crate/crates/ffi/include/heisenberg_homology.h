#ifndef HEISENBERG_HOMOLOGY_H
#define HEISENBERG_HOMOLOGY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which coefficient oracle a complex is built with.
 */
typedef enum {
  HH_ORACLE_TRIVIAL = 0,
  HH_ORACLE_STANDARD = 1,
} hh_oracle;

/**
 * Result codes of every fallible call.
 */
typedef enum {
  HH_STATUS_OK = 0,
  HH_STATUS_NULL_POINTER = 1,
  HH_STATUS_INVALID_ARGUMENT = 2,
  HH_STATUS_PARSE = 3,
  HH_STATUS_INVALID_GRAPH = 4,
  HH_STATUS_COMPUTATION = 5,
  HH_STATUS_UNSUPPORTED = 6,
  HH_STATUS_BUFFER_TOO_SMALL = 7,
  HH_STATUS_PANIC = 8,
} hh_status;

/**
 * Twists of the one-holed torus.
 */
typedef enum {
  HH_TWIST_TA = 0,
  HH_TWIST_TB = 1,
  HH_TWIST_TA_INVERSE = 2,
  HH_TWIST_TB_INVERSE = 3,
} hh_twist;

/**
 * A built Borel–Moore chain complex.
 */
typedef struct hh_complex hh_complex;

/**
 * A ribbon graph with its (possibly empty) distinguished subgraph.
 */
typedef struct hh_graph hh_graph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *hh_last_error(void);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string produced by this library, not yet freed.
 */
void hh_string_free(char *s);

/**
 * Parse a graph in the text interchange format.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
hh_status hh_graph_parse(const char *text, hh_graph **out);

/**
 * The standard relative model of genus `g` with `m` boundary components.
 *
 * # Safety
 * `out` must be writable.
 */
hh_status hh_graph_standard_model(size_t g, size_t m, hh_graph **out);

/**
 * # Safety
 * `graph` must be null or a handle from this library, not yet freed.
 */
void hh_graph_free(hh_graph *graph);

/**
 * Genus and number of boundary components of the thickened surface.
 *
 * # Safety
 * `graph` must be a live handle; out-pointers must be writable.
 */
hh_status hh_graph_invariants(const hh_graph *graph, size_t *genus, size_t *boundary);

/**
 * Build the complex of `n` points, relative to the distinguished subgraph
 * when `relative` is nonzero.
 *
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
hh_status hh_complex_build(const hh_graph *graph,
                           size_t n,
                           bool relative,
                           hh_oracle oracle,
                           hh_complex **out);

/**
 * # Safety
 * `complex` must be null or a handle from this library, not yet freed.
 */
void hh_complex_free(hh_complex *complex);

/**
 * Number of cells in `degree` (zero above the top degree).
 *
 * # Safety
 * `complex` must be a live handle; `out` must be writable.
 */
hh_status hh_complex_cell_count(const hh_complex *complex, size_t degree, size_t *out);

/**
 * Whether all composites of consecutive boundary maps vanish.
 *
 * # Safety
 * `complex` must be a live handle; `out` must be writable.
 */
hh_status hh_complex_is_chain_complex(const hh_complex *complex, bool *out);

/**
 * Ranks of homology in degrees `0..=n` under the specialisation `coeff`
 * (`"trivial"`, `"linearized"` or `"scalar:u=-1,a1=2,..."`). `ranks` must
 * hold `len ≥ n + 1` entries; the number written goes to `written`.
 *
 * # Safety
 * `complex` must be a live handle, `coeff` a nul-terminated string and
 * `ranks` valid for `len` writes.
 */
hh_status hh_homology_ranks(const hh_complex *complex,
                            const char *coeff,
                            size_t *ranks,
                            size_t len,
                            size_t *written);

/**
 * φ of a braid word (e.g. `"a1 s1 b1"`) for `n` points on the surface of
 * genus `g` with `m` boundary components, in normal form.
 *
 * # Safety
 * `word` must be a nul-terminated string; `out` must be writable.
 */
hh_status hh_phi(size_t g, size_t m, size_t n, const char *word, char **out);

/**
 * Rendered 3×3 matrix of a twist: rows on lines, entries separated by `&`.
 *
 * # Safety
 * `out` must be writable.
 */
hh_status hh_twist_matrix(hh_twist twist, char **out);

/**
 * Whether the braid relation and the boundary-twist commutations hold.
 *
 * # Safety
 * `out` must be writable.
 */
hh_status hh_verify_twist_identities(bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HEISENBERG_HOMOLOGY_H */
