#ifndef GTM_GTM_H
#define GTM_GTM_H

/* C interface to the trace-map spectral toolkit.
 *
 * Conventions:
 *   - Every function that can fail returns a gtm_status; GTM_OK is 0.
 *     After a failure, gtm_last_error() describes what went wrong (the
 *     string is thread-local and valid until the next failing call on
 *     the same thread).
 *   - High-precision numbers cross the boundary as decimal strings in
 *     scientific notation.  Output buffers take a capacity; if the
 *     rendered value does not fit, the call fails with GTM_ERR_CONFIG
 *     and writes nothing.  512 bytes is ample for any precision this
 *     library accepts below ~1500 bits; size buffers generously.
 *   - File-writing calls accept "-" for standard output.
 *   - A context carries the model parameters (block length m, coupling
 *     lambda) and an optional fixed working precision.  Precision 0
 *     selects the automatic policy: a base budget plus enough bits per
 *     level to track the geometric growth of derivative magnitudes.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gtm_status {
    GTM_OK = 0,
    GTM_ERR_CONFIG = 1,      /* invalid arguments or malformed input */
    GTM_ERR_INVARIANT = 2,   /* a structural property failed to hold */
    GTM_ERR_PRECISION = 3,   /* could not certify a result at any tried precision */
    GTM_ERR_UNSUPPORTED = 4, /* the operation is undefined for these parameters */
    GTM_ERR_LIMIT = 5,       /* a size cap would be exceeded */
    GTM_ERR_IO = 6,          /* file could not be opened or written */
    GTM_ERR_INTERNAL = 7     /* unexpected failure */
} gtm_status;

typedef struct gtm_ctx gtm_ctx;         /* model parameters + precision choice */
typedef struct gtm_bandset gtm_bandset; /* isolated spectrum approximation at one level */
typedef struct gtm_sns gtm_sns;         /* nested band family */

/* Library version string, e.g. "1.0.0". */
const char* gtm_version(void);

/* Description of the most recent failure on this thread ("" if none). */
const char* gtm_last_error(void);

/* ---------------------------------------------------------------- model --- */

/* Create a context.  m in [1, 64]; lambda_decimal a positive decimal
 * string (kept as text and re-parsed at whatever precision each
 * operation runs, so no double rounding); precision_bits 0 for the
 * automatic policy or an explicit bit count >= 64. */
gtm_status gtm_ctx_new(int m, const char* lambda_decimal,
                       unsigned precision_bits, gtm_ctx** out);
void gtm_ctx_free(gtm_ctx* ctx);

/* Working precision (bits) that operations at the given level will use. */
unsigned gtm_ctx_effective_bits(const gtm_ctx* ctx, int level);

/* ----------------------------------------------------------- evaluation --- */

/* Level-n trace data at t: x = trace of the level-n word matrix, y = the
 * mixed trace, dx = d/dt x.  Any output pointer may be NULL to skip it. */
gtm_status gtm_trace_eval(gtm_ctx* ctx, int level, const char* t_decimal,
                          char* x_out, size_t x_cap,
                          char* y_out, size_t y_cap,
                          char* dx_out, size_t dx_cap);

/* Same trace via the literal word product (letter-by-letter transfer
 * matrices) -- an independent witness for the recursion. */
gtm_status gtm_word_trace(gtm_ctx* ctx, int level, const char* t_decimal,
                          char* x_out, size_t x_cap);

/* Cross-check recursion, matrix powering, and word product on
 * grid_count evenly spaced t plus row_count seeded random t in
 * [t_lo, t_hi].  *ok_out becomes 1 when every pairwise relative
 * deviation stays within 2^(32 - precision); the largest deviation is
 * reported as a decimal.  A deviation is a result, not an error: the
 * call still returns GTM_OK. */
gtm_status gtm_oracle_check(gtm_ctx* ctx, int level,
                            const char* t_lo, const char* t_hi,
                            long grid_count, long row_count,
                            unsigned long long seed,
                            char* max_dev_out, size_t max_dev_cap,
                            int* ok_out);

/* Write a CSV table (t,x,y,dx) of count rows evenly spaced on
 * [t_lo, t_hi] at the given level. */
gtm_status gtm_sample_curve_csv(gtm_ctx* ctx, int level,
                                const char* t_lo, const char* t_hi,
                                long count, const char* path);

/* ---------------------------------------------------------------- bands --- */

/* Isolate all (2m)^level spectral bands at the given level (>= 1). */
gtm_status gtm_bands_isolate(gtm_ctx* ctx, int level, gtm_bandset** out);
void gtm_bandset_free(gtm_bandset* bs);

long gtm_bandset_count(const gtm_bandset* bs);
unsigned gtm_bandset_precision_bits(const gtm_bandset* bs);

/* Band endpoints and direction (1 = the trace increases across the band,
 * 0 = it decreases).  index in [0, count). */
gtm_status gtm_bandset_get(const gtm_bandset* bs, long index,
                           char* lo_out, size_t lo_cap,
                           char* hi_out, size_t hi_cap,
                           int* increasing_out);

/* CSV: level,index,lo,hi,direction. */
gtm_status gtm_bandset_write_csv(const gtm_bandset* bs, const char* path);

/* Adjacent band pairs that share an endpoint (closed gaps). */
long gtm_bandset_touch_count(const gtm_bandset* bs);

/* Worst deviation of the band list from its own t -> -t reflection (the
 * traces are even in t, so this should sit at roundoff scale). */
gtm_status gtm_bandset_symmetry_deviation(const gtm_bandset* bs,
                                          char* out, size_t cap);

/* Sample bands of level n+2 (endpoints plus samples_per_band interior
 * points per band) and verify each point lies in the union of levels n
 * and n+1; write the JSON report and return the number of
 * counterexamples found (0 is the expected outcome) plus the precision
 * actually used after any escalation. */
gtm_status gtm_probe_inclusion_json(gtm_ctx* ctx, int level,
                                    int samples_per_band, const char* path,
                                    long* counterexamples_out,
                                    unsigned* precision_bits_out);

/* ---------------------------------------------------- nested band family --- */

/* Build the nested family from the root band (index in [0, 2m)) down to
 * `depth` generations.  m = 1 is unsupported. */
gtm_status gtm_sns_build(gtm_ctx* ctx, int root_band_index, int depth,
                         gtm_sns** out);
void gtm_sns_free(gtm_sns* tree);

int gtm_sns_level_count(const gtm_sns* tree);
/* Nodes in generation `level` (1-based); negative if out of range. */
long gtm_sns_node_count(const gtm_sns* tree, int level);
int gtm_sns_branching(const gtm_sns* tree);
unsigned gtm_sns_precision_bits(const gtm_sns* tree);

/* Full JSON document: metadata, per-level statistics, width-decay fit,
 * the closed-form dimension report, and the nested tree.  The seed is
 * echoed into the metadata for reproducibility bookkeeping. */
gtm_status gtm_sns_write_json(const gtm_sns* tree, long seed, const char* path);

/* Empirical dimension estimate ln(branching)/slope from the width-decay
 * fit; needs depth >= 3. */
gtm_status gtm_sns_dim_estimate(const gtm_sns* tree, char* out, size_t cap);

/* --------------------------------------------------------- closed forms --- */

/* Branching constant of the nested construction (2, or the residue table
 * m / m-3 / m-2 / m-1 for m = 0,1,2,3 mod 4).  m >= 2. */
gtm_status gtm_lambda_m(int m, long* out);

/* Growth base: 8(5 + sqrt(29)) for m = 2, else the larger eigenvalue of
 * the derivative-propagation matrix, 1 + 32m + sqrt(1024m^2 + 192m + 1). */
gtm_status gtm_gamma_m(int m, char* out, size_t cap);

/* Dimension lower bound ln(lambda)/ln(gamma) and the weaker closed form
 * ln(lambda)/ln(64m + 4); both evaluated at 128 bits. */
gtm_status gtm_bound(int m, char* bound_out, size_t bound_cap,
                     char* weak_out, size_t weak_cap);

/* Check gamma_m against the growth recursion it solves; *ok_out = 1 when
 * the relative error is below 1e-8. */
gtm_status gtm_verify_gamma_recursion(int m, int* ok_out,
                                      char* rel_err_out, size_t rel_err_cap);

/* Write bound rows for the given m values (CSV or JSON). */
gtm_status gtm_bounds_write(const int* ms, int count, int as_json,
                            const char* path);

#ifdef __cplusplus
}
#endif

#endif /* GTM_GTM_H */
