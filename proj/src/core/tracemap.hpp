#ifndef GTM_CORE_TRACEMAP_HPP
#define GTM_CORE_TRACEMAP_HPP

// Trace dynamics for the two-letter substitution family
//
//   a -> a^m b^m,   b -> b^m a^m          (block order: image of a starts
//                                          with a's, image of b with b's)
//
// acting on transfer matrices
//
//   M_0 = [[t - lambda, -1], [1, 0]],   N_0 = [[t + lambda, -1], [1, 0]],
//   M_{n+1} = N_n^m M_n^m,              N_{n+1} = M_n^m N_n^m.
//
// We track the jet (x_n, y_n, x_n', y_n') where x_n = tr M_n and
// y_n = tr(M_n N_n), with ' = d/dt.  For n >= 1 both seed matrices share
// their trace and the step is the polynomial trace recursion
//
//   x_{n+1} = d_m(x_n)^2 (y_n - 2) + 2,
//   y_{n+1} = d_{2m}(x_n)^2 (y_n - 2) + 2.
//
// The 0 -> 1 step is NOT of that form (tr M_0 = t - lambda and
// tr N_0 = t + lambda differ); it uses the exact two-generator product
// trace for unimodular matrices,
//
//   tr(A^j B^k) = d_j(p) d_k(q) tr(AB) - d_j(p) d_{k-1}(q) p
//               - d_{j-1}(p) d_k(q) q + 2 d_{j-1}(p) d_{k-1}(q),
//
// with p = tr A, q = tr B, applied with (j, k) = (m, m) for x_1 and
// (2m, 2m) for y_1.  Derivatives ride along through both steps.

#include "core/mat2.hpp"
#include "core/real.hpp"

#include <string>
#include <utility>

namespace gtm {

// Model parameters.  lambda is kept as its decimal source text so that it
// can be re-materialized exactly at any working precision (a Real parsed
// at 128 bits would silently poison a 256-bit computation).
struct Model {
    int m = 2;
    std::string lambda = "1.0";
};

// Throws ConfigError unless 1 <= m <= 64 and lambda parses to a value > 0.
void validate(const Model& model);

// lambda as a Real at the current working precision.
Real model_lambda(const Model& model);

// First-order jet of the trace pair at one level.
struct TraceJet {
    Real x, y;   // x_n(t), y_n(t)
    Real dx, dy; // d/dt of the above
    int level = 0;
};

// Level-0 jet: x_0 = t - lambda, y_0 = t^2 - lambda^2 - 2 (= tr(M_0 N_0)).
TraceJet initial_jet(const Model& model, const Real& t);

// One substitution step, levels 0->1 and n->n+1 handled per the note above.
TraceJet step_jet(const Model& model, const TraceJet& jet);

// Jet at a given level (level >= 0).
TraceJet trace_eval(const Model& model, int level, const Real& t);

// ------------------------------------------------- independent oracles ---

// The substitution word at a given level, starting from seed 'a'
// (characters 'a' and 'b', length (2m)^level).  Throws LimitError if the
// length would exceed max_len.
std::string substitution_word(int m, int level, long max_len);

// Transfer matrices (M_level, N_level) by the block recursion
// M_{n+1} = N_n^m M_n^m, N_{n+1} = M_n^m N_n^m with sl2_pow for the powers
// -- no trace recursion involved.  Checks det = 1 at each level and throws
// PrecisionError on drift.
std::pair<Mat2, Mat2> matrix_oracle(const Model& model, int level, const Real& t,
                                    long max_len);

// Fully independent second oracle: builds the literal substitution word and
// folds the single-letter matrices right-to-left (first letter applied
// first), then takes the trace.  Cost O((2m)^level) multiplications.
Real word_oracle(const Model& model, int level, const Real& t, long max_len);

} // namespace gtm

#endif // GTM_CORE_TRACEMAP_HPP
