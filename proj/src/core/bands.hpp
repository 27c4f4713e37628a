#ifndef GTM_CORE_BANDS_HPP
#define GTM_CORE_BANDS_HPP

// Isolation of the spectral band sets sigma_n = { t : |x_n(t)| <= 2 }.
//
// Structure used throughout (classical discriminant facts, which hold for
// every x_n and y_n here because each is the trace of a transfer matrix
// over a periodic word):
//   * x_n is monic of degree (2m)^n; sigma_n is exactly (2m)^n closed
//     "bands", each mapped monotonically ONTO [-2,2];
//   * directions alternate decreasing, increasing, ... from the left;
//   * all roots of x_n -+ 2 are real with multiplicity <= 2 (double roots
//     are band touchings), zeros of x_n are simple, and every gap between
//     adjacent bands contains exactly one critical point.
//
// Level 1 is isolated by a guarded scan over the a-priori bracket
// [-lambda-3, lambda+3] (the spectrum lies in |t| <= 2+lambda, padded by 1).
// Level n+1 is isolated hierarchically: the full multiset of x_{n+1} = +2
// roots is known structurally from
//   x_{n+1} - 2 = d_m(x_n)^2  (y_n - 2),
//   y_{n+1} - 2 = d_{2m}(x_n)^2 (y_n - 2),
// as (i) preimages under x_n of the zeros of d_m (each a double root) and
// (ii) the accumulated roots of y_n - 2, bottoming out at the +2 roots of
// y_1, which is itself a periodic-word discriminant and is isolated by the
// same scan.  The -2 roots are then resolved inside each excursion window
// between consecutive +2 roots.  Degree bookkeeping at every level yields
// a completeness certificate: any mismatch raises PrecisionError, which the
// entry points translate into precision escalation and retry.

#include "core/real.hpp"
#include "core/tracemap.hpp"

#include <functional>
#include <vector>

namespace gtm {

struct Band {
    Real lo, hi;
    bool increasing = false; // false: x runs +2 -> -2 across the band
};

struct BandSet {
    int level = 0;
    unsigned precision_bits = 0; // effective bits after any escalation
    std::vector<Band> bands;     // sorted by lo
};

// A root of x_level = +2 or -2 with its multiplicity (1 or 2; 2 = touching).
struct RootEntry {
    Real t;
    int mult = 1;
};

// Bands at every level 1..top plus the root bookkeeping needed to continue
// refining (used by the nested-structure builder and the inclusion probe).
struct BandChain {
    Model model;
    unsigned precision_bits = 0;
    std::vector<BandSet> levels;                  // levels[k] = level k+1
    std::vector<std::vector<RootEntry>> plus2;    // +2 roots per level
    std::vector<std::vector<RootEntry>> minus2;   // -2 roots per level
};

// Default working precision for work up to `level`: 128 bits plus
// ceil(log2 gamma) per level, since band widths contract like gamma^-n.
unsigned default_precision_bits(const Model& model, int level);

// ----------------------------------------------------------- operations ---

// All levels 1..level.  band_cap limits (2m)^level (LimitError beyond).
// Escalates precision on certificate failures: doubles the extra bits, up
// to 3 retries, then rethrows.
BandChain isolate_band_chain(const Model& model, int level,
                             long band_cap = 1000000);

// Just the top level of isolate_band_chain.
BandSet isolate_bands(const Model& model, int level, long band_cap = 1000000);

// Unique t in [band.lo, band.hi] with x_level(t) = c, |c| <= 2, by bisection
// on the monotone restriction.  Residual-checked.
Real monotone_preimage(const Model& model, int level, const Band& band,
                       const Real& c);

// ------------------------------------------------------ sampling / probe ---

struct CurveSample {
    Real t, x, y, dx;
};

// Uniform grid including both endpoints; count >= 2.
std::vector<CurveSample> sample_curve(const Model& model, int level,
                                      const Real& t_lo, const Real& t_hi,
                                      long count);

struct InclusionCounterexample {
    Real t;
    Real margin; // min(|x_n|, |x_{n+1}|) - 2 at t (positive = outside)
};

struct InclusionReport {
    Model model;
    int level = 0;            // n: tests sigma_n  u  sigma_{n+1} superset of sigma_{n+2}
    int samples_per_band = 0;
    unsigned precision_bits = 0;
    long bands_tested = 0;    // bands of sigma_{n+2}
    long points_tested = 0;
    Real tolerance;           // membership slack on |x| - 2
    Real worst_margin;        // max over points of min(|x_n|,|x_{n+1}|) - 2
    std::vector<InclusionCounterexample> counterexamples;
};

// Samples sigma_{n+2} (band endpoints plus interior points) and tests
// membership in sigma_n  u  sigma_{n+1} by direct evaluation.  Empty
// counterexample list is evidence, not proof.
InclusionReport probe_inclusion(const Model& model, int n, int samples_per_band);

// --------------------------------------------- internals shared with sns ---
// (exposed for the nested-structure builder and for tests)

// Evaluation jet of a single scalar curve t -> (value, d/dt value).
struct CurvePoint {
    Real v, dv;
};

// x_level as a curve.
CurvePoint x_curve(const Model& model, int level, const Real& t);

// Half-open tolerance on t-space bisection: ldexp(max(1,|t|), 24 - prec).
Real t_tolerance(const Real& t);

// Bisection for f(t) = c on [a, b]; sign_at_a = sign of f(a) - c (nonzero).
// The caller certifies that f - c has opposite signs at the ends.
Real bisect_value(const std::function<CurvePoint(const Real&)>& f,
                  Real a, Real b, const Real& c, int sign_at_a);

// Resolve one excursion window (a, b): f is +-2-valued or zero at the ends,
// makes a single excursion to the target side, and has exactly one interior
// critical point.  target_sign = -1 resolves the dip to -2, +1 the bump to
// +2.  Returns the one (tangent) or two (crossing) roots.
struct WindowRoots {
    bool tangent = false;
    Real t_star;    // interior critical point
    Real r1, r2;    // roots (equal to t_star when tangent)
};
WindowRoots resolve_window(const std::function<CurvePoint(const Real&)>& f,
                           const Real& a, const Real& b, int target_sign);

// Scan outward from `from` (direction dir = +-1) for the first crossing of
// f below -2, staying within `limit`; expects to start in a monotone run
// with sign(dv) = -dir.  Geometric steps with halving on overshoot;
// retreat_count accumulates halvings (observational statistic).  Returns
// the crossing located by bisection.
Real scan_first_minus2(const std::function<CurvePoint(const Real&)>& f,
                       const Real& from, int dir, const Real& limit,
                       const Real& init_step, long* retreat_count);

// Chebyshev-spaced interior sample points on [lo, hi], ascending.  The
// endpoints are never included, so samples of a monotone branch keep a
// strict derivative sign even when the branch is tangent at its ends.
std::vector<Real> chebyshev_points(const Real& lo, const Real& hi, int count);

// Diagnostics on a finished band set: the number of adjacent pairs that
// share an endpoint (within shared-endpoint slack), and the worst
// deviation from the t -> -t mirror symmetry every level's discriminant
// carries (both traces are even polynomials of t, so the band list must
// be its own reflection).
long touching_pairs(const BandSet& bands);
Real symmetry_deviation(const BandSet& bands);

} // namespace gtm

#endif // GTM_CORE_BANDS_HPP
