// Band isolation: exact low-level cases, structural properties at several
// levels, the shared scan/window primitives on synthetic curves, and the
// spectral-inclusion probe.

#include <doctest.h>

#include <functional>
#include <vector>

#include "core/bands.hpp"
#include "core/real.hpp"
#include "core/tracemap.hpp"

using namespace gtm;

namespace {

using Curve = std::function<CurvePoint(const Real&)>;

// Check one band's endpoint values and interior containment.
void check_band_shape(const Model& model, int level, const Band& band,
                      unsigned bits) {
    // Endpoints sit within t_tolerance of the true roots; the value error
    // is that times the local slope, which stays far below this slack.
    Real slack = ldexp(Real(1), 72 - (int)bits);
    CurvePoint lo = x_curve(model, level, band.lo);
    CurvePoint hi = x_curve(model, level, band.hi);
    if (band.increasing) {
        CHECK(abs(lo.v + 2) < slack);
        CHECK(abs(hi.v - 2) < slack);
    } else {
        CHECK(abs(lo.v - 2) < slack);
        CHECK(abs(hi.v + 2) < slack);
    }
    Real mid = (band.lo + band.hi) / 2;
    CHECK(abs(x_curve(model, level, mid).v) <= 2);
}

} // namespace

TEST_CASE("m = 1 level-1 bands have closed-form endpoints") {
    // x_1 = t^2 - lambda^2 - 2; with lambda = 1, |x_1| <= 2 on
    // [-sqrt(5), -1] u [1, sqrt(5)].
    BandSet bs = isolate_bands(Model{1, "1.0"}, 1);
    REQUIRE(bs.bands.size() == 2);
    CHECK(bs.level == 1);
    Real s5 = sqrt(Real(5));
    CHECK(close_rel(bs.bands[0].lo, -s5, 40));
    CHECK(close_rel(bs.bands[0].hi, Real(-1), 40));
    CHECK(close_rel(bs.bands[1].lo, Real(1), 40));
    CHECK(close_rel(bs.bands[1].hi, s5, 40));
    CHECK_FALSE(bs.bands[0].increasing);
    CHECK(bs.bands[1].increasing);
}

TEST_CASE("band counts, ordering, directions, endpoint values") {
    struct Cfg {
        Model model;
        int top;
    };
    std::vector<Cfg> cfgs = {{{1, "1.0"}, 4}, {{2, "0.1"}, 2}, {{3, "0.7"}, 1}};
    for (const Cfg& cfg : cfgs) {
        BandChain chain = isolate_band_chain(cfg.model, cfg.top);
        REQUIRE((int)chain.levels.size() == cfg.top);
        long expected = 1;
        for (int level = 1; level <= cfg.top; ++level) {
            const BandSet& bs = chain.levels[level - 1];
            expected *= 2 * cfg.model.m;
            REQUIRE((long)bs.bands.size() == expected);
            CHECK(bs.level == level);
            for (size_t i = 0; i < bs.bands.size(); ++i) {
                const Band& b = bs.bands[i];
                CHECK(b.lo < b.hi);
                // Leftmost decreasing, then strictly alternating.
                CHECK(b.increasing == (i % 2 == 1));
                if (i + 1 < bs.bands.size()) {
                    Real gap_slack = t_tolerance(b.hi) * 4;
                    CHECK(b.hi <= bs.bands[i + 1].lo + gap_slack);
                }
                check_band_shape(cfg.model, level, b, chain.precision_bits);
            }
        }
    }
}

TEST_CASE("touching pairs and mirror symmetry, m = 2 level 2") {
    BandSet bs = isolate_bands(Model{2, "0.1"}, 2);
    REQUIRE(bs.bands.size() == 16);
    // Four pairs merge tangentially at the +2 preimages of d_2's zero.
    CHECK(touching_pairs(bs) == 4);
    CHECK(symmetry_deviation(bs) < Real("1e-30"));
}

TEST_CASE("monotone_preimage hits interior values and rejects bad input") {
    Model model{2, "1.0"};
    BandSet bs = isolate_bands(model, 1);
    REQUIRE(bs.bands.size() == 4);
    for (const Band& band : bs.bands) {
        for (const Real& c : {Real(0), Real("1.5"), Real("-1.99")}) {
            Real t = monotone_preimage(model, 1, band, c);
            CHECK(band.lo <= t);
            CHECK(t <= band.hi);
            CHECK(abs(x_curve(model, 1, t).v - c) < ldexp(Real(1), -80));
        }
    }
    CHECK_THROWS_AS(monotone_preimage(model, 1, bs.bands[0], Real("2.5")),
                    ConfigError);
    // A sub-interval around a band's center never straddles c = 1.9.
    const Band& b0 = bs.bands[0];
    Real mid = monotone_preimage(model, 1, b0, Real(0));
    Band fake{mid - Real("0.001"), mid + Real("0.001"), b0.increasing};
    CHECK_THROWS_AS(monotone_preimage(model, 1, fake, Real("1.9")),
                    InvariantError);
}

TEST_CASE("sample_curve grid shape and values") {
    Model model{2, "1.0"};
    auto rows = sample_curve(model, 2, Real(-1), Real(1), 5);
    REQUIRE(rows.size() == 5);
    CHECK(rows.front().t == -1);
    CHECK(rows.back().t == 1);
    for (size_t i = 1; i < rows.size(); ++i) CHECK(rows[i - 1].t < rows[i].t);
    for (const CurveSample& s : rows) {
        TraceJet jet = trace_eval(model, 2, s.t);
        CHECK(s.x == jet.x);
        CHECK(s.y == jet.y);
        CHECK(s.dx == jet.dx);
    }
    CHECK_THROWS_AS(sample_curve(model, 2, Real(1), Real(-1), 5), ConfigError);
    CHECK_THROWS_AS(sample_curve(model, 2, Real(0), Real(1), 1), ConfigError);
}

TEST_CASE("resolve_window on synthetic excursions") {
    // Dip through -2: f = t^2 - 3 on (-sqrt(5), sqrt(5)), ends at +2,
    // crossings at -1 and 1, critical point at 0.
    Curve dip = [](const Real& t) { return CurvePoint{t * t - 3, 2 * t}; };
    Real s5 = sqrt(Real(5));
    WindowRoots w = resolve_window(dip, -s5, s5, -1);
    CHECK_FALSE(w.tangent);
    CHECK(close_rel(w.r1, Real(-1), 40));
    CHECK(close_rel(w.r2, Real(1), 40));
    CHECK(abs(w.t_star) < Real("1e-20"));
    CHECK(w.r1 < w.r2);

    // Tangential dip: f = 2 t^2 - 2 exactly touches -2 at 0.
    Curve touch = [](const Real& t) { return CurvePoint{2 * t * t - 2, 4 * t}; };
    Real s2 = sqrt(Real(2));
    WindowRoots wt = resolve_window(touch, -s2, s2, -1);
    CHECK(wt.tangent);
    CHECK(wt.r1 == wt.r2);
    CHECK(abs(wt.t_star) < Real("1e-20"));

    // Bump through +2: f = 3 - t^2 on the mirror window, target +1.
    Curve bump = [](const Real& t) { return CurvePoint{3 - t * t, -2 * t}; };
    WindowRoots wb = resolve_window(bump, -s5, s5, +1);
    CHECK_FALSE(wb.tangent);
    CHECK(close_rel(wb.r1, Real(-1), 40));
    CHECK(close_rel(wb.r2, Real(1), 40));

    // Excursion that never reaches the target side: f = t^2 - 1 bottoms
    // out at -1.
    Curve shallow = [](const Real& t) { return CurvePoint{t * t - 1, 2 * t}; };
    Real s3 = sqrt(Real(3));
    CHECK_THROWS_AS(resolve_window(shallow, -s3, s3, -1), PrecisionError);
}

TEST_CASE("scan_first_minus2 on synthetic descents") {
    // f = 4 t^4 - 8 t^2 + 2: starts at +2 with f' = 0, dips tangentially
    // to exactly -2 at t = 1 (f + 2 = 4 (t^2 - 1)^2).
    Curve f = [](const Real& t) {
        Real t2 = t * t;
        return CurvePoint{4 * t2 * t2 - 8 * t2 + 2, 16 * t2 * t - 16 * t};
    };
    long retreats = 0;
    Real hit = scan_first_minus2(f, Real(0), +1, Real(3), Real("0.001"), &retreats);
    CHECK(close_rel(hit, Real(1), 48));
    // Mirror image, scanning left.
    Real hit_left = scan_first_minus2(f, Real(0), -1, Real(-3), Real("0.001"), nullptr);
    CHECK(close_rel(hit_left, Real(-1), 48));

    // Shift down a quarter: the dip now crosses; first crossing from 0 is
    // at sqrt(3)/2 (solve 4 t^4 - 8 t^2 + 1.75 = -2).
    Curve g = [](const Real& t) {
        Real t2 = t * t;
        return CurvePoint{4 * t2 * t2 - 8 * t2 + Real("1.75"), 16 * t2 * t - 16 * t};
    };
    Real cross = scan_first_minus2(g, Real(0), +1, Real(3), Real("0.001"), nullptr);
    CHECK(close_rel(cross, sqrt(Real(3)) / 2, 40));

    // Shift up: the dip bottoms out at -1; the scan must refuse both ways.
    Curve h = [](const Real& t) {
        Real t2 = t * t;
        return CurvePoint{4 * t2 * t2 - 8 * t2 + 3, 16 * t2 * t - 16 * t};
    };
    CHECK_THROWS_AS(
        scan_first_minus2(h, Real(0), +1, Real("0.9"), Real("0.001"), nullptr),
        PrecisionError); // limit hit while still descending
    CHECK_THROWS_AS(scan_first_minus2(h, Real(0), +1, Real(3), Real("0.001"), nullptr),
                    PrecisionError); // dip inspected, never reaches -2
}

TEST_CASE("bisect_value and t_tolerance basics") {
    Curve cubic = [](const Real& t) { return CurvePoint{t * t * t, 3 * t * t}; };
    Real r = bisect_value(cubic, Real(0), Real(2), Real(1), -1);
    CHECK(close_rel(r, Real(1), 40));

    int prec = (int)working_precision_bits();
    CHECK(t_tolerance(Real(0)) == ldexp(Real(1), 24 - prec));
    CHECK(t_tolerance(Real(-8)) == ldexp(Real(1), 27 - prec));
}

TEST_CASE("chebyshev_points are interior and ascending") {
    auto pts = chebyshev_points(Real(2), Real(3), 7);
    REQUIRE(pts.size() == 7);
    for (size_t i = 0; i < pts.size(); ++i) {
        CHECK(pts[i] > 2);
        CHECK(pts[i] < 3);
        if (i) CHECK(pts[i - 1] < pts[i]);
    }
}

TEST_CASE("default_precision_bits grows linearly from 128") {
    Model m2{2, "1.0"};
    CHECK(default_precision_bits(m2, 0) == 128);
    unsigned inc = default_precision_bits(m2, 1) - 128;
    CHECK(inc >= 6);
    CHECK(inc <= 12);
    CHECK(default_precision_bits(m2, 3) == 128 + 3 * inc);
    CHECK(default_precision_bits(m2, -2) == 128);
}

TEST_CASE("inclusion probe finds no escapes for m = 1") {
    InclusionReport rep = probe_inclusion(Model{1, "1.0"}, 1, 8);
    CHECK(rep.level == 1);
    CHECK(rep.bands_tested == 8); // sigma_3 of the m = 1 model
    CHECK(rep.points_tested >= rep.bands_tested * 8);
    CHECK(rep.counterexamples.empty());
    CHECK(rep.worst_margin < rep.tolerance);
}
