#include "core/bands.hpp"

#include "core/chebyshev.hpp"
#include "core/parallel.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>

namespace gtm {

namespace {

using Curve = std::function<CurvePoint(const Real&)>;

int sgn(const Real& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

// Maximum bisection sweeps; generous vs. the ~precision+40 actually needed.
long max_bisect_iters() { return 4L * working_precision_bits() + 256; }

} // namespace

unsigned default_precision_bits(const Model& model, int level) {
    // Band widths at level n contract like gamma^-n, so resolving level-n
    // endpoints costs ~log2(gamma) bits per level on top of a fixed budget.
    double m = model.m;
    double g = 1.0 + 32.0 * m + std::sqrt(1024.0 * m * m + 192.0 * m + 1.0);
    if (model.m == 2) g = 40.0 + 8.0 * std::sqrt(29.0); // sharper two-term-recurrence rate
    unsigned per_level = static_cast<unsigned>(std::ceil(std::log2(g)));
    if (level < 0) level = 0;
    return 128u + static_cast<unsigned>(level) * per_level;
}

Real t_tolerance(const Real& t) {
    Real scale = abs(t);
    if (scale < 1) scale = 1;
    return rel_eps(24) * scale;
}

CurvePoint x_curve(const Model& model, int level, const Real& t) {
    TraceJet j = trace_eval(model, level, t);
    return CurvePoint{j.x, j.dx};
}

std::vector<Real> chebyshev_points(const Real& lo, const Real& hi, int count) {
    std::vector<Real> pts;
    pts.reserve(static_cast<size_t>(count));
    Real mid = (lo + hi) / 2;
    Real rad = (hi - lo) / 2;
    Real pi = boost::math::constants::pi<Real>();
    for (int i = count - 1; i >= 0; --i) { // ascending t
        Real theta = pi * (2 * i + 1) / (2 * count);
        pts.push_back(mid + rad * cos(theta));
    }
    return pts;
}

Real bisect_value(const Curve& f, Real a, Real b, const Real& c, int sign_at_a) {
    long limit = max_bisect_iters();
    for (long it = 0; it < limit; ++it) {
        Real mid = (a + b) / 2;
        if (b - a <= t_tolerance(mid)) return mid;
        int s = sgn(f(mid).v - c);
        if (s == 0) return mid;
        if (s == sign_at_a) a = mid;
        else b = mid;
    }
    throw PrecisionError("bisect_value: failed to converge");
}

namespace {

// Bisection on the sign of f': left_sign on (a, flip), -left_sign after.
// Endpoint derivative values are never probed (they may legitimately be 0).
Real bisect_deriv_flip(const Curve& f, Real a, Real b, int left_sign) {
    long limit = max_bisect_iters();
    for (long it = 0; it < limit; ++it) {
        Real mid = (a + b) / 2;
        if (b - a <= t_tolerance(mid)) return mid;
        int s = sgn(f(mid).dv);
        if (s == 0) return mid;
        if (s == left_sign) a = mid;
        else b = mid;
    }
    throw PrecisionError("bisect_deriv_flip: failed to converge");
}

// Value slack for classifying a critical value against +-2.  The critical
// point is second-order flat, so location error contributes negligibly;
// this covers evaluation rounding with headroom.
Real tangent_margin(const Real& v) {
    Real scale = abs(v);
    if (scale < 1) scale = 1;
    return rel_eps(40) * scale;
}

} // namespace

WindowRoots resolve_window(const Curve& f, const Real& a, const Real& b,
                           int target_sign) {
    WindowRoots out;
    Real c = Real(2) * target_sign;
    // Exactly one critical point inside: f' runs target_sign, ..., -target_sign
    // (decreasing into a dip for target -1, rising into a bump for +1).
    out.t_star = bisect_deriv_flip(f, a, b, target_sign);
    Real v = f(out.t_star).v;
    Real margin = tangent_margin(v);
    Real excess = target_sign < 0 ? (c - v) : (v - c); // how far past the target value
    if (excess > margin) {
        // Clean crossing pair around the critical point.
        int sa = -target_sign; // sign of f - c at the window ends
        out.r1 = bisect_value(f, a, out.t_star, c, sa);
        out.r2 = bisect_value(f, out.t_star, b, c, -sa);
        out.tangent = false;
    } else if (excess >= -margin) {
        out.tangent = true;
        out.r1 = out.r2 = out.t_star;
    } else {
        // The excursion never reaches the target value: structurally
        // impossible, so the window bounds or signs were resolved wrong.
        throw PrecisionError("resolve_window: excursion does not reach target value");
    }
    return out;
}

Real scan_first_minus2(const Curve& f, const Real& from, int dir,
                       const Real& limit, const Real& init_step,
                       long* retreat_count) {
    // The scan starts where the curve touches +2 with zero derivative and
    // descends on the `dir` side.  Probes advance with geometrically
    // growing steps, capped by twice the tangent-line distance to -2.  The
    // cap keeps a probe from leaping across the upcoming crossing into
    // later oscillations (it is at most twice the remaining distance while
    // the descent steepens), while the factor two forces an overshoot once
    // the crossing is near -- a bare tangent step is a Newton step for
    // v = -2 and would converge one-sidedly on flattening descents without
    // ever producing the v < -2 probe that brackets.  Callers pass a small
    // init_step (well under the expected child width); growth keeps the
    // cost logarithmic.
    Real prev = from;
    Real prev_v = 2;
    bool in_run = false; // a probe has confirmed the descending run
    Real step = init_step;
    long iters = max_bisect_iters();
    for (long it = 0; it < iters; ++it) {
        if (step <= t_tolerance(prev)) {
            throw PrecisionError("scan_first_minus2: step underflow before bracketing");
        }
        Real cand = prev + dir * step;
        bool clipped = false;
        if ((dir > 0 && cand > limit) || (dir < 0 && cand < limit)) {
            cand = limit;
            clipped = true;
        }
        CurvePoint p = f(cand);
        if (p.v < -2) {
            // prev is above -2 inside the descending run, so (prev, cand)
            // brackets the first crossing.
            if (dir > 0) return bisect_value(f, prev, cand, Real(-2), +1);
            return bisect_value(f, cand, prev, Real(-2), -1);
        }
        if (p.v == -2) return cand; // exact hit
        int ds = sgn(p.dv);
        if (p.v <= prev_v && ds == -dir) {
            // Still descending.
            if (clipped) {
                throw PrecisionError("scan_first_minus2: no -2 crossing before limit");
            }
            prev = cand;
            prev_v = p.v;
            in_run = true;
            Real grow = step * 2;
            Real overshoot = 2 * (p.v + 2) / abs(p.dv);
            step = grow < overshoot ? grow : overshoot;
            continue;
        }
        if (in_run && p.v <= prev_v && ds == dir) {
            // Past the run's minimum without seeing v < -2: locate the
            // minimum and classify (the dip may touch -2 tangentially).
            // In t-order the dip always descends then ascends, whichever way
            // the scan ran.
            Real ts = dir > 0 ? bisect_deriv_flip(f, prev, cand, -1)
                              : bisect_deriv_flip(f, cand, prev, -1);
            Real v = f(ts).v;
            Real margin = tangent_margin(v);
            if (v < -2 - margin) {
                // The minimum is below -2 after all; the first crossing
                // lies between prev and it.
                if (dir > 0) return bisect_value(f, prev, ts, Real(-2), +1);
                return bisect_value(f, ts, prev, Real(-2), -1);
            }
            if (v <= -2 + margin) return ts; // tangential touch at -2
            throw PrecisionError("scan_first_minus2: adjacent dip does not reach -2");
        }
        // The probe left the descending run (value rose past the previous
        // probe, or derivative noise at the start): retreat.
        step /= 2;
        if (retreat_count) ++(*retreat_count);
    }
    throw PrecisionError("scan_first_minus2: iteration cap reached");
}

namespace {

struct IsoResult {
    std::vector<Band> bands;
    std::vector<RootEntry> plus2, minus2;
};

void append_window_roots(std::vector<RootEntry>& out, const WindowRoots& w) {
    if (w.tangent) {
        out.push_back(RootEntry{w.t_star, 2});
    } else {
        out.push_back(RootEntry{w.r1, 1});
        out.push_back(RootEntry{w.r2, 1});
    }
}

std::vector<Real> expand_instances(const std::vector<RootEntry>& entries) {
    std::vector<Real> inst;
    inst.reserve(entries.size() * 2);
    for (const auto& e : entries) {
        for (int k = 0; k < e.mult; ++k) inst.push_back(e.t);
    }
    std::sort(inst.begin(), inst.end());
    return inst;
}

// Interleave sorted +2 / -2 root instances into bands.  One-based rule:
// band i = [p_i, q_i] decreasing when i is odd, [q_i, p_i] increasing when
// even -- the unique arrangement consistent with a monic discriminant.
std::vector<Band> assemble_bands(const std::vector<Real>& plus,
                                 const std::vector<Real>& minus) {
    if (plus.size() != minus.size()) {
        throw PrecisionError("assemble_bands: +2/-2 root counts differ");
    }
    std::vector<Band> bands(plus.size());
    for (size_t i = 0; i < plus.size(); ++i) {
        bool inc = (i % 2) == 1;
        Band b;
        b.increasing = inc;
        b.lo = inc ? minus[i] : plus[i];
        b.hi = inc ? plus[i] : minus[i];
        if (!(b.lo < b.hi)) {
            throw PrecisionError("assemble_bands: degenerate band");
        }
        bands[i] = b;
    }
    for (size_t i = 0; i + 1 < bands.size(); ++i) {
        if (bands[i].hi > bands[i + 1].lo + t_tolerance(bands[i].hi)) {
            throw PrecisionError("assemble_bands: bands out of order");
        }
    }
    return bands;
}

// Scan + bisection isolation for a small-degree discriminant-type curve on
// [lo, hi]: finds all `degree` simple zeros, resolves the excursion between
// consecutive zeros (alternating to -2 and +2), and the two outer +2 roots.
IsoResult generic_isolate(const Curve& f, long degree, const Real& lo,
                          const Real& hi) {
    if (!(f(lo).v > 2) || !(f(hi).v > 2)) {
        throw InvariantError("generic_isolate: bracket does not enclose all bands");
    }
    std::vector<Real> zeros;
    long n_grid = std::max<long>(1024, 64 * degree);
    bool isolated = false;
    for (int round = 0; round < 6 && !isolated; ++round) {
        std::vector<Real> ts(static_cast<size_t>(n_grid) + 1);
        std::vector<int> ss(static_cast<size_t>(n_grid) + 1);
        Real width = hi - lo;
        bool grid_hit_zero = false;
        for (long i = 0; i <= n_grid; ++i) {
            Real t = lo + width * i / n_grid;
            ts[static_cast<size_t>(i)] = t;
            int s = sgn(f(t).v);
            if (s == 0) { grid_hit_zero = true; break; }
            ss[static_cast<size_t>(i)] = s;
        }
        if (grid_hit_zero) { n_grid = n_grid * 2 + 1; continue; } // shift the lattice
        long changes = 0;
        for (long i = 0; i < n_grid; ++i) {
            if (ss[static_cast<size_t>(i)] != ss[static_cast<size_t>(i) + 1]) ++changes;
        }
        if (changes > degree) {
            throw PrecisionError("generic_isolate: more sign changes than degree");
        }
        if (changes == degree) {
            zeros.clear();
            for (long i = 0; i < n_grid; ++i) {
                size_t k = static_cast<size_t>(i);
                if (ss[k] != ss[k + 1]) {
                    zeros.push_back(bisect_value(f, ts[k], ts[k + 1], Real(0), ss[k]));
                }
            }
            isolated = true;
        } else {
            n_grid *= 4;
        }
    }
    if (!isolated) {
        throw PrecisionError("generic_isolate: grid scan missed zeros");
    }
    // Zeros are simple and sit one per band with alternating slope,
    // decreasing first (monic discriminant).
    for (size_t i = 0; i < zeros.size(); ++i) {
        int expect = (i % 2 == 0) ? -1 : +1;
        if (sgn(f(zeros[i]).dv) != expect) {
            throw PrecisionError("generic_isolate: zero slopes do not alternate");
        }
    }
    IsoResult out;
    // Outer +2 edges.
    out.plus2.push_back(RootEntry{bisect_value(f, lo, zeros.front(), Real(2), +1), 1});
    for (size_t i = 0; i + 1 < zeros.size(); ++i) {
        int target = (i % 2 == 0) ? -1 : +1;
        WindowRoots w = resolve_window(f, zeros[i], zeros[i + 1], target);
        append_window_roots(target < 0 ? out.minus2 : out.plus2, w);
    }
    out.plus2.push_back(RootEntry{bisect_value(f, zeros.back(), hi, Real(2), -1), 1});
    out.bands = assemble_bands(expand_instances(out.plus2), expand_instances(out.minus2));
    return out;
}

Real preimage_on_band(const Curve& f, const Band& band, const Real& c) {
    CurvePoint plo = f(band.lo);
    int s = sgn(plo.v - c);
    if (s == 0) return band.lo;
    Real root = bisect_value(f, band.lo, band.hi, c, s);
    CurvePoint pr = f(root);
    Real scale = abs(pr.dv);
    Real tsc = abs(root);
    if (tsc > 1) scale *= tsc;
    if (scale < 1) scale = 1;
    if (abs(pr.v - c) > rel_eps(32) * scale) {
        throw PrecisionError("preimage residual above tolerance");
    }
    return root;
}

// One hierarchical refinement step: bands at level n plus the multiset of
// y_n - 2 roots produce bands at level n+1 and the y_{n+1} - 2 multiset.
void refine_step(const Model& model, int n, const std::vector<Band>& bands_n,
                 std::vector<RootEntry>& yroots, IsoResult& out) {
    const int m = model.m;
    Real pi = boost::math::constants::pi<Real>();
    std::vector<Real> m_zeros, m2_zeros; // zeros of d_m and d_{2m} in (-2, 2)
    for (int j = 1; j < m; ++j) m_zeros.push_back(2 * cos(pi * j / m));
    for (int j = 1; j < 2 * m; ++j) m2_zeros.push_back(2 * cos(pi * j / (2 * m)));

    Curve fn = [&](const Real& t) { return x_curve(model, n, t); };
    Curve fn1 = [&](const Real& t) { return x_curve(model, n + 1, t); };

    // Preimages through every level-n band: zeros of d_m(x_n) become double
    // +2 roots of x_{n+1}; zeros of d_{2m}(x_n) become double roots of
    // y_{n+1} - 2 carried forward for deeper levels.
    size_t nb = bands_n.size();
    std::vector<std::vector<RootEntry>> plus_part(nb), ynew_part(nb);
    parallel_for(nb, [&](size_t bi) {
        const Band& b = bands_n[bi];
        for (const Real& c : m_zeros) {
            plus_part[bi].push_back(RootEntry{preimage_on_band(fn, b, c), 2});
        }
        for (const Real& c : m2_zeros) {
            ynew_part[bi].push_back(RootEntry{preimage_on_band(fn, b, c), 2});
        }
    });

    std::vector<RootEntry> plus_entries;
    for (auto& p : plus_part) {
        plus_entries.insert(plus_entries.end(), p.begin(), p.end());
    }
    plus_entries.insert(plus_entries.end(), yroots.begin(), yroots.end());
    std::vector<Real> plus_inst = expand_instances(plus_entries);

    long expected = static_cast<long>(bands_n.size()) * 2 * m;
    if (static_cast<long>(plus_inst.size()) != expected) {
        throw PrecisionError("refine_step: +2 root count certificate failed");
    }

    // Excursion windows (p_1,p_2), (p_3,p_4), ...: each holds exactly the
    // two -2 roots of one band pair; window ends must be strictly separated.
    size_t n_win = plus_inst.size() / 2;
    std::vector<WindowRoots> windows(n_win);
    for (size_t k = 0; k < n_win; ++k) {
        const Real& a = plus_inst[2 * k];
        const Real& b = plus_inst[2 * k + 1];
        if (!(b - a > 4 * t_tolerance(a))) {
            throw PrecisionError("refine_step: window endpoints not separated");
        }
    }
    parallel_for(n_win, [&](size_t k) {
        windows[k] = resolve_window(fn1, plus_inst[2 * k], plus_inst[2 * k + 1], -1);
    });

    out.plus2 = std::move(plus_entries);
    std::sort(out.plus2.begin(), out.plus2.end(),
              [](const RootEntry& a, const RootEntry& b) { return a.t < b.t; });
    out.minus2.clear();
    for (const auto& w : windows) append_window_roots(out.minus2, w);
    out.bands = assemble_bands(plus_inst, expand_instances(out.minus2));

    for (auto& p : ynew_part) {
        yroots.insert(yroots.end(), p.begin(), p.end());
    }
}

BandChain chain_once(const Model& model, int level) {
    BandChain chain;
    chain.model = model;
    chain.precision_bits = working_precision_bits();
    Real lam = model_lambda(model);
    Real lo = -lam - 3, hi = lam + 3;

    Curve f1 = [&](const Real& t) { return x_curve(model, 1, t); };
    Curve g1 = [&](const Real& t) {
        TraceJet j = trace_eval(model, 1, t);
        return CurvePoint{j.y, j.dy};
    };
    IsoResult level1 = generic_isolate(f1, 2 * model.m, lo, hi);
    // y_1 is the discriminant of its own periodic word; only its +2 roots
    // are needed (they seed the y_n - 2 multiset).
    std::vector<RootEntry> yroots = generic_isolate(g1, 4 * model.m, lo, hi).plus2;

    auto push_level = [&](int lv, IsoResult& iso) {
        BandSet bs;
        bs.level = lv;
        bs.precision_bits = chain.precision_bits;
        bs.bands = std::move(iso.bands);
        chain.levels.push_back(std::move(bs));
        chain.plus2.push_back(std::move(iso.plus2));
        chain.minus2.push_back(std::move(iso.minus2));
    };
    push_level(1, level1);
    for (int n = 1; n < level; ++n) {
        IsoResult next;
        refine_step(model, n, chain.levels.back().bands, yroots, next);
        push_level(n + 1, next);
    }
    return chain;
}

} // namespace

BandChain isolate_band_chain(const Model& model, int level, long band_cap) {
    validate(model);
    if (level < 1) throw ConfigError("isolate_band_chain: level must be >= 1");
    double count = 1;
    for (int i = 0; i < level; ++i) {
        count *= 2.0 * model.m;
        if (count > static_cast<double>(band_cap)) {
            throw LimitError("isolate_band_chain: band count (2m)^level exceeds cap");
        }
    }
    unsigned base = working_precision_bits();
    unsigned extra = 0;
    for (int attempt = 0;; ++attempt) {
        PrecisionScope scope(base + extra);
        try {
            return chain_once(model, level);
        } catch (const PrecisionError&) {
            if (attempt >= 3) throw;
            extra = extra == 0 ? 64 : extra * 2;
        }
    }
}

BandSet isolate_bands(const Model& model, int level, long band_cap) {
    BandChain chain = isolate_band_chain(model, level, band_cap);
    return std::move(chain.levels.back());
}

Real monotone_preimage(const Model& model, int level, const Band& band,
                       const Real& c) {
    validate(model);
    if (level < 1) throw ConfigError("monotone_preimage: level must be >= 1");
    if (abs(c) > 2) throw ConfigError("monotone_preimage: |c| must be <= 2");
    Curve f = [&](const Real& t) { return x_curve(model, level, t); };
    CurvePoint plo = f(band.lo), phi = f(band.hi);
    int slo = sgn(plo.v - c), shi = sgn(phi.v - c);
    if (slo == 0) return band.lo;
    if (shi == 0) return band.hi;
    if (slo == shi) {
        throw InvariantError("monotone_preimage: endpoint values do not straddle c");
    }
    return preimage_on_band(f, band, c);
}

std::vector<CurveSample> sample_curve(const Model& model, int level,
                                      const Real& t_lo, const Real& t_hi,
                                      long count) {
    validate(model);
    if (level < 0) throw ConfigError("sample_curve: negative level");
    if (count < 2) throw ConfigError("sample_curve: count must be >= 2");
    if (!(t_lo < t_hi)) throw ConfigError("sample_curve: need t_lo < t_hi");
    std::vector<CurveSample> rows(static_cast<size_t>(count));
    Real width = t_hi - t_lo;
    parallel_for(static_cast<size_t>(count), [&](size_t i) {
        Real t = (static_cast<long>(i) == count - 1)
                     ? t_hi
                     : t_lo + width * static_cast<long>(i) / (count - 1);
        TraceJet j = trace_eval(model, level, t);
        rows[i] = CurveSample{t, j.x, j.y, j.dx};
    });
    return rows;
}

InclusionReport probe_inclusion(const Model& model, int n, int samples_per_band) {
    validate(model);
    if (n < 1) throw ConfigError("probe_inclusion: level must be >= 1");
    if (samples_per_band < 0) throw ConfigError("probe_inclusion: negative sample count");
    BandChain chain = isolate_band_chain(model, n + 2);
    PrecisionScope scope(chain.precision_bits);

    InclusionReport rep;
    rep.model = model;
    rep.level = n;
    rep.samples_per_band = samples_per_band;
    rep.precision_bits = chain.precision_bits;
    rep.tolerance = 0;
    rep.worst_margin = -4; // any genuine margin beats this

    const auto& top = chain.levels.back().bands;
    rep.bands_tested = static_cast<long>(top.size());

    // x_n and x_{n+1} at t in one orbit pass.
    auto eval_pair = [&](const Real& t, TraceJet& jn, TraceJet& jn1) {
        TraceJet j = initial_jet(model, t);
        for (int k = 0; k < n; ++k) j = step_jet(model, j);
        jn = j;
        jn1 = step_jet(model, j);
    };

    std::vector<std::vector<InclusionCounterexample>> cex(top.size());
    std::vector<Real> worst(top.size(), Real(-4));
    std::vector<Real> tol_max(top.size(), Real(0));
    std::vector<long> pts(top.size(), 0);
    parallel_for(top.size(), [&](size_t bi) {
        const Band& b = top[bi];
        std::vector<Real> ts = chebyshev_points(b.lo, b.hi, samples_per_band);
        ts.push_back(b.lo);
        ts.push_back(b.hi);
        for (const Real& t : ts) {
            TraceJet jn, jn1;
            eval_pair(t, jn, jn1);
            Real margin_n = abs(jn.x) - 2;
            Real margin_n1 = abs(jn1.x) - 2;
            Real margin = margin_n < margin_n1 ? margin_n : margin_n1;
            // Membership slack scales with the derivative: the sample t
            // carries location error from band isolation.
            Real dscale = abs(jn.dx) > abs(jn1.dx) ? abs(jn.dx) : abs(jn1.dx);
            Real tsc = abs(t);
            if (tsc > 1) dscale *= tsc;
            if (dscale < 1) dscale = 1;
            Real tol = rel_eps(32) * dscale;
            if (tol > tol_max[bi]) tol_max[bi] = tol;
            if (margin > worst[bi]) worst[bi] = margin;
            if (margin > tol) {
                cex[bi].push_back(InclusionCounterexample{t, margin});
            }
            ++pts[bi];
        }
    });
    for (size_t bi = 0; bi < top.size(); ++bi) {
        rep.points_tested += pts[bi];
        if (worst[bi] > rep.worst_margin) rep.worst_margin = worst[bi];
        if (tol_max[bi] > rep.tolerance) rep.tolerance = tol_max[bi];
        rep.counterexamples.insert(rep.counterexamples.end(), cex[bi].begin(),
                                   cex[bi].end());
    }
    return rep;
}

long touching_pairs(const BandSet& bands) {
    PrecisionScope scope(bands.precision_bits ? bands.precision_bits
                                              : working_precision_bits());
    long n = 0;
    for (size_t i = 1; i < bands.bands.size(); ++i) {
        Real gap = bands.bands[i].lo - bands.bands[i - 1].hi;
        Real scale = abs(bands.bands[i].lo);
        if (scale < 1) scale = 1;
        if (gap <= rel_eps(16) * scale) ++n;
    }
    return n;
}

Real symmetry_deviation(const BandSet& bands) {
    Real worst = 0;
    size_t n = bands.bands.size();
    for (size_t i = 0; i < n; ++i) {
        const Band& a = bands.bands[i];
        const Band& b = bands.bands[n - 1 - i];
        Real d1 = abs(a.lo + b.hi);
        Real d2 = abs(a.hi + b.lo);
        if (d1 > worst) worst = d1;
        if (d2 > worst) worst = d2;
    }
    return worst;
}

} // namespace gtm
