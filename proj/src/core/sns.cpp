#include "core/sns.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "core/bounds.hpp"
#include "core/parallel.hpp"

namespace gtm {

namespace {

using Curve = std::function<CurvePoint(const Real&)>;

int sgn(const Real& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

std::string lineage(int generation, size_t index) {
    return "while expanding generation " + std::to_string(generation) +
           " node " + std::to_string(index);
}

struct Expansion {
    std::vector<SNSNode> kids;
    std::vector<SNSAnchor> anchors;
    long retreats = 0;
};

// The -2 crossing adjacent to a tangency t, wrapped as a child band.
// dir = +1 gives the decreasing child [t, crossing]; dir = -1 the
// increasing child [crossing, t].
SNSNode side_child(const Curve& f, const Real& t, int dir, const Real& limit,
                   const Real& init_step, int child_level, long* retreats) {
    Real c = scan_first_minus2(f, t, dir, limit, init_step, retreats);
    SNSNode node;
    node.level = child_level;
    if (dir > 0) node.band = Band{t, c, false};
    else node.band = Band{c, t, true};
    return node;
}

Real band_width(const SNSNode& n) { return n.band.hi - n.band.lo; }

// m > 2: the zeros of the order-m divided trace sit at 2cos(j pi / m);
// pulling the middle half of them (j = ceil(m/4) .. floor(3m/4)) back
// through the monotone parent curve gives fresh tangencies of the next
// curve.  Around each tangency the next curve dips below -2 on both
// sides; the construction keeps both flanking children at interior
// tangencies and one child at each extreme (the right child at the
// smallest j, the left child at the largest), which makes the count come
// out to exactly 2*(m1 - m0) children.
Expansion expand_m_gt2(const Model& model, const SNSNode& node) {
    const int m = model.m;
    const int n = node.level;
    const int m0 = (m + 3) / 4;
    const int m1 = (3 * m) / 4;
    Real pi = boost::math::constants::pi<Real>();
    Curve next = [&](const Real& t) { return x_curve(model, n + 1, t); };
    Real init = band_width(node) / (Real(1 << 16) * m);

    struct AnchorPlan {
        Real t;
        bool left, right;
    };
    std::vector<AnchorPlan> plan;
    plan.reserve(static_cast<size_t>(m1 - m0 + 1));
    for (int j = m0; j <= m1; ++j) {
        Real c = 2 * cos(pi * j / m);
        plan.push_back(AnchorPlan{monotone_preimage(model, n, node.band, c),
                                  j > m0, j < m1});
    }
    // Ascending in t (the parent's direction decides how j maps to t).
    std::sort(plan.begin(), plan.end(),
              [](const AnchorPlan& a, const AnchorPlan& b) { return a.t < b.t; });

    Expansion out;
    for (size_t i = 0; i < plan.size(); ++i) {
        const AnchorPlan& ap = plan[i];
        // Scans stay between neighboring tangencies (or parent ends):
        // the first crossing lies well inside, so these are safety rails.
        Real lo_lim = i == 0 ? node.band.lo : plan[i - 1].t;
        Real hi_lim = i + 1 < plan.size() ? plan[i + 1].t : node.band.hi;
        SNSNode lk, rk;
        if (ap.left) lk = side_child(next, ap.t, -1, lo_lim, init, n + 1, &out.retreats);
        if (ap.right) rk = side_child(next, ap.t, +1, hi_lim, init, n + 1, &out.retreats);
        Real w = 0;
        if (ap.left) w = band_width(lk);
        if (ap.right && (!ap.left || band_width(rk) < w)) w = band_width(rk);
        out.anchors.push_back(SNSAnchor{ap.t, n + 1, w / 8});
        if (ap.left) out.kids.push_back(std::move(lk));
        if (ap.right) out.kids.push_back(std::move(rk));
    }
    return out;
}

// m = 2: each band carries two usable tangencies of the next curve, the
// preimage z of 0 (a zero of the order-2 divided trace) and, once the
// band lives at level >= 2, its +2 endpoint w (the factorization pins
// the companion trace to 2 wherever x_n = 2 from level 2 on, and w was
// itself constructed as a tangency, so the next curve touches +2 there).
// The two children grow toward each other: right from min(z, w), left
// from max(z, w).
//
// At the root (level 1) the +2 endpoint is NOT a tangency of the level-2
// curve -- the companion trace differs from 2 at every level-1 band
// endpoint -- so both children attach to z instead, one on each side.
Expansion expand_m2(const Model& model, const SNSNode& node) {
    const int n = node.level;
    const Band& b = node.band;
    Curve next = [&](const Real& t) { return x_curve(model, n + 1, t); };
    Real init = band_width(node) / Real(1 << 17);
    Real z = monotone_preimage(model, n, b, Real(0));

    Expansion out;
    if (n == 1) {
        SNSNode lk = side_child(next, z, -1, b.lo, init, 2, &out.retreats);
        SNSNode rk = side_child(next, z, +1, b.hi, init, 2, &out.retreats);
        Real w = band_width(lk) < band_width(rk) ? band_width(lk) : band_width(rk);
        out.anchors.push_back(SNSAnchor{z, 2, w / 8});
        out.kids.push_back(std::move(lk));
        out.kids.push_back(std::move(rk));
        return out;
    }

    Real w = b.increasing ? b.hi : b.lo; // the +2 endpoint
    Real t0 = b.increasing ? z : w;
    Real t1 = b.increasing ? w : z;
    SNSNode rk = side_child(next, t0, +1, t1, init, n + 1, &out.retreats);
    SNSNode lk = side_child(next, t1, -1, t0, init, n + 1, &out.retreats);
    if (rk.band.hi > lk.band.lo) {
        throw PrecisionError("expand_node: the two children overlap");
    }
    out.anchors.push_back(SNSAnchor{t0, n + 1, band_width(rk) / 8});
    out.anchors.push_back(SNSAnchor{t1, n + 1, band_width(lk) / 8});
    out.kids.push_back(std::move(rk));
    out.kids.push_back(std::move(lk));
    return out;
}

// Structural checks on a freshly built child: nested in the parent,
// +-2 at the endpoints per direction, |x| <= 2 and a constant derivative
// sign across 32 interior samples.  All failures are retryable.
void verify_child(const Model& model, const SNSNode& parent, const SNSNode& child) {
    const Band& pb = parent.band;
    const Band& cb = child.band;
    Real scale = abs(pb.lo) > abs(pb.hi) ? abs(pb.lo) : abs(pb.hi);
    if (scale < 1) scale = 1;
    Real tol = rel_eps(16) * scale;
    if (cb.lo < pb.lo - tol || cb.hi > pb.hi + tol) {
        throw PrecisionError("verify_child: child escapes its parent");
    }
    if (!(cb.lo < cb.hi)) {
        throw PrecisionError("verify_child: degenerate child band");
    }
    Curve f = [&](const Real& t) { return x_curve(model, child.level, t); };
    auto check_end = [&](const Real& t, int target) {
        CurvePoint p = f(t);
        Real s = abs(p.dv);
        Real ts = abs(t);
        if (ts > 1) s *= ts;
        if (s < 1) s = 1;
        if (abs(p.v - 2 * target) > rel_eps(32) * s) {
            throw PrecisionError("verify_child: endpoint value is not +-2");
        }
    };
    check_end(cb.lo, cb.increasing ? -1 : +1);
    check_end(cb.hi, cb.increasing ? +1 : -1);
    int want = cb.increasing ? +1 : -1;
    for (const Real& t : chebyshev_points(cb.lo, cb.hi, 32)) {
        CurvePoint p = f(t);
        if (abs(p.v) > 2 + rel_eps(16)) {
            throw PrecisionError("verify_child: sample leaves [-2, 2]");
        }
        if (sgn(p.dv) != want) {
            throw PrecisionError("verify_child: derivative sign is not constant");
        }
    }
}

SNSTree build_once(const Model& model, int root_band_index, int depth) {
    SNSTree tree;
    tree.model = model;
    tree.depth = depth;
    tree.root_band_index = root_band_index;
    tree.precision_bits = working_precision_bits();
    tree.levels.push_back({sns_root(model, root_band_index)});

    for (int g = 1; g < depth; ++g) {
        size_t nn = tree.levels.back().size();
        std::vector<std::vector<SNSNode>> kid_buckets(nn);
        std::vector<std::vector<SNSAnchor>> anchor_buckets(nn);
        std::vector<long> retreat_buckets(nn, 0);
        parallel_for(nn, [&](size_t i) {
            const SNSNode& parent = tree.levels.back()[i];
            try {
                kid_buckets[i] = expand_node(model, parent, &anchor_buckets[i],
                                             &retreat_buckets[i]);
                for (const SNSNode& k : kid_buckets[i]) {
                    verify_child(model, parent, k);
                }
                for (const SNSAnchor& a : anchor_buckets[i]) {
                    verify_anchor(model, a);
                }
            } catch (const PrecisionError& e) {
                throw PrecisionError(lineage(g, i) + ": " + e.what());
            } catch (const InvariantError& e) {
                throw InvariantError(lineage(g, i) + ": " + e.what());
            }
        });

        std::vector<SNSNode> gen;
        for (size_t i = 0; i < nn; ++i) {
            SNSNode& parent = tree.levels.back()[i];
            for (SNSNode& k : kid_buckets[i]) {
                k.parent = static_cast<long>(i);
                parent.children.push_back(static_cast<long>(gen.size()));
                gen.push_back(std::move(k));
            }
            for (SNSAnchor& a : anchor_buckets[i]) {
                tree.anchors.push_back(std::move(a));
            }
            tree.scan_retreats += retreat_buckets[i];
        }
        // Generations are ordered by left endpoint with at most shared
        // endpoints between neighbors (within a shared-endpoint slack).
        for (size_t i = 1; i < gen.size(); ++i) {
            Real overlap = gen[i - 1].band.hi - gen[i].band.lo;
            Real scale = abs(gen[i].band.lo);
            if (scale < 1) scale = 1;
            if (overlap > rel_eps(16) * scale) {
                throw PrecisionError("build_sns: sibling bands overlap");
            }
        }
        tree.levels.push_back(std::move(gen));
    }
    return tree;
}

} // namespace

int sns_branching(int m) {
    if (m < 2) throw ConfigError("sns_branching: m must be >= 2");
    if (m == 2) return 2;
    int m0 = (m + 3) / 4;
    int m1 = (3 * m) / 4;
    return 2 * (m1 - m0);
}

SNSNode sns_root(const Model& model, int band_index) {
    validate(model);
    if (model.m == 1) {
        throw UnsupportedError(
            "sns_root: the nested construction is undefined for m = 1 "
            "(no usable tangency values between -2 and 2)");
    }
    if (band_index < 0 || band_index >= 2 * model.m) {
        throw ConfigError("sns_root: band_index must lie in [0, 2m)");
    }
    BandSet bs = isolate_bands(model, 1);
    SNSNode root;
    root.band = bs.bands.at(static_cast<size_t>(band_index));
    root.level = 1;
    root.parent = -1;
    return root;
}

std::vector<SNSNode> expand_node(const Model& model, const SNSNode& node,
                                 std::vector<SNSAnchor>* anchors,
                                 long* retreats) {
    validate(model);
    if (model.m == 1) {
        throw UnsupportedError("expand_node: the nested construction is undefined for m = 1");
    }
    if (node.level < 1) {
        throw ConfigError("expand_node: node level must be >= 1");
    }
    Expansion e = model.m == 2 ? expand_m2(model, node) : expand_m_gt2(model, node);
    if (static_cast<int>(e.kids.size()) != sns_branching(model.m)) {
        throw InvariantError("expand_node: child count does not match the branching factor");
    }
    std::sort(e.kids.begin(), e.kids.end(),
              [](const SNSNode& a, const SNSNode& b) { return a.band.lo < b.band.lo; });
    if (anchors) {
        for (SNSAnchor& a : e.anchors) anchors->push_back(std::move(a));
    }
    if (retreats) *retreats += e.retreats;
    return std::move(e.kids);
}

void verify_anchor(const Model& model, const SNSAnchor& anchor) {
    if (!(anchor.probe_h > 0)) {
        throw PrecisionError("verify_anchor: nonpositive probe offset");
    }
    Curve f = [&](const Real& t) { return x_curve(model, anchor.level, t); };
    CurvePoint mid = f(anchor.t);
    CurvePoint lft = f(anchor.t - anchor.probe_h);
    CurvePoint rgt = f(anchor.t + anchor.probe_h);
    Real vscale = abs(mid.v);
    if (vscale < 1) vscale = 1;
    if (abs(mid.v - 2) > rel_eps(32) * vscale) {
        throw PrecisionError("verify_anchor: value at the anchor is not +2");
    }
    Real sd = lft.v - 2 * mid.v + rgt.v;
    if (!(sd < 0)) {
        throw PrecisionError("verify_anchor: second difference is not negative");
    }
    // A located tangency carries derivative ~ curvature * location error;
    // |sd|/(8 probe_h) allows location error up to probe_h / 8.
    if (abs(mid.dv) * 8 * anchor.probe_h > -sd) {
        throw PrecisionError("verify_anchor: derivative too large for a tangency");
    }
}

SNSTree build_sns(const Model& model, int root_band_index, int depth) {
    validate(model);
    if (model.m == 1) {
        throw UnsupportedError("build_sns: the nested construction is undefined for m = 1");
    }
    if (depth < 1) throw ConfigError("build_sns: depth must be >= 1");
    double gen_count = 1;
    for (int g = 1; g < depth; ++g) {
        gen_count *= sns_branching(model.m);
        if (gen_count > 1000000.0) {
            throw LimitError("build_sns: a generation would exceed 10^6 nodes");
        }
    }
    unsigned base = working_precision_bits();
    unsigned extra = 0;
    for (int attempt = 0;; ++attempt) {
        PrecisionScope scope(base + extra);
        try {
            return build_once(model, root_band_index, depth);
        } catch (const PrecisionError&) {
            if (attempt >= 3) throw;
            extra = extra == 0 ? 64 : extra * 2;
        }
    }
}

SNSStats sns_stats(const SNSTree& tree) {
    if (tree.depth < 2 || tree.levels.size() < 2) {
        throw ConfigError("sns_stats: tree depth must be >= 2");
    }
    PrecisionScope scope(tree.precision_bits);
    const Model& model = tree.model;
    Real gamma = gamma_value(model.m);

    SNSStats out;
    out.per_level.resize(tree.levels.size());
    for (size_t g = 0; g < tree.levels.size(); ++g) {
        const std::vector<SNSNode>& nodes = tree.levels[g];
        size_t nn = nodes.size();
        std::vector<Real> wmin(nn), wmax(nn), dxm(nn), dym(nn), ym(nn);
        parallel_for(nn, [&](size_t i) {
            const SNSNode& nd = nodes[i];
            Real w = nd.band.hi - nd.band.lo;
            wmin[i] = w;
            wmax[i] = w;
            Real mdx = 0, mdy = 0, my = 0;
            std::vector<Real> ts = chebyshev_points(nd.band.lo, nd.band.hi, 32);
            ts.push_back(nd.band.lo);
            ts.push_back(nd.band.hi);
            for (const Real& t : ts) {
                TraceJet j = trace_eval(model, nd.level, t);
                Real adx = abs(j.dx), ady = abs(j.dy), ay = abs(j.y - 2);
                if (adx > mdx) mdx = adx;
                if (ady > mdy) mdy = ady;
                if (ay > my) my = ay;
            }
            dxm[i] = mdx;
            dym[i] = mdy;
            ym[i] = my;
        });
        SNSLevelStats st;
        st.level = static_cast<int>(g) + 1;
        st.count = static_cast<long>(nn);
        st.min_width = wmin.empty() ? Real(0) : wmin[0];
        st.max_width = st.min_width;
        st.max_abs_dx = 0;
        st.max_abs_dy = 0;
        st.max_abs_ymin2 = 0;
        for (size_t i = 0; i < nn; ++i) {
            if (wmin[i] < st.min_width) st.min_width = wmin[i];
            if (wmax[i] > st.max_width) st.max_width = wmax[i];
            if (dxm[i] > st.max_abs_dx) st.max_abs_dx = dxm[i];
            if (dym[i] > st.max_abs_dy) st.max_abs_dy = dym[i];
            if (ym[i] > st.max_abs_ymin2) st.max_abs_ymin2 = ym[i];
        }
        st.mhat = st.max_abs_dx / pow(gamma, st.level);
        out.per_level[g] = st;
    }

    out.mhat = 0;
    for (const SNSLevelStats& st : out.per_level) {
        if (st.mhat > out.mhat) out.mhat = st.mhat;
    }

    // Least-squares slope of -ln(min width) against the level, over the
    // last half of the generations (always at least two points).
    int depth = static_cast<int>(tree.levels.size());
    int n0 = depth - std::max(1, depth / 2) + 1;
    if (n0 > depth - 1) n0 = depth - 1;
    out.fit_lo = n0;
    out.fit_hi = depth;
    Real sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int n = n0; n <= depth; ++n) {
        Real x = n;
        Real y = -log(out.per_level[static_cast<size_t>(n - 1)].min_width);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    out.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    if (depth >= 3 && out.slope > 0) {
        out.empirical_estimate = log(Real(sns_branching(model.m))) / out.slope;
        out.has_estimate = true;
    } else {
        out.empirical_estimate = 0;
        out.has_estimate = false;
    }
    return out;
}

Real dim_lower_estimate(const SNSTree& tree) {
    if (tree.depth < 3 || tree.levels.size() < 3) {
        throw ConfigError("dim_lower_estimate: tree depth must be >= 3");
    }
    SNSStats st = sns_stats(tree);
    if (!st.has_estimate) {
        throw PrecisionError("dim_lower_estimate: width-decay fit produced no usable slope");
    }
    return st.empirical_estimate;
}

} // namespace gtm
