#ifndef GTM_CORE_SNS_HPP
#define GTM_CORE_SNS_HPP

#include <vector>

#include "core/bands.hpp"
#include "core/real.hpp"
#include "core/tracemap.hpp"

namespace gtm {

// One interval of the nested band family.  The level-n trace curve is
// strictly monotone across the band with values +-2 at the endpoints; a
// +2 endpoint produced by the construction is a point where the NEXT
// level's curve touches +2 tangentially, so refinement can continue.
struct SNSNode {
    Band band;
    int level = 0;              // trace level n of the curve monotone here
    long parent = -1;           // index into the previous generation (-1: root)
    std::vector<long> children; // indices into the next generation
};

// A tangency used by the construction: the level `level` curve satisfies
// x(t) = 2 and x'(t) = 0 with a negative second difference (local max).
// probe_h is a safe probe offset for curvature checks: an eighth of the
// narrowest child adjacent to the tangency.
struct SNSAnchor {
    Real t;
    int level = 0;
    Real probe_h;
};

// The family itself: levels[g] holds generation g+1, whose nodes carry
// trace level g+1.  Every generation splits each node into the same
// number of children (the branching factor), so generation counts grow
// geometrically.
struct SNSTree {
    Model model;
    int depth = 0;               // generations built (root = generation 1)
    int root_band_index = 0;
    unsigned precision_bits = 0; // working precision that completed the build
    long scan_retreats = 0;      // probe retreats during -2 scans (diagnostic)
    std::vector<std::vector<SNSNode>> levels;
    std::vector<SNSAnchor> anchors; // all tangencies used, in creation order
};

// Per-generation aggregates, sampled at 32 Chebyshev points per node.
struct SNSLevelStats {
    int level = 0;
    long count = 0;
    Real min_width;
    Real max_width;
    Real max_abs_dx;    // max sampled |x_n'|
    Real max_abs_dy;    // max sampled |y_n'|
    Real max_abs_ymin2; // max sampled |y_n - 2|
    Real mhat;          // max_abs_dx * gamma^-n (normalized derivative size)
};

struct SNSStats {
    std::vector<SNSLevelStats> per_level;
    Real slope;        // fitted decay rate of -ln(min width) per level
    int fit_lo = 0;    // fit window: last half of the levels
    int fit_hi = 0;
    Real mhat;         // max of the per-level normalized derivative sizes
    Real empirical_estimate; // ln(branching) / slope, when depth allows
    bool has_estimate = false;
};

// Children produced per node: 2 for m = 2, and for m > 2 the count
// 2*(floor(3m/4) - ceil(m/4)), which works out to m, m-3, m-2, m-1 for
// m = 0, 1, 2, 3 mod 4 respectively.
int sns_branching(int m);

// Generation 1: the level-1 band with the given index (0 = leftmost).
// m = 1 is rejected: the level-0 traces of the two generators differ, so
// the tangency mechanism the refinement relies on is not available.
SNSNode sns_root(const Model& model, int band_index);

// Expand one node into its ordered children (trace level node.level + 1).
// Appends every tangency used to `anchors` (with probe_h filled in) and
// accumulates scan retreats into `retreats`; both sinks are optional.
// The children are verified monotone sub-bands of the parent.
std::vector<SNSNode> expand_node(const Model& model, const SNSNode& node,
                                 std::vector<SNSAnchor>* anchors,
                                 long* retreats);

// Re-check that an anchor is a genuine tangency of its level's curve:
// value +2, derivative consistent with the curvature scale, and a
// negative second difference at offset probe_h.  Throws PrecisionError
// with a description when any part fails.
void verify_anchor(const Model& model, const SNSAnchor& anchor);

// Build the family down to `depth` generations (depth >= 1), verifying
// the structural invariants level by level: exact branching count,
// children nested in their parent, siblings ordered and disjoint up to a
// shared endpoint, |x| <= 2 along each band, constant derivative sign,
// and a genuine tangency at every anchor.  Verification failures raise
// PrecisionError and are retried at higher working precision before
// giving up.
SNSTree build_sns(const Model& model, int root_band_index, int depth);

// Aggregate width/derivative statistics and fit the width-decay slope
// over the last half of the generations (depth >= 2 required).
SNSStats sns_stats(const SNSTree& tree);

// ln(branching) / fitted decay slope: an empirical counterpart of the
// closed-form dimension lower bound (depth >= 3 required).
Real dim_lower_estimate(const SNSTree& tree);

} // namespace gtm

#endif // GTM_CORE_SNS_HPP
