#include <gtm/gtm.h>

#include <cstring>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "core/real.hpp"
#include "core/tracemap.hpp"
#include "core/bands.hpp"
#include "core/sns.hpp"
#include "core/bounds.hpp"
#include "core/serialize.hpp"

// Opaque handle bodies.  Plain aggregates: ownership is new/delete through
// the paired _free calls, no shared state between handles.

struct gtm_ctx {
    gtm::Model model;
    unsigned requested_bits = 0; // 0 = automatic policy
};

struct gtm_bandset {
    gtm::BandSet set;
};

struct gtm_sns {
    gtm::SNSTree tree;
};

namespace {

using gtm::Real;

constexpr long kWordCap = 10000000; // matches the library-wide word-length cap

thread_local std::string g_last_error;

void set_last_error(const std::string& msg) { g_last_error = msg; }

gtm_status status_of(const gtm::Error& e) {
    switch (e.kind()) {
        case gtm::Error::Kind::config: return GTM_ERR_CONFIG;
        case gtm::Error::Kind::invariant: return GTM_ERR_INVARIANT;
        case gtm::Error::Kind::precision: return GTM_ERR_PRECISION;
        case gtm::Error::Kind::unsupported: return GTM_ERR_UNSUPPORTED;
        case gtm::Error::Kind::limit: return GTM_ERR_LIMIT;
        case gtm::Error::Kind::io: return GTM_ERR_IO;
    }
    return GTM_ERR_INTERNAL;
}

// Run a callable, translating exceptions into statuses.
template <typename Fn>
gtm_status run(Fn&& fn) noexcept {
    try {
        fn();
        return GTM_OK;
    } catch (const gtm::Error& e) {
        set_last_error(e.what());
        return status_of(e);
    } catch (const std::exception& e) {
        set_last_error(e.what());
        return GTM_ERR_INTERNAL;
    } catch (...) {
        set_last_error("unknown failure");
        return GTM_ERR_INTERNAL;
    }
}

void require(bool cond, const char* msg) {
    if (!cond) throw gtm::ConfigError(msg);
}

// Staged output: capacity-check every destination before writing any, so a
// failing call leaves caller buffers untouched.
struct OutStr {
    char* buf;
    size_t cap;
    std::string text;
};

void copy_all(std::vector<OutStr>& outs) {
    for (const OutStr& o : outs) {
        if (!o.buf) continue;
        if (o.text.size() + 1 > o.cap)
            throw gtm::ConfigError("output buffer too small (need " +
                                   std::to_string(o.text.size() + 1) + " bytes)");
    }
    for (const OutStr& o : outs) {
        if (!o.buf) continue;
        std::memcpy(o.buf, o.text.c_str(), o.text.size() + 1);
    }
}

void copy_one(const std::string& text, char* buf, size_t cap) {
    std::vector<OutStr> v{{buf, cap, text}};
    copy_all(v);
}

unsigned effective_bits(const gtm_ctx* ctx, int level) {
    if (ctx->requested_bits != 0) return ctx->requested_bits;
    return gtm::default_precision_bits(ctx->model, level < 0 ? 0 : level);
}

Real relative_gap(const Real& a, const Real& b) {
    Real scale = 1;
    if (abs(a) > scale) scale = abs(a);
    if (abs(b) > scale) scale = abs(b);
    return abs(a - b) / scale;
}

} // namespace

extern "C" {

const char* gtm_version(void) { return "1.0.0"; }

const char* gtm_last_error(void) { return g_last_error.c_str(); }

/* ------------------------------------------------------------------ model */

gtm_status gtm_ctx_new(int m, const char* lambda_decimal,
                       unsigned precision_bits, gtm_ctx** out) {
    return run([&] {
        require(out != nullptr, "gtm_ctx_new: out is NULL");
        require(lambda_decimal != nullptr, "gtm_ctx_new: lambda_decimal is NULL");
        require(precision_bits == 0 || precision_bits >= 64,
                "gtm_ctx_new: precision_bits must be 0 (auto) or >= 64");
        gtm::Model model;
        model.m = m;
        model.lambda = lambda_decimal;
        gtm::validate(model);
        *out = new gtm_ctx{std::move(model), precision_bits};
    });
}

void gtm_ctx_free(gtm_ctx* ctx) { delete ctx; }

unsigned gtm_ctx_effective_bits(const gtm_ctx* ctx, int level) {
    if (!ctx) return 0;
    try {
        return effective_bits(ctx, level);
    } catch (...) {
        return 0;
    }
}

/* ------------------------------------------------------------- evaluation */

gtm_status gtm_trace_eval(gtm_ctx* ctx, int level, const char* t_decimal,
                          char* x_out, size_t x_cap,
                          char* y_out, size_t y_cap,
                          char* dx_out, size_t dx_cap) {
    return run([&] {
        require(ctx != nullptr, "gtm_trace_eval: ctx is NULL");
        require(t_decimal != nullptr, "gtm_trace_eval: t_decimal is NULL");
        require(level >= 0, "gtm_trace_eval: level must be >= 0");
        gtm::PrecisionScope scope(effective_bits(ctx, level));
        Real t = gtm::parse_decimal(t_decimal);
        gtm::TraceJet jet = gtm::trace_eval(ctx->model, level, t);
        std::vector<OutStr> outs{
            {x_out, x_cap, x_out ? gtm::to_decimal(jet.x) : std::string()},
            {y_out, y_cap, y_out ? gtm::to_decimal(jet.y) : std::string()},
            {dx_out, dx_cap, dx_out ? gtm::to_decimal(jet.dx) : std::string()},
        };
        copy_all(outs);
    });
}

gtm_status gtm_word_trace(gtm_ctx* ctx, int level, const char* t_decimal,
                          char* x_out, size_t x_cap) {
    return run([&] {
        require(ctx != nullptr, "gtm_word_trace: ctx is NULL");
        require(t_decimal != nullptr, "gtm_word_trace: t_decimal is NULL");
        require(level >= 0, "gtm_word_trace: level must be >= 0");
        gtm::PrecisionScope scope(effective_bits(ctx, level));
        Real t = gtm::parse_decimal(t_decimal);
        Real x = gtm::word_oracle(ctx->model, level, t, kWordCap);
        copy_one(gtm::to_decimal(x), x_out, x_cap);
    });
}

gtm_status gtm_oracle_check(gtm_ctx* ctx, int level,
                            const char* t_lo, const char* t_hi,
                            long grid_count, long row_count,
                            unsigned long long seed,
                            char* max_dev_out, size_t max_dev_cap,
                            int* ok_out) {
    return run([&] {
        require(ctx != nullptr, "gtm_oracle_check: ctx is NULL");
        require(t_lo != nullptr && t_hi != nullptr,
                "gtm_oracle_check: t range is NULL");
        require(level >= 0, "gtm_oracle_check: level must be >= 0");
        require(grid_count >= 0 && row_count >= 0,
                "gtm_oracle_check: negative point count");
        require(grid_count + row_count > 0,
                "gtm_oracle_check: no points requested");
        gtm::PrecisionScope scope(effective_bits(ctx, level));
        Real lo = gtm::parse_decimal(t_lo);
        Real hi = gtm::parse_decimal(t_hi);
        require(lo < hi, "gtm_oracle_check: need t_lo < t_hi");

        std::vector<Real> points;
        points.reserve(static_cast<size_t>(grid_count + row_count));
        if (grid_count == 1) {
            points.push_back((lo + hi) / 2);
        } else {
            for (long i = 0; i < grid_count; ++i)
                points.push_back(lo + (hi - lo) * i / (grid_count - 1));
        }
        std::mt19937_64 rng(seed);
        for (long i = 0; i < row_count; ++i) {
            Real u = ldexp(Real(static_cast<double>(rng() >> 11)), -53);
            points.push_back(lo + (hi - lo) * u);
        }

        Real max_dev = 0;
        for (const Real& t : points) {
            gtm::TraceJet jet = gtm::trace_eval(ctx->model, level, t);
            auto mats = gtm::matrix_oracle(ctx->model, level, t, kWordCap);
            Real x_mat = mats.first.trace();
            Real y_mat = (mats.first * mats.second).trace();
            Real x_word = gtm::word_oracle(ctx->model, level, t, kWordCap);
            Real dev = relative_gap(jet.x, x_mat);
            dev = std::max(dev, relative_gap(jet.x, x_word), std::less<Real>());
            dev = std::max(dev, relative_gap(x_mat, x_word), std::less<Real>());
            dev = std::max(dev, relative_gap(jet.y, y_mat), std::less<Real>());
            if (dev > max_dev) max_dev = dev;
        }
        bool ok = max_dev <= gtm::rel_eps(32);
        std::vector<OutStr> outs{
            {max_dev_out, max_dev_cap,
             max_dev_out ? gtm::to_decimal(max_dev) : std::string()},
        };
        copy_all(outs);
        if (ok_out) *ok_out = ok ? 1 : 0;
    });
}

gtm_status gtm_sample_curve_csv(gtm_ctx* ctx, int level,
                                const char* t_lo, const char* t_hi,
                                long count, const char* path) {
    return run([&] {
        require(ctx != nullptr, "gtm_sample_curve_csv: ctx is NULL");
        require(t_lo != nullptr && t_hi != nullptr,
                "gtm_sample_curve_csv: t range is NULL");
        require(path != nullptr, "gtm_sample_curve_csv: path is NULL");
        require(level >= 0, "gtm_sample_curve_csv: level must be >= 0");
        gtm::PrecisionScope scope(effective_bits(ctx, level));
        Real lo = gtm::parse_decimal(t_lo);
        Real hi = gtm::parse_decimal(t_hi);
        auto rows = gtm::sample_curve(ctx->model, level, lo, hi, count);
        gtm::write_samples_csv(rows, path);
    });
}

/* ------------------------------------------------------------------ bands */

gtm_status gtm_bands_isolate(gtm_ctx* ctx, int level, gtm_bandset** out) {
    return run([&] {
        require(ctx != nullptr, "gtm_bands_isolate: ctx is NULL");
        require(out != nullptr, "gtm_bands_isolate: out is NULL");
        gtm::PrecisionScope scope(effective_bits(ctx, level));
        gtm::BandSet set = gtm::isolate_bands(ctx->model, level);
        *out = new gtm_bandset{std::move(set)};
    });
}

void gtm_bandset_free(gtm_bandset* bs) { delete bs; }

long gtm_bandset_count(const gtm_bandset* bs) {
    if (!bs) return -1;
    return static_cast<long>(bs->set.bands.size());
}

unsigned gtm_bandset_precision_bits(const gtm_bandset* bs) {
    return bs ? bs->set.precision_bits : 0;
}

gtm_status gtm_bandset_get(const gtm_bandset* bs, long index,
                           char* lo_out, size_t lo_cap,
                           char* hi_out, size_t hi_cap,
                           int* increasing_out) {
    return run([&] {
        require(bs != nullptr, "gtm_bandset_get: handle is NULL");
        require(index >= 0 &&
                    index < static_cast<long>(bs->set.bands.size()),
                "gtm_bandset_get: index out of range");
        const gtm::Band& b = bs->set.bands[static_cast<size_t>(index)];
        std::vector<OutStr> outs{
            {lo_out, lo_cap, lo_out ? gtm::to_decimal(b.lo) : std::string()},
            {hi_out, hi_cap, hi_out ? gtm::to_decimal(b.hi) : std::string()},
        };
        copy_all(outs);
        if (increasing_out) *increasing_out = b.increasing ? 1 : 0;
    });
}

gtm_status gtm_bandset_write_csv(const gtm_bandset* bs, const char* path) {
    return run([&] {
        require(bs != nullptr, "gtm_bandset_write_csv: handle is NULL");
        require(path != nullptr, "gtm_bandset_write_csv: path is NULL");
        gtm::write_bands_csv(bs->set, path);
    });
}

long gtm_bandset_touch_count(const gtm_bandset* bs) {
    if (!bs) return -1;
    try {
        return gtm::touching_pairs(bs->set);
    } catch (...) {
        return -1;
    }
}

gtm_status gtm_bandset_symmetry_deviation(const gtm_bandset* bs,
                                          char* out, size_t cap) {
    return run([&] {
        require(bs != nullptr, "gtm_bandset_symmetry_deviation: handle is NULL");
        copy_one(gtm::to_decimal(gtm::symmetry_deviation(bs->set)), out, cap);
    });
}

gtm_status gtm_probe_inclusion_json(gtm_ctx* ctx, int level,
                                    int samples_per_band, const char* path,
                                    long* counterexamples_out,
                                    unsigned* precision_bits_out) {
    return run([&] {
        require(ctx != nullptr, "gtm_probe_inclusion_json: ctx is NULL");
        require(path != nullptr, "gtm_probe_inclusion_json: path is NULL");
        gtm::PrecisionScope scope(effective_bits(ctx, level + 2));
        gtm::InclusionReport rep =
            gtm::probe_inclusion(ctx->model, level, samples_per_band);
        gtm::write_inclusion_json(rep, path);
        if (counterexamples_out)
            *counterexamples_out = static_cast<long>(rep.counterexamples.size());
        if (precision_bits_out) *precision_bits_out = rep.precision_bits;
    });
}

/* ----------------------------------------------------- nested band family */

gtm_status gtm_sns_build(gtm_ctx* ctx, int root_band_index, int depth,
                         gtm_sns** out) {
    return run([&] {
        require(ctx != nullptr, "gtm_sns_build: ctx is NULL");
        require(out != nullptr, "gtm_sns_build: out is NULL");
        gtm::PrecisionScope scope(effective_bits(ctx, depth));
        gtm::SNSTree tree = gtm::build_sns(ctx->model, root_band_index, depth);
        *out = new gtm_sns{std::move(tree)};
    });
}

void gtm_sns_free(gtm_sns* tree) { delete tree; }

int gtm_sns_level_count(const gtm_sns* tree) {
    return tree ? static_cast<int>(tree->tree.levels.size()) : -1;
}

long gtm_sns_node_count(const gtm_sns* tree, int level) {
    if (!tree) return -1;
    if (level < 1 || level > static_cast<int>(tree->tree.levels.size()))
        return -1;
    return static_cast<long>(tree->tree.levels[static_cast<size_t>(level - 1)].size());
}

int gtm_sns_branching(const gtm_sns* tree) {
    if (!tree) return -1;
    try {
        return gtm::sns_branching(tree->tree.model.m);
    } catch (...) {
        return -1;
    }
}

unsigned gtm_sns_precision_bits(const gtm_sns* tree) {
    return tree ? tree->tree.precision_bits : 0;
}

gtm_status gtm_sns_write_json(const gtm_sns* tree, long seed, const char* path) {
    return run([&] {
        require(tree != nullptr, "gtm_sns_write_json: handle is NULL");
        require(path != nullptr, "gtm_sns_write_json: path is NULL");
        const gtm::SNSTree& t = tree->tree;
        gtm::DimensionReport report = gtm::theorem_bound(t.model.m);
        if (t.depth >= 2) {
            gtm::SNSStats stats = gtm::sns_stats(t);
            gtm::write_sns_json(t, &stats, &report, seed, path);
        } else {
            gtm::write_sns_json(t, nullptr, &report, seed, path);
        }
    });
}

gtm_status gtm_sns_dim_estimate(const gtm_sns* tree, char* out, size_t cap) {
    return run([&] {
        require(tree != nullptr, "gtm_sns_dim_estimate: handle is NULL");
        Real est = gtm::dim_lower_estimate(tree->tree);
        copy_one(gtm::to_decimal(est), out, cap);
    });
}

/* ----------------------------------------------------------- closed forms */

gtm_status gtm_lambda_m(int m, long* out) {
    return run([&] {
        require(out != nullptr, "gtm_lambda_m: out is NULL");
        *out = gtm::lambda_m(m);
    });
}

gtm_status gtm_gamma_m(int m, char* out, size_t cap) {
    return run([&] {
        gtm::PrecisionScope scope(128);
        copy_one(gtm::to_decimal(gtm::gamma_value(m)), out, cap);
    });
}

gtm_status gtm_bound(int m, char* bound_out, size_t bound_cap,
                     char* weak_out, size_t weak_cap) {
    return run([&] {
        gtm::DimensionReport r = gtm::theorem_bound(m);
        std::vector<OutStr> outs{
            {bound_out, bound_cap,
             bound_out ? gtm::to_decimal(r.bound) : std::string()},
            {weak_out, weak_cap,
             weak_out ? gtm::to_decimal(r.weak_bound) : std::string()},
        };
        copy_all(outs);
    });
}

gtm_status gtm_verify_gamma_recursion(int m, int* ok_out,
                                      char* rel_err_out, size_t rel_err_cap) {
    return run([&] {
        Real rel_err;
        bool ok = gtm::verify_gamma_recursion(m, &rel_err);
        if (rel_err_out)
            copy_one(gtm::to_decimal(rel_err), rel_err_out, rel_err_cap);
        if (ok_out) *ok_out = ok ? 1 : 0;
    });
}

gtm_status gtm_bounds_write(const int* ms, int count, int as_json,
                            const char* path) {
    return run([&] {
        require(ms != nullptr, "gtm_bounds_write: ms is NULL");
        require(count > 0, "gtm_bounds_write: count must be positive");
        require(path != nullptr, "gtm_bounds_write: path is NULL");
        std::vector<gtm::DimensionReport> rows;
        rows.reserve(static_cast<size_t>(count));
        for (int i = 0; i < count; ++i) rows.push_back(gtm::theorem_bound(ms[i]));
        gtm::write_bounds(rows, as_json != 0, path);
    });
}

} // extern "C"
