// Command-line surface for the trace-map spectral toolkit.  Links only the
// shared C API; all numeric work happens behind that boundary.  Data goes to
// --out ("-" = stdout); summaries go to stderr so piped output stays clean.
//
// Exit codes: 0 success, 2 invariant violation (count mismatch, oracle
// deviation), 3 precision exhaustion, 4 bad configuration / usage.

#include <gtm/gtm.h>

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

namespace {

constexpr size_t kBuf = 512;

int exit_code(gtm_status st) {
    switch (st) {
        case GTM_OK: return 0;
        case GTM_ERR_INVARIANT: return 2;
        case GTM_ERR_INTERNAL: return 2;
        case GTM_ERR_PRECISION: return 3;
        default: return 4; // config, unsupported, limit, io
    }
}

int fail(gtm_status st) {
    std::fprintf(stderr, "error: %s\n", gtm_last_error());
    return exit_code(st);
}

struct CtxDeleter {
    void operator()(gtm_ctx* c) const { gtm_ctx_free(c); }
};
using CtxPtr = std::unique_ptr<gtm_ctx, CtxDeleter>;

struct BandsDeleter {
    void operator()(gtm_bandset* b) const { gtm_bandset_free(b); }
};
using BandsPtr = std::unique_ptr<gtm_bandset, BandsDeleter>;

struct SnsDeleter {
    void operator()(gtm_sns* t) const { gtm_sns_free(t); }
};
using SnsPtr = std::unique_ptr<gtm_sns, SnsDeleter>;

// "lo:hi" -> two decimal strings (the first ':' splits; decimals never
// contain one).
bool split_range(const std::string& s, std::string& lo, std::string& hi) {
    auto pos = s.find(':');
    if (pos == std::string::npos || pos == 0 || pos + 1 == s.size()) return false;
    lo = s.substr(0, pos);
    hi = s.substr(pos + 1);
    return true;
}

// "--m" for bounds: single value "7", list "2,3,5", or range "2..20".
std::vector<int> parse_m_list(const std::string& s) {
    std::vector<int> ms;
    auto dots = s.find("..");
    if (dots != std::string::npos) {
        int a = std::stoi(s.substr(0, dots));
        int b = std::stoi(s.substr(dots + 2));
        if (b < a) throw std::runtime_error("--m range: upper end below lower end");
        if (static_cast<long>(b) - a >= 1000000)
            throw std::runtime_error("--m range: more than 10^6 entries");
        for (int v = a; v <= b; ++v) ms.push_back(v);
        return ms;
    }
    size_t start = 0;
    while (start <= s.size()) {
        auto comma = s.find(',', start);
        std::string tok = s.substr(start, comma == std::string::npos
                                              ? std::string::npos
                                              : comma - start);
        if (tok.empty()) throw std::runtime_error("--m: empty entry in list");
        ms.push_back(std::stoi(tok));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return ms;
}

struct EvalArgs {
    int m = 2;
    std::string lambda = "1.0";
    int level = 1;
    std::string range;
    long count = 1000;
    bool check_oracle = false;
    unsigned long long seed = 0;
    unsigned bits = 0;
    std::string out = "-";
};

int run_eval(const EvalArgs& a) {
    gtm_ctx* raw = nullptr;
    gtm_status st = gtm_ctx_new(a.m, a.lambda.c_str(), a.bits, &raw);
    if (st != GTM_OK) return fail(st);
    CtxPtr ctx(raw);

    std::string lo, hi;
    std::string range = a.range;
    if (range.empty()) {
        // Default window: the spectrum-bearing bracket [-lambda-3, lambda+3].
        double lam = std::strtod(a.lambda.c_str(), nullptr);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g:%.17g", -lam - 3.0, lam + 3.0);
        range = buf;
    }
    if (!split_range(range, lo, hi)) {
        std::fprintf(stderr, "error: --range must look like lo:hi\n");
        return 4;
    }

    st = gtm_sample_curve_csv(ctx.get(), a.level, lo.c_str(), hi.c_str(),
                              a.count, a.out.c_str());
    if (st != GTM_OK) return fail(st);
    std::fprintf(stderr, "eval: m=%d lambda=%s level=%d rows=%ld range=%s:%s precision_bits=%u\n",
                 a.m, a.lambda.c_str(), a.level, a.count, lo.c_str(), hi.c_str(),
                 gtm_ctx_effective_bits(ctx.get(), a.level));

    if (a.check_oracle) {
        char dev[kBuf];
        int ok = 0;
        st = gtm_oracle_check(ctx.get(), a.level, lo.c_str(), hi.c_str(),
                              0, 10, a.seed, dev, sizeof dev, &ok);
        if (st != GTM_OK) return fail(st);
        std::fprintf(stderr, "oracle: rows=10 seed=%llu max_rel_dev=%s ok=%d\n",
                     a.seed, dev, ok);
        if (!ok) {
            std::fprintf(stderr,
                         "error: recursion disagrees with the word/matrix oracles "
                         "beyond tolerance\n");
            return 2;
        }
    }
    return 0;
}

struct BandsArgs {
    int m = 2;
    std::string lambda = "1.0";
    int level = 1;
    unsigned bits = 0;
    std::string out = "-";
};

int run_bands(const BandsArgs& a) {
    gtm_ctx* raw = nullptr;
    gtm_status st = gtm_ctx_new(a.m, a.lambda.c_str(), a.bits, &raw);
    if (st != GTM_OK) return fail(st);
    CtxPtr ctx(raw);

    gtm_bandset* braw = nullptr;
    st = gtm_bands_isolate(ctx.get(), a.level, &braw);
    if (st != GTM_OK) return fail(st);
    BandsPtr bands(braw);

    st = gtm_bandset_write_csv(bands.get(), a.out.c_str());
    if (st != GTM_OK) return fail(st);

    char sym[kBuf];
    st = gtm_bandset_symmetry_deviation(bands.get(), sym, sizeof sym);
    if (st != GTM_OK) return fail(st);
    std::fprintf(stderr,
                 "bands: m=%d lambda=%s level=%d rows=%ld touching_pairs=%ld "
                 "symmetry_dev=%s precision_bits=%u\n",
                 a.m, a.lambda.c_str(), a.level, gtm_bandset_count(bands.get()),
                 gtm_bandset_touch_count(bands.get()), sym,
                 gtm_bandset_precision_bits(bands.get()));
    return 0;
}

struct SnsArgs {
    int m = 2;
    std::string lambda = "1.0";
    int depth = 1;
    int band_index = 0;
    long seed = 0;
    unsigned bits = 0;
    std::string out = "-";
};

int run_sns(const SnsArgs& a) {
    gtm_ctx* raw = nullptr;
    gtm_status st = gtm_ctx_new(a.m, a.lambda.c_str(), a.bits, &raw);
    if (st != GTM_OK) return fail(st);
    CtxPtr ctx(raw);

    gtm_sns* sraw = nullptr;
    st = gtm_sns_build(ctx.get(), a.band_index, a.depth, &sraw);
    if (st != GTM_OK) return fail(st);
    SnsPtr tree(sraw);

    st = gtm_sns_write_json(tree.get(), a.seed, a.out.c_str());
    if (st != GTM_OK) return fail(st);

    std::string counts;
    for (int g = 1; g <= gtm_sns_level_count(tree.get()); ++g) {
        if (g > 1) counts += ",";
        counts += std::to_string(gtm_sns_node_count(tree.get(), g));
    }
    std::fprintf(stderr,
                 "sns: m=%d lambda=%s depth=%d branching=%d level_counts=%s "
                 "precision_bits=%u\n",
                 a.m, a.lambda.c_str(), a.depth, gtm_sns_branching(tree.get()),
                 counts.c_str(), gtm_sns_precision_bits(tree.get()));

    if (a.depth >= 3) {
        char est[kBuf], bound[kBuf], weak[kBuf];
        st = gtm_sns_dim_estimate(tree.get(), est, sizeof est);
        if (st != GTM_OK) return fail(st);
        st = gtm_bound(a.m, bound, sizeof bound, weak, sizeof weak);
        if (st != GTM_OK) return fail(st);
        std::fprintf(stderr, "dimension: empirical=%s closed_form=%s weak=%s\n",
                     est, bound, weak);
    }
    return 0;
}

struct BoundsArgs {
    std::string m_spec = "2..20";
    std::string format = "csv";
    bool verify = false;
    unsigned bits = 0;
    std::string out = "-";
};

int run_bounds(const BoundsArgs& a) {
    std::vector<int> ms = parse_m_list(a.m_spec);
    if (ms.empty()) {
        std::fprintf(stderr, "error: --m selected no values\n");
        return 4;
    }
    if (a.bits != 0)
        std::fprintf(stderr,
                     "bounds: note: closed forms are evaluated at a fixed "
                     "128-bit precision; --precision-bits is ignored\n");
    gtm_status st = gtm_bounds_write(ms.data(), static_cast<int>(ms.size()),
                                     a.format == "json" ? 1 : 0, a.out.c_str());
    if (st != GTM_OK) return fail(st);
    std::fprintf(stderr, "bounds: rows=%zu format=%s precision_bits=128\n",
                 ms.size(), a.format.c_str());

    if (a.verify) {
        bool all_ok = true;
        for (int m : ms) {
            char err[kBuf];
            int ok = 0;
            st = gtm_verify_gamma_recursion(m, &ok, err, sizeof err);
            if (st != GTM_OK) return fail(st);
            std::fprintf(stderr, "gamma_recursion: m=%d ok=%d rel_err=%s\n", m,
                         ok, err);
            if (!ok) all_ok = false;
        }
        if (!all_ok) {
            std::fprintf(stderr,
                         "error: growth base fails its recursion check\n");
            return 2;
        }
    }
    return 0;
}

struct ProbeArgs {
    int m = 1;
    std::string lambda = "1.0";
    int level = 1;
    int samples = 16;
    unsigned bits = 0;
    std::string out = "-";
};

int run_probe(const ProbeArgs& a) {
    gtm_ctx* raw = nullptr;
    gtm_status st = gtm_ctx_new(a.m, a.lambda.c_str(), a.bits, &raw);
    if (st != GTM_OK) return fail(st);
    CtxPtr ctx(raw);

    long cex = 0;
    unsigned bits = 0;
    st = gtm_probe_inclusion_json(ctx.get(), a.level, a.samples, a.out.c_str(),
                                  &cex, &bits);
    if (st != GTM_OK) return fail(st);
    // A counterexample is a reported observation, not a failure: exit 0.
    std::fprintf(stderr,
                 "probe: m=%d lambda=%s level=%d samples_per_band=%d "
                 "counterexamples=%ld precision_bits=%u\n",
                 a.m, a.lambda.c_str(), a.level, a.samples, cex, bits);
    return 0;
}

void add_precision_flag(CLI::App* cmd, unsigned& bits) {
    cmd->add_option("--precision-bits", bits,
                    "Working precision in bits (0 = automatic policy)")
        ->envname("GTM_PRECISION_BITS");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trace-map spectral toolkit: band isolation, nested band "
                 "families, and dimension bounds for a family of substitution "
                 "Hamiltonians"};
    app.require_subcommand(1);

    EvalArgs ev;
    CLI::App* eval_cmd =
        app.add_subcommand("eval", "Sample (t, x, y, dx) along a trace curve");
    eval_cmd->add_option("--m", ev.m, "Substitution block length");
    eval_cmd->add_option("--lambda", ev.lambda, "Coupling (decimal string)");
    eval_cmd->add_option("--level", ev.level, "Trace level n >= 0");
    eval_cmd->add_option("--range", ev.range, "Sampling window lo:hi");
    eval_cmd->add_option("--count", ev.count, "Number of rows");
    eval_cmd->add_flag("--check-oracle", ev.check_oracle,
                       "Cross-check the recursion against word/matrix oracles");
    eval_cmd->add_option("--seed", ev.seed, "Seed for oracle sample points");
    eval_cmd->add_option("--out", ev.out, "Output path (- = stdout)");
    add_precision_flag(eval_cmd, ev.bits);

    BandsArgs ba;
    CLI::App* bands_cmd =
        app.add_subcommand("bands", "Isolate the spectral bands of one level");
    bands_cmd->add_option("--m", ba.m, "Substitution block length");
    bands_cmd->add_option("--lambda", ba.lambda, "Coupling (decimal string)");
    bands_cmd->add_option("--level", ba.level, "Band level n >= 1");
    bands_cmd->add_option("--out", ba.out, "Output path (- = stdout)");
    add_precision_flag(bands_cmd, ba.bits);

    SnsArgs sa;
    CLI::App* sns_cmd = app.add_subcommand(
        "sns", "Build the separating nested band family and its statistics");
    sns_cmd->add_option("--m", sa.m, "Substitution block length (>= 2)");
    sns_cmd->add_option("--lambda", sa.lambda, "Coupling (decimal string)");
    sns_cmd->add_option("--depth", sa.depth, "Generations to build (>= 1)");
    sns_cmd->add_option("--band-index", sa.band_index,
                        "Root band index at level 1 (default leftmost)");
    sns_cmd->add_option("--seed", sa.seed, "Seed echoed into the JSON metadata");
    sns_cmd->add_option("--out", sa.out, "Output path (- = stdout)");
    add_precision_flag(sns_cmd, sa.bits);

    BoundsArgs bo;
    CLI::App* bounds_cmd = app.add_subcommand(
        "bounds", "Closed-form dimension lower bounds per block length");
    bounds_cmd->add_option("--m", bo.m_spec,
                           "Block lengths: single (7), list (2,3,5), or range (2..20)");
    bounds_cmd->add_option("--format", bo.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    bounds_cmd->add_flag("--verify", bo.verify,
                         "Also check each growth base against its recursion");
    bounds_cmd->add_option("--out", bo.out, "Output path (- = stdout)");
    add_precision_flag(bounds_cmd, bo.bits);

    ProbeArgs pr;
    CLI::App* probe_cmd = app.add_subcommand(
        "probe", "Sample level-(n+2) bands against the union of levels n, n+1");
    probe_cmd->add_option("--m", pr.m, "Substitution block length");
    probe_cmd->add_option("--lambda", pr.lambda, "Coupling (decimal string)");
    probe_cmd->add_option("--level", pr.level, "Base level n >= 1");
    probe_cmd->add_option("--samples-per-band", pr.samples,
                          "Interior samples per band");
    probe_cmd->add_option("--out", pr.out, "Output path (- = stdout)");
    add_precision_flag(probe_cmd, pr.bits);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 4;
    }

    try {
        if (*eval_cmd) return run_eval(ev);
        if (*bands_cmd) return run_bands(ba);
        if (*sns_cmd) return run_sns(sa);
        if (*bounds_cmd) return run_bounds(bo);
        if (*probe_cmd) return run_probe(pr);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
    std::fprintf(stderr, "error: no subcommand selected\n");
    return 4;
}
