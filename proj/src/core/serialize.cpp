#include "core/serialize.hpp"

#include <cstddef>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace gtm {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* direction_word(bool increasing) {
    return increasing ? "increasing" : "decreasing";
}

ordered_json tree_node_json(const SNSTree& tree, size_t gen, size_t idx) {
    const SNSNode& node = tree.levels[gen][idx];
    ordered_json j;
    j["level"] = node.level;
    j["lo"] = to_decimal(node.band.lo);
    j["hi"] = to_decimal(node.band.hi);
    j["direction"] = direction_word(node.band.increasing);
    ordered_json kids = ordered_json::array();
    for (long c : node.children) {
        kids.push_back(tree_node_json(tree, gen + 1, static_cast<size_t>(c)));
    }
    j["children"] = std::move(kids);
    return j;
}

} // namespace

void write_text(const std::string& text, const std::string& path) {
    if (path == "-") {
        std::cout << text << std::flush;
        if (!std::cout) throw IoError("write_text: writing to stdout failed");
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write_text: cannot open '" + path + "'");
    out << text << std::flush;
    if (!out) throw IoError("write_text: writing to '" + path + "' failed");
}

std::string bands_csv(const BandSet& bands) {
    std::ostringstream os;
    os << "level,index,lo,hi,direction\n";
    for (size_t i = 0; i < bands.bands.size(); ++i) {
        const Band& b = bands.bands[i];
        os << bands.level << ',' << i << ',' << to_decimal(b.lo) << ','
           << to_decimal(b.hi) << ',' << direction_word(b.increasing) << '\n';
    }
    return os.str();
}

void write_bands_csv(const BandSet& bands, const std::string& path) {
    write_text(bands_csv(bands), path);
}

std::string samples_csv(const std::vector<CurveSample>& rows) {
    std::ostringstream os;
    os << "t,x,y,dx\n";
    for (const CurveSample& r : rows) {
        os << to_decimal(r.t) << ',' << to_decimal(r.x) << ','
           << to_decimal(r.y) << ',' << to_decimal(r.dx) << '\n';
    }
    return os.str();
}

void write_samples_csv(const std::vector<CurveSample>& rows,
                       const std::string& path) {
    write_text(samples_csv(rows), path);
}

std::string sns_json(const SNSTree& tree, const SNSStats* stats,
                     const DimensionReport* report, long seed) {
    ordered_json j;
    j["kind"] = "nested_band_family";
    j["m"] = tree.model.m;
    j["lambda"] = tree.model.lambda;
    j["seed"] = seed;
    j["depth"] = tree.depth;
    j["root_band_index"] = tree.root_band_index;
    j["precision_bits"] = tree.precision_bits;
    j["branching"] = sns_branching(tree.model.m);
    j["scan_retreats"] = tree.scan_retreats;
    if (stats) {
        ordered_json rows = ordered_json::array();
        for (const SNSLevelStats& st : stats->per_level) {
            ordered_json r;
            r["level"] = st.level;
            r["count"] = st.count;
            r["min_width"] = to_decimal(st.min_width);
            r["max_width"] = to_decimal(st.max_width);
            r["max_abs_dx"] = to_decimal(st.max_abs_dx);
            r["max_abs_ymin2"] = to_decimal(st.max_abs_ymin2);
            rows.push_back(std::move(r));
        }
        j["levels"] = std::move(rows);
        ordered_json decay;
        decay["slope"] = to_decimal(stats->slope);
        decay["fit_lo"] = stats->fit_lo;
        decay["fit_hi"] = stats->fit_hi;
        decay["mhat"] = to_decimal(stats->mhat);
        j["width_decay"] = std::move(decay);
    }
    if (report) {
        ordered_json dim;
        dim["m"] = report->m;
        dim["lambda_m"] = report->lambda;
        dim["gamma_m"] = to_decimal(report->gamma);
        dim["bound"] = to_decimal(report->bound);
        dim["weak_bound"] = to_decimal(report->weak_bound);
        if (stats && stats->has_estimate) {
            dim["empirical_estimate"] = to_decimal(stats->empirical_estimate);
        }
        j["dimension"] = std::move(dim);
    }
    j["tree"] = tree_node_json(tree, 0, 0);
    return j.dump(2) + "\n";
}

void write_sns_json(const SNSTree& tree, const SNSStats* stats,
                    const DimensionReport* report, long seed,
                    const std::string& path) {
    write_text(sns_json(tree, stats, report, seed), path);
}

std::string inclusion_json(const InclusionReport& rep) {
    ordered_json j;
    j["kind"] = "inclusion_probe";
    j["m"] = rep.model.m;
    j["lambda"] = rep.model.lambda;
    j["level"] = rep.level;
    j["samples_per_band"] = rep.samples_per_band;
    j["precision_bits"] = rep.precision_bits;
    j["bands_tested"] = rep.bands_tested;
    j["points_tested"] = rep.points_tested;
    j["tolerance"] = to_decimal(rep.tolerance);
    j["worst_margin"] = to_decimal(rep.worst_margin);
    j["counterexample_count"] = rep.counterexamples.size();
    ordered_json cex = ordered_json::array();
    for (const InclusionCounterexample& c : rep.counterexamples) {
        ordered_json r;
        r["t"] = to_decimal(c.t);
        r["margin"] = to_decimal(c.margin);
        cex.push_back(std::move(r));
    }
    j["counterexamples"] = std::move(cex);
    return j.dump(2) + "\n";
}

void write_inclusion_json(const InclusionReport& rep, const std::string& path) {
    write_text(inclusion_json(rep), path);
}

std::string bounds_json(const std::vector<DimensionReport>& rows) {
    ordered_json j;
    j["kind"] = "dimension_bounds";
    ordered_json out = ordered_json::array();
    for (const DimensionReport& r : rows) {
        ordered_json row;
        row["m"] = r.m;
        row["lambda_m"] = r.lambda;
        row["gamma_m"] = to_decimal(r.gamma);
        row["bound"] = to_decimal(r.bound);
        row["weak_bound"] = to_decimal(r.weak_bound);
        out.push_back(std::move(row));
    }
    j["rows"] = std::move(out);
    return j.dump(2) + "\n";
}

std::string bounds_csv(const std::vector<DimensionReport>& rows) {
    std::ostringstream os;
    os << "m,lambda_m,gamma_m,bound,weak_bound\n";
    for (const DimensionReport& r : rows) {
        os << r.m << ',' << r.lambda << ',' << to_decimal(r.gamma) << ','
           << to_decimal(r.bound) << ',' << to_decimal(r.weak_bound) << '\n';
    }
    return os.str();
}

void write_bounds(const std::vector<DimensionReport>& rows, bool as_json,
                  const std::string& path) {
    write_text(as_json ? bounds_json(rows) : bounds_csv(rows), path);
}

} // namespace gtm
