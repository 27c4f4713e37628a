// File formats: CSV and JSON emitters, decimal round trips, determinism,
// and I/O failure behavior.

#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "core/bands.hpp"
#include "core/bounds.hpp"
#include "core/real.hpp"
#include "core/serialize.hpp"
#include "core/sns.hpp"
#include "core/tracemap.hpp"

using namespace gtm;
using nlohmann::ordered_json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string f;
    while (std::getline(is, f, ',')) out.push_back(f);
    return out;
}

} // namespace

TEST_CASE("bands CSV layout and decimal fidelity") {
    BandSet bs = isolate_bands(Model{1, "1.0"}, 1);
    std::string csv = bands_csv(bs);
    auto lines = split_lines(csv);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "level,index,lo,hi,direction");
    auto row0 = split_fields(lines[1]);
    auto row1 = split_fields(lines[2]);
    REQUIRE(row0.size() == 5);
    CHECK(row0[0] == "1");
    CHECK(row0[1] == "0");
    CHECK(row0[4] == "decreasing");
    CHECK(row1[1] == "1");
    CHECK(row1[4] == "increasing");
    // The printed decimals re-parse to the exact stored endpoints.
    PrecisionScope scope(bs.precision_bits);
    CHECK(parse_decimal(row0[2]) == bs.bands[0].lo);
    CHECK(parse_decimal(row0[3]) == bs.bands[0].hi);
}

TEST_CASE("samples CSV layout") {
    Model model{2, "1.0"};
    auto rows = sample_curve(model, 1, Real(0), Real(1), 3);
    std::string csv = samples_csv(rows);
    auto lines = split_lines(csv);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "t,x,y,dx");
    auto mid = split_fields(lines[2]);
    REQUIRE(mid.size() == 4);
    CHECK(parse_decimal(mid[0]) == rows[1].t);
    CHECK(parse_decimal(mid[1]) == rows[1].x);
    CHECK(parse_decimal(mid[2]) == rows[1].y);
    CHECK(parse_decimal(mid[3]) == rows[1].dx);
}

TEST_CASE("nested-family JSON carries the full structure") {
    Model model{2, "1.0"};
    SNSTree tree = build_sns(model, 0, 3);
    SNSStats stats = sns_stats(tree);
    DimensionReport report = theorem_bound(2);
    std::string text = sns_json(tree, &stats, &report, 42);

    ordered_json j = ordered_json::parse(text);
    CHECK(j["kind"] == "nested_band_family");
    CHECK(j["m"] == 2);
    CHECK(j["lambda"] == "1.0");
    CHECK(j["seed"] == 42);
    CHECK(j["depth"] == 3);
    CHECK(j["root_band_index"] == 0);
    CHECK(j["branching"] == 2);
    CHECK(j["precision_bits"].get<unsigned>() == tree.precision_bits);
    CHECK(j["scan_retreats"].get<long>() >= 0);

    REQUIRE(j["levels"].is_array());
    REQUIRE(j["levels"].size() == 3);
    for (const auto& row : j["levels"]) {
        CHECK(row.size() == 6);
        CHECK(row.contains("level"));
        CHECK(row.contains("count"));
        CHECK(row.contains("min_width"));
        CHECK(row.contains("max_width"));
        CHECK(row.contains("max_abs_dx"));
        CHECK(row.contains("max_abs_ymin2"));
        CHECK(parse_decimal(row["min_width"].get<std::string>()) > 0);
    }

    CHECK(j["width_decay"].contains("slope"));
    CHECK(j["width_decay"]["fit_lo"] == stats.fit_lo);
    CHECK(j["width_decay"]["fit_hi"] == stats.fit_hi);
    CHECK(j["width_decay"].contains("mhat"));

    CHECK(j["dimension"]["m"] == 2);
    CHECK(j["dimension"]["lambda_m"] == 2);
    CHECK(j["dimension"].contains("gamma_m"));
    CHECK(j["dimension"].contains("bound"));
    CHECK(j["dimension"].contains("weak_bound"));
    CHECK(j["dimension"].contains("empirical_estimate")); // depth 3 has one

    // The tree nests: root node with two children, each with two children.
    const auto& root = j["tree"];
    CHECK(root["level"] == 1);
    CHECK(root["direction"] == "decreasing");
    REQUIRE(root["children"].size() == 2);
    for (const auto& kid : root["children"]) {
        CHECK(kid["level"] == 2);
        CHECK(kid["children"].size() == 2);
        for (const auto& g : kid["children"]) CHECK(g["children"].empty());
        // Child intervals sit inside the root interval.
        CHECK(parse_decimal(kid["lo"].get<std::string>()) >=
              parse_decimal(root["lo"].get<std::string>()));
        CHECK(parse_decimal(kid["hi"].get<std::string>()) <=
              parse_decimal(root["hi"].get<std::string>()));
    }

    // Shallow trees omit the stats blocks entirely.
    SNSTree shallow = build_sns(model, 0, 1);
    std::string thin = sns_json(shallow, nullptr, &report, 7);
    ordered_json tj = ordered_json::parse(thin);
    CHECK_FALSE(tj.contains("levels"));
    CHECK_FALSE(tj.contains("width_decay"));
    CHECK_FALSE(tj["dimension"].contains("empirical_estimate"));
}

TEST_CASE("identical builds serialize byte-identically") {
    Model model{3, "0.7"};
    SNSTree a = build_sns(model, 0, 3);
    SNSTree b = build_sns(model, 0, 3);
    SNSStats sa = sns_stats(a), sb = sns_stats(b);
    DimensionReport rep = theorem_bound(3);
    CHECK(sns_json(a, &sa, &rep, 42) == sns_json(b, &sb, &rep, 42));
}

TEST_CASE("inclusion probe JSON") {
    InclusionReport rep = probe_inclusion(Model{1, "1.0"}, 1, 4);
    ordered_json j = ordered_json::parse(inclusion_json(rep));
    CHECK(j["kind"] == "inclusion_probe");
    CHECK(j["m"] == 1);
    CHECK(j["level"] == 1);
    CHECK(j["samples_per_band"] == 4);
    CHECK(j["bands_tested"] == rep.bands_tested);
    CHECK(j["points_tested"] == rep.points_tested);
    CHECK(j.contains("tolerance"));
    CHECK(j.contains("worst_margin"));
    CHECK(j["counterexample_count"].get<long>() ==
          (long)rep.counterexamples.size());
    CHECK(j["counterexamples"].is_array());
}

TEST_CASE("bounds tables in both formats") {
    std::vector<DimensionReport> rows = {theorem_bound(2), theorem_bound(3)};

    std::string csv = bounds_csv(rows);
    auto lines = split_lines(csv);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "m,lambda_m,gamma_m,bound,weak_bound");
    auto r0 = split_fields(lines[1]);
    REQUIRE(r0.size() == 5);
    CHECK(r0[0] == "2");
    CHECK(r0[1] == "2");
    {
        PrecisionScope scope(128); // theorem_bound values are 128-bit
        CHECK(parse_decimal(r0[2]) == rows[0].gamma);
        CHECK(parse_decimal(r0[3]) == rows[0].bound);
    }

    ordered_json j = ordered_json::parse(bounds_json(rows));
    CHECK(j["kind"] == "dimension_bounds");
    REQUIRE(j["rows"].size() == 2);
    CHECK(j["rows"][0]["m"] == 2);
    CHECK(j["rows"][1]["m"] == 3);
    CHECK(j["rows"][0]["lambda_m"] == 2);
    CHECK(j["rows"][0].contains("gamma_m"));
    CHECK(j["rows"][0].contains("bound"));
    CHECK(j["rows"][0].contains("weak_bound"));
}

TEST_CASE("write_text targets files and rejects bad paths") {
    std::string path = "serialize_test_scratch.txt";
    write_text("alpha\nbeta\n", path);
    CHECK(slurp(path) == "alpha\nbeta\n");
    std::remove(path.c_str());

    CHECK_THROWS_AS(write_text("x", "/nonexistent-dir/out.txt"), IoError);
}
