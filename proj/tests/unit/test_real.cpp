#include <doctest.h>

#include "core/real.hpp"

using namespace gtm;

TEST_CASE("working precision starts at a usable default and scopes nest") {
    unsigned base = working_precision_bits();
    CHECK(base >= 64);
    {
        PrecisionScope outer(192);
        CHECK(working_precision_bits() == 192);
        Real v = sqrt(Real(2));
        CHECK(v.precision() >= 57); // digits10 for 192 bits
        {
            PrecisionScope inner(256);
            CHECK(working_precision_bits() == 256);
        }
        CHECK(working_precision_bits() == 192);
    }
    CHECK(working_precision_bits() == base);
}

TEST_CASE("precision floor clamps tiny requests") {
    PrecisionScope scope(8);
    CHECK(working_precision_bits() >= 64);
}

TEST_CASE("rel_eps is a power of two anchored at the working precision") {
    PrecisionScope scope(128);
    CHECK(rel_eps(32) == ldexp(Real(1), 32 - 128));
    CHECK(rel_eps(0) == ldexp(Real(1), -128));
    CHECK(rel_eps(32) > rel_eps(24));
}

TEST_CASE("close_rel compares with magnitude-relative slack") {
    PrecisionScope scope(128);
    Real a = Real(1) / 3;
    Real b = a + ldexp(Real(1), -120);
    CHECK(close_rel(a, b, 16));
    CHECK(!close_rel(a, a + Real("0.001"), 16));
    // Large magnitudes scale the slack.
    Real big = ldexp(Real(1), 100);
    CHECK(close_rel(big, big + ldexp(Real(1), 100 - 120), 16));
}

TEST_CASE("parse_decimal accepts plain and scientific forms") {
    PrecisionScope scope(128);
    CHECK(parse_decimal("0") == 0);
    CHECK(parse_decimal("-2") == -2);
    CHECK(parse_decimal("2.5e-1") == Real(1) / 4);
    CHECK(parse_decimal("+1.5E2") == 150);
    CHECK(parse_decimal("1e3") == 1000);
}

TEST_CASE("parse_decimal rejects malformed input") {
    CHECK_THROWS_AS(parse_decimal(""), ConfigError);
    CHECK_THROWS_AS(parse_decimal("abc"), ConfigError);
    CHECK_THROWS_AS(parse_decimal("1.2.3"), ConfigError);
    CHECK_THROWS_AS(parse_decimal("1e"), ConfigError);
    CHECK_THROWS_AS(parse_decimal("--1"), ConfigError);
    CHECK_THROWS_AS(parse_decimal("nan"), ConfigError);
    CHECK_THROWS_AS(parse_decimal("inf"), ConfigError);
    CHECK_THROWS_AS(parse_decimal("1.0 "), ConfigError);
}

TEST_CASE("decimal text round-trips exactly at the value's own precision") {
    PrecisionScope scope(192);
    Real v = sqrt(Real(2)) / 3;
    std::string text = to_decimal(v);
    CHECK(parse_decimal(text) == v);
    Real w = -ldexp(Real(1), -150);
    CHECK(parse_decimal(to_decimal(w)) == w);
    CHECK(to_decimal(Real(0)).size() > 0);
}

TEST_CASE("a decimal string is not a double round-trip") {
    PrecisionScope scope(192);
    Real tenth = parse_decimal("0.1");
    Real via_double = Real(0.1); // binary double, then widened
    CHECK(tenth != via_double);
    CHECK(abs(tenth * 10 - 1) <= rel_eps(4));
}

TEST_CASE("error kinds carry stable categories") {
    CHECK(ConfigError("x").kind() == Error::Kind::config);
    CHECK(InvariantError("x").kind() == Error::Kind::invariant);
    CHECK(PrecisionError("x").kind() == Error::Kind::precision);
    CHECK(UnsupportedError("x").kind() == Error::Kind::unsupported);
    CHECK(LimitError("x").kind() == Error::Kind::limit);
    CHECK(IoError("x").kind() == Error::Kind::io);
    CHECK(std::string(ConfigError("msg here").what()) == "msg here");
}
