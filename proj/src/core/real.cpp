#include "core/real.hpp"

#include <mpfr.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <vector>

namespace gtm {

namespace {

// Requested bits, tracked separately because Boost's default-precision API
// is denominated in decimal digits and rounds up.
unsigned g_requested_bits = 128;

unsigned bits_to_digits10(unsigned bits) {
    // ceil(bits * log10(2)) + 1 guard digit; the digits -> bits conversion
    // inside Boost rounds up again, so the MPFR precision ends up >= bits.
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398119521)) + 1;
}

// Align the backend's startup default (which is much lower) with the
// tracked request before any caller allocates a Real.
const bool g_precision_aligned = [] {
    Real::default_precision(bits_to_digits10(g_requested_bits));
    return true;
}();

} // namespace

unsigned working_precision_bits() { return g_requested_bits; }

void set_working_precision_bits(unsigned bits) {
    if (bits < 64) bits = 64; // floor: below this the band machinery is meaningless
    if (bits > (1u << 24)) {
        throw ConfigError("working precision above 2^24 bits is not supported");
    }
    g_requested_bits = bits;
    Real::default_precision(bits_to_digits10(bits));
}

PrecisionScope::PrecisionScope(unsigned bits) : prev_bits_(g_requested_bits) {
    set_working_precision_bits(bits);
}

PrecisionScope::~PrecisionScope() {
    g_requested_bits = prev_bits_;
    Real::default_precision(bits_to_digits10(prev_bits_));
}

Real rel_eps(int offset_bits) {
    Real one = 1;
    return ldexp(one, offset_bits - static_cast<int>(g_requested_bits));
}

bool close_rel(const Real& a, const Real& b, int offset_bits) {
    Real scale = 1;
    if (abs(a) > scale) scale = abs(a);
    if (abs(b) > scale) scale = abs(b);
    return abs(a - b) <= rel_eps(offset_bits) * scale;
}

std::string to_decimal(const Real& v) {
    // Digits chosen from the actual backend precision so the string
    // round-trips exactly at the same working precision.
    mpfr_prec_t prec = mpfr_get_prec(v.backend().data());
    int digits = static_cast<int>(std::ceil(prec * 0.30102999566398119521)) + 2;
    std::vector<char> buf(static_cast<size_t>(digits) + 32);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Re", digits - 1, v.backend().data());
    return std::string(buf.data());
}

std::string to_decimal_digits(const Real& v, int digits) {
    if (digits < 1) digits = 1;
    if (digits > 10000) digits = 10000;
    std::vector<char> buf(static_cast<size_t>(digits) + 32);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Re", digits - 1, v.backend().data());
    return std::string(buf.data());
}

Real parse_decimal(const std::string& text) {
    const char* s = text.c_str();
    size_t i = 0, n = text.size();
    auto fail = [&]() -> Real {
        throw ConfigError("malformed decimal number: '" + text + "'");
    };
    if (n == 0) return fail();
    if (s[i] == '+' || s[i] == '-') ++i;
    size_t int_digits = 0;
    while (i < n && std::isdigit(static_cast<unsigned char>(s[i]))) { ++i; ++int_digits; }
    size_t frac_digits = 0;
    if (i < n && s[i] == '.') {
        ++i;
        while (i < n && std::isdigit(static_cast<unsigned char>(s[i]))) { ++i; ++frac_digits; }
    }
    if (int_digits + frac_digits == 0) return fail();
    if (i < n && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        if (i < n && (s[i] == '+' || s[i] == '-')) ++i;
        size_t exp_digits = 0;
        while (i < n && std::isdigit(static_cast<unsigned char>(s[i]))) { ++i; ++exp_digits; }
        if (exp_digits == 0) return fail();
    }
    if (i != n) return fail();
    return Real(text);
}

} // namespace gtm
