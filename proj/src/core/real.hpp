#ifndef GTM_CORE_REAL_HPP
#define GTM_CORE_REAL_HPP

// Arbitrary-precision scalar type plus the precision-management and
// tolerance conventions used across the library.
//
// All numerical routines run at a "working precision" measured in bits.
// Boost stores the MPFR default precision process-globally, so precision
// changes are made only at operation entry points (never inside parallel
// workers) via PrecisionScope.

#include <boost/multiprecision/mpfr.hpp>

#include <stdexcept>
#include <string>

namespace gtm {

using Real = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<0, boost::multiprecision::allocate_dynamic>,
    boost::multiprecision::et_off>;

// ---------------------------------------------------------------- errors ---

// Base class carrying a stable category tag; the C API and the CLI map
// categories to status/exit codes.
class Error : public std::runtime_error {
public:
    enum class Kind { config, invariant, precision, unsupported, limit, io };
    Error(Kind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// Bad user input: malformed numbers, out-of-range parameters.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(Kind::config, msg) {}
};

// A structural certainty failed to verify (e.g. band counts off after all
// precision retries, non-unimodular matrix fed to a unimodular power).
class InvariantError : public Error {
public:
    explicit InvariantError(const std::string& msg) : Error(Kind::invariant, msg) {}
};

// A certified step could not be resolved at the current working precision;
// callers may retry with more bits.
class PrecisionError : public Error {
public:
    explicit PrecisionError(const std::string& msg) : Error(Kind::precision, msg) {}
};

// Valid input outside the implemented domain (e.g. nested-structure
// construction for m = 1).
class UnsupportedError : public Error {
public:
    explicit UnsupportedError(const std::string& msg) : Error(Kind::unsupported, msg) {}
};

// A configured safety cap would be exceeded (band count, word length).
class LimitError : public Error {
public:
    explicit LimitError(const std::string& msg) : Error(Kind::limit, msg) {}
};

// File write failure in a serializer.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(Kind::io, msg) {}
};

// ------------------------------------------------------------- precision ---

// Requested working precision in bits.  The underlying MPFR precision is
// at least this (the bits -> decimal-digits -> bits round trip through the
// Boost default-precision API can only round up).
unsigned working_precision_bits();

// Set the working precision.  Affects subsequently constructed Reals.
void set_working_precision_bits(unsigned bits);

// RAII: set precision on entry, restore on destruction.  Use at operation
// entry only; nested scopes are fine, concurrent scopes with different
// precisions are not (the setting is process-global).
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned bits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned prev_bits_;
};

// ------------------------------------------------------------- tolerance ---

// 2^(offset_bits - working_precision_bits), the library's standard way of
// expressing "k guard bits above rounding level".
Real rel_eps(int offset_bits);

// |a - b| <= 2^(offset_bits - prec) * max(1, |a|, |b|)
bool close_rel(const Real& a, const Real& b, int offset_bits);

// ------------------------------------------------------------ decimal IO ---

// Round-trip-exact scientific decimal, deterministic for a given value and
// precision (fixed digit count derived from the working precision).
std::string to_decimal(const Real& v);

// Shorter form for human-facing summaries (about `digits` significant).
std::string to_decimal_digits(const Real& v, int digits);

// Parse a decimal string at the current working precision.  Accepts an
// optional sign, digits with optional fractional part, optional exponent.
// Throws ConfigError for anything else (including empty/NaN/Inf).
Real parse_decimal(const std::string& text);

} // namespace gtm

#endif // GTM_CORE_REAL_HPP
