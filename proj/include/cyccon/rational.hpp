#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace cyccon {

/// Exact rational scalar used by every decision procedure in the library.
using Rational = mpq_class;

/// Parses "-0.805", "1e-3", "+2", "3/16" or "-7/4" into an exact rational.
/// Throws Error(ParseError) on anything else.
Rational parse_rational(std::string_view text);

/// Converts a double via its shortest round-trip decimal representation,
/// so 0.1 becomes exactly 1/10 rather than the nearest binary fraction.
Rational rational_from_double(double value);

/// Exact binary value of a double (no decimal reading).
Rational rational_exact_binary(double value);

/// "p/q" (or "p" when q == 1).
std::string to_fraction_string(const Rational& value);

/// Decimal with exactly `digits` fractional digits, rounded half-to-even.
std::string to_decimal_string(const Rational& value, int digits);

/// Terminating decimal when the denominator is of the form 2^a 5^b,
/// fraction string otherwise. Round-trips through parse_rational.
std::string to_exact_string(const Rational& value);

inline Rational rabs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

inline const Rational& rmin(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& rmax(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace cyccon
