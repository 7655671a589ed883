#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace opac {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "3", "5/8", "0.125" or "-2" into an exact rational. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Decimal rendering with `digits` fractional digits, rounded half-up, trailing
/// zeros trimmed but at least one fractional digit kept ("0.0", "0.015625").
std::string to_decimal(const Rational& value, int digits);

/// "num/den" (or "num" when the denominator is 1).
std::string to_fraction(const Rational& value);

}  // namespace opac
