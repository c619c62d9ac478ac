#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

namespace sigclo {

// Exact rational arithmetic is GMP's mpq, canonical (lowest terms, den > 0).
using Rational = mpq_class;

// Parses "2", "1.95", "-0.25" or "7/2" into an exact rational.
// Returns nullopt on malformed input.
std::optional<Rational> parse_rational(const std::string& text);

// "num/den", or just "num" when den == 1.
std::string fraction_string(const Rational& q);

// Exact decimal string when the denominator is of the form 2^a 5^b,
// otherwise falls back to fraction_string.
std::string decimal_or_fraction_string(const Rational& q);

Rational pow_rational(const Rational& base, unsigned long e);

// q as an unsigned integer if q is integral and >= lower_bound.
std::optional<unsigned long> as_integer_at_least(const Rational& q, unsigned long lower_bound);

}  // namespace sigclo
