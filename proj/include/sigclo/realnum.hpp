#pragma once

#include <functional>
#include <optional>
#include <string>

#include "sigclo/enclosure.hpp"
#include "sigclo/rational.hpp"

namespace sigclo {

// Working precisions for certified comparisons: evaluation starts at `base`
// bits and doubles until the enclosures separate or `max` is exceeded.
struct PrecisionPolicy {
  mpfr_prec_t base = 128;
  mpfr_prec_t max = 4096;
};

enum class Order { Less, Equal, Greater, Undecided };

// A real number that can be evaluated to a certified enclosure at any
// requested precision.  When the value is known to be rational, `exact` is
// set and comparisons against other exact values never touch MPFR.
struct RealSource {
  std::optional<Rational> exact;
  std::function<Enclosure(mpfr_prec_t)> eval;
  std::string desc;  // rendering for error messages

  static RealSource from_rational(Rational q, std::string desc);

  Enclosure enclosure(mpfr_prec_t prec) const;
};

// Certified three-way comparison.  Returns Equal only when both sides are
// exact and equal as rationals; numeric evaluation alone can prove Less or
// Greater but never equality, so an undecidable pair at `policy.max` bits
// yields Undecided (callers treat that as fatal).
Order compare(const RealSource& a, const RealSource& b, const PrecisionPolicy& policy);

// b^e for rational b > 0 and rational e, certified at `prec` working bits.
// Integer exponents are computed exactly in rational arithmetic upstream;
// this routine handles the genuinely irrational cases via corner-rounded pow.
Enclosure pow_enclosure(const Rational& base, const Rational& exponent, mpfr_prec_t prec);

// Riemann zeta(r) for rational r.  Throws RangeError when r <= 1 + 2^-20,
// where the value (or our ability to bound it) blows up.  The enclosure is
// built from MPFR's correctly-rounded zeta: for r requiring rounding, zeta is
// evaluated at a bracketing pair of dyadic points and monotonicity of zeta on
// (1, infinity) converts that bracket into a certified interval.
Enclosure zeta_enclosure(const Rational& r, mpfr_prec_t prec);

// Elementary certified zeta bound used to cross-check zeta_enclosure in the
// tests: partial sum of n^-r for n <= N plus the integral tail bracket
//   S_N + (N+1)^(1-r)/(r-1) <= zeta(r) <= S_N + N^(1-r)/(r-1).
Enclosure zeta_partial_sum_bracket(const Rational& r, unsigned long terms, mpfr_prec_t prec);

const char* order_name(Order o);

}  // namespace sigclo
