#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>

#include "sigclo/enclosure.hpp"
#include "sigclo/rational.hpp"
#include "sigclo/realnum.hpp"

namespace sigclo {

// Exponent value standing for p^infinity, i.e. the geometric-series limit
// sigma_{-r}(p^inf) = 1/(1 - p^-r).
inline constexpr std::uint64_t kInfiniteExponent = std::numeric_limits<std::uint64_t>::max();

// Symbolic endpoint: a product of sigma_{-r}(p_j^a) factors over distinct
// prime indices, optionally times one tail factor
//   T_j = prod_{k>j} 1/(1 - p_k^-r) = zeta(r) * prod_{k<=j} (1 - p_k^-r).
// The empty product is the constant 1.
struct EndpointExpr {
  std::map<std::uint32_t, std::uint64_t> factors;  // prime index (1-based) -> exponent
  std::optional<std::uint32_t> tail;               // T_j index, j >= 0

  bool operator==(const EndpointExpr&) const = default;
};

EndpointExpr unit_expr();
EndpointExpr tail_expr(std::uint32_t j);

// Multiply by sigma_{-r}(p_j^a).  a = 0 is the empty factor (returns the
// expression unchanged); a = kInfiniteExponent records p_j^inf.  Each prime
// index may appear at most once in a product.
EndpointExpr expr_mul_sigma(EndpointExpr e, std::uint32_t prime_index, std::uint64_t exponent);

// Rendering grammar (and its inverse):
//   expr   := "1" | factor ("*" factor)*
//   factor := "sigma(" prime "^" exponent ")" | "T_" index
//   exponent := digits | "inf"
// sigma factors name the prime itself; the tail names the prime *index*.
// Factors render in increasing prime order with the tail last.
std::string render_expr(const EndpointExpr& e);
std::optional<EndpointExpr> parse_expr(const std::string& text);

// sigma_{-r}(p^a) for the prime of the given 1-based index; exponent may be
// kInfiniteExponent.  The _exact form exists iff r is a positive integer
// (p^-r is then rational, and even a = inf sums to a rational).
Enclosure sigma_prime_power(std::uint32_t prime_index, std::uint64_t exponent,
                            const Rational& r, mpfr_prec_t prec);
std::optional<Rational> sigma_prime_power_exact(std::uint32_t prime_index,
                                                std::uint64_t exponent, const Rational& r);

// T_j via the Euler-product identity above; j = 0 gives zeta(r) itself.
Enclosure tail_product(std::uint32_t j, const Rational& r, mpfr_prec_t prec);

// For positive-integer r an endpoint collapses to coeff or coeff*zeta(r)
// with coeff rational; has_zeta distinguishes the two.
struct ClosedForm {
  Rational coeff;
  bool has_zeta = false;
};
std::optional<ClosedForm> closed_form(const EndpointExpr& e, const Rational& r);

// Certified numeric value of the whole product.
Enclosure expr_value(const EndpointExpr& e, const Rational& r, mpfr_prec_t prec);

// RealSource wrapper: exact iff the closed form exists and is zeta-free.
RealSource endpoint_source(const EndpointExpr& e, const Rational& r);

// Certified comparison of two endpoints under the same r.  Decides symbolically
// (structural equality, then closed forms for integer r) before escalating
// numerically; an undecidable pair throws ComparisonError.
Order compare_endpoints(const EndpointExpr& a, const EndpointExpr& b, const Rational& r,
                        const PrecisionPolicy& policy);

// Closed interval with symbolic endpoints, lo <= hi.
struct ClosedInterval {
  EndpointExpr lo;
  EndpointExpr hi;

  bool operator==(const ClosedInterval&) const = default;
};

}  // namespace sigclo
