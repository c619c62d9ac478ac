#include "sigclo/realnum.hpp"

#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>

#include "sigclo/errors.hpp"

namespace sigclo {

RealSource RealSource::from_rational(Rational q, std::string desc) {
  RealSource s;
  s.exact = q;
  s.eval = [q](mpfr_prec_t prec) { return Enclosure::from_rational(q, prec); };
  s.desc = std::move(desc);
  return s;
}

Enclosure RealSource::enclosure(mpfr_prec_t prec) const { return eval(prec); }

Order compare(const RealSource& a, const RealSource& b, const PrecisionPolicy& policy) {
  if (a.exact && b.exact) {
    const int c = cmp(*a.exact, *b.exact);
    return c < 0 ? Order::Less : c > 0 ? Order::Greater : Order::Equal;
  }
  for (mpfr_prec_t prec = policy.base; prec <= policy.max; prec *= 2) {
    const Enclosure ea = a.enclosure(prec);
    const Enclosure eb = b.enclosure(prec);
    if (ea.strictly_below(eb)) return Order::Less;
    if (eb.strictly_below(ea)) return Order::Greater;
  }
  return Order::Undecided;
}

Enclosure pow_enclosure(const Rational& base, const Rational& exponent, mpfr_prec_t prec) {
  if (sgn(base) <= 0) throw DomainError("pow_enclosure requires a positive base");
  return pow(Enclosure::from_rational(base, prec), Enclosure::from_rational(exponent, prec));
}

namespace {

// Smallest admissible argument: zeta and the routines built on it are only
// used for r bounded away from the pole at 1.
const Rational& zeta_min_arg() {
  static const Rational m = Rational(1) + Rational(1, 1048576);  // 1 + 2^-20
  return m;
}

}  // namespace

namespace {

// zeta evaluations recur constantly with the same (r, prec) — closure levels,
// tail products, oracle escalations — so memoize them.  The cache only ever
// holds values this process computed at these exact keys, so hits reproduce
// the uncached result bit for bit.
Enclosure zeta_cached(const Rational& r, mpfr_prec_t prec,
                      const std::function<Enclosure()>& compute) {
  static std::mutex mu;
  static std::unordered_map<std::string, Enclosure> cache;
  const std::string key = fraction_string(r) + "@" + std::to_string(prec);
  {
    std::lock_guard<std::mutex> lock(mu);
    if (const auto it = cache.find(key); it != cache.end()) return it->second;
  }
  Enclosure value = compute();
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, std::move(value)).first->second;
}

Enclosure zeta_enclosure_uncached(const Rational& r, mpfr_prec_t prec) {
  const mpfr_prec_t wp = prec + 32;  // guard bits for the argument bracket
  BigFloat r_lo(wp), r_hi(wp);
  const int t_lo = mpfr_set_q(r_lo.get(), r.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r_hi.get(), r.get_mpq_t(), MPFR_RNDU);

  BigFloat z_lo(wp), z_hi(wp);
  if (t_lo == 0) {
    // r is a wp-bit dyadic: zeta at the exact argument, correctly rounded in
    // both directions, is already a certified bracket.
    mpfr_zeta(z_lo.get(), r_lo.get(), MPFR_RNDD);
    mpfr_zeta(z_hi.get(), r_lo.get(), MPFR_RNDU);
  } else {
    // r_lo < r < r_hi with r_lo > 1, and zeta is strictly decreasing on
    // (1, infinity), so zeta(r_hi) < zeta(r) < zeta(r_lo).
    if (mpfr_cmp_ui(r_lo.get(), 1) <= 0)
      throw RangeError("zeta argument bracket touched 1 at working precision");
    mpfr_zeta(z_lo.get(), r_hi.get(), MPFR_RNDD);
    mpfr_zeta(z_hi.get(), r_lo.get(), MPFR_RNDU);
  }

  BigFloat out_lo(prec), out_hi(prec);
  mpfr_set(out_lo.get(), z_lo.get(), MPFR_RNDD);
  mpfr_set(out_hi.get(), z_hi.get(), MPFR_RNDU);
  return Enclosure(std::move(out_lo), std::move(out_hi));
}

}  // namespace

Enclosure zeta_enclosure(const Rational& r, mpfr_prec_t prec) {
  if (cmp(r, zeta_min_arg()) <= 0)
    throw RangeError("zeta argument must exceed 1 + 2^-20, got " + fraction_string(r));
  return zeta_cached(r, prec, [&] { return zeta_enclosure_uncached(r, prec); });
}

Enclosure zeta_partial_sum_bracket(const Rational& r, unsigned long terms, mpfr_prec_t prec) {
  if (cmp(r, zeta_min_arg()) <= 0)
    throw RangeError("zeta argument must exceed 1 + 2^-20, got " + fraction_string(r));
  if (terms == 0) throw std::invalid_argument("zeta partial sum needs at least one term");

  const Rational neg_r = -r;
  BigFloat sum_lo(prec), sum_hi(prec);
  mpfr_set_ui(sum_lo.get(), 0, MPFR_RNDD);
  mpfr_set_ui(sum_hi.get(), 0, MPFR_RNDU);
  for (unsigned long n = 1; n <= terms; ++n) {
    const Enclosure term = pow_enclosure(Rational(static_cast<long>(n)), neg_r, prec);
    mpfr_add(sum_lo.get(), sum_lo.get(), term.lo().get(), MPFR_RNDD);
    mpfr_add(sum_hi.get(), sum_hi.get(), term.hi().get(), MPFR_RNDU);
  }

  // Integral comparison for the tail of a decreasing positive term:
  //   (N+1)^(1-r)/(r-1) <= sum_{n>N} n^-r <= N^(1-r)/(r-1).
  const Rational one_minus_r = Rational(1) - r;
  const Enclosure rm1 = Enclosure::from_rational(r - Rational(1), prec);
  const Enclosure tail_low =
      pow_enclosure(Rational(static_cast<long>(terms) + 1), one_minus_r, prec) / rm1;
  const Enclosure tail_high =
      pow_enclosure(Rational(static_cast<long>(terms)), one_minus_r, prec) / rm1;

  BigFloat lo(prec), hi(prec);
  mpfr_add(lo.get(), sum_lo.get(), tail_low.lo().get(), MPFR_RNDD);
  mpfr_add(hi.get(), sum_hi.get(), tail_high.hi().get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

const char* order_name(Order o) {
  switch (o) {
    case Order::Less: return "less";
    case Order::Equal: return "equal";
    case Order::Greater: return "greater";
    case Order::Undecided: return "undecided";
  }
  return "unknown";
}

}  // namespace sigclo
