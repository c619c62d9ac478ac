#include "sigclo/enclosure.hpp"

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sigclo {

BigFloat::BigFloat(mpfr_prec_t prec) { mpfr_init2(v_, prec); }

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(v_, other.prec());
  mpfr_set(v_, other.v_, MPFR_RNDN);  // same precision: exact copy
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(v_, other.prec());
  mpfr_swap(v_, other.v_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(v_, other.prec());
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  if (this != &other) mpfr_swap(v_, other.v_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

std::string BigFloat::str(int digits, mpfr_rnd_t rnd) const {
  if (mpfr_nan_p(v_)) return "nan";
  if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
  char fmt[32];
  std::snprintf(fmt, sizeof fmt, "%%.%dR*g", digits);
  char* out = nullptr;
  mpfr_asprintf(&out, fmt, rnd, v_);
  std::string s(out);
  mpfr_free_str(out);
  return s;
}

int cmp(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.get(), b.get()); }

Enclosure::Enclosure(BigFloat lo, BigFloat hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  assert(mpfr_cmp(lo_.get(), hi_.get()) <= 0 && "enclosure bounds out of order");
}

Enclosure Enclosure::from_rational(const Rational& q, mpfr_prec_t prec) {
  BigFloat lo(prec), hi(prec);
  mpfr_set_q(lo.get(), q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi.get(), q.get_mpq_t(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure Enclosure::from_integer(long v, mpfr_prec_t prec) {
  BigFloat lo(prec), hi(prec);
  mpfr_set_si(lo.get(), v, MPFR_RNDD);
  mpfr_set_si(hi.get(), v, MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

bool Enclosure::contains(const Enclosure& inner) const {
  return mpfr_cmp(lo_.get(), inner.lo_.get()) <= 0 &&
         mpfr_cmp(inner.hi_.get(), hi_.get()) <= 0;
}

bool Enclosure::contains_rational(const Rational& q) const {
  return mpfr_cmp_q(lo_.get(), q.get_mpq_t()) <= 0 &&
         mpfr_cmp_q(hi_.get(), q.get_mpq_t()) >= 0;
}

bool Enclosure::strictly_below(const Enclosure& other) const {
  return mpfr_cmp(hi_.get(), other.lo_.get()) < 0;
}

bool Enclosure::overlaps(const Enclosure& other) const {
  return !strictly_below(other) && !other.strictly_below(*this);
}

bool Enclosure::is_positive() const { return mpfr_sgn(lo_.get()) > 0; }

double Enclosure::midpoint_double() const {
  return 0.5 * (lo_.to_double(MPFR_RNDN) + hi_.to_double(MPFR_RNDN));
}

double Enclosure::width_double() const {
  BigFloat w(prec());
  mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
  return w.to_double(MPFR_RNDU);
}

std::string Enclosure::str(int digits) const {
  return "[" + lo_string(digits) + ", " + hi_string(digits) + "]";
}

namespace {

mpfr_prec_t joint_prec(const Enclosure& a, const Enclosure& b) {
  return std::max(a.prec(), b.prec());
}

}  // namespace

Enclosure add(const Enclosure& a, const Enclosure& b) {
  const mpfr_prec_t p = joint_prec(a, b);
  BigFloat lo(p), hi(p);
  mpfr_add(lo.get(), a.lo().get(), b.lo().get(), MPFR_RNDD);
  mpfr_add(hi.get(), a.hi().get(), b.hi().get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure sub(const Enclosure& a, const Enclosure& b) {
  const mpfr_prec_t p = joint_prec(a, b);
  BigFloat lo(p), hi(p);
  mpfr_sub(lo.get(), a.lo().get(), b.hi().get(), MPFR_RNDD);
  mpfr_sub(hi.get(), a.hi().get(), b.lo().get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure mul(const Enclosure& a, const Enclosure& b) {
  // General sign-safe product: min/max over the four corner products,
  // each corner evaluated once rounded down and once rounded up.
  const mpfr_prec_t p = joint_prec(a, b);
  mpfr_srcptr xs[2] = {a.lo().get(), a.hi().get()};
  mpfr_srcptr ys[2] = {b.lo().get(), b.hi().get()};
  BigFloat lo(p), hi(p), t(p);
  bool first = true;
  for (mpfr_srcptr x : xs) {
    for (mpfr_srcptr y : ys) {
      mpfr_mul(t.get(), x, y, MPFR_RNDD);
      if (first || mpfr_cmp(t.get(), lo.get()) < 0) mpfr_set(lo.get(), t.get(), MPFR_RNDD);
      mpfr_mul(t.get(), x, y, MPFR_RNDU);
      if (first || mpfr_cmp(t.get(), hi.get()) > 0) mpfr_set(hi.get(), t.get(), MPFR_RNDU);
      first = false;
    }
  }
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure recip(const Enclosure& a) {
  if (mpfr_sgn(a.lo().get()) <= 0 && mpfr_sgn(a.hi().get()) >= 0)
    throw std::domain_error("reciprocal of an enclosure containing zero");
  const mpfr_prec_t p = a.prec();
  BigFloat lo(p), hi(p);
  mpfr_ui_div(lo.get(), 1, a.hi().get(), MPFR_RNDD);
  mpfr_ui_div(hi.get(), 1, a.lo().get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure div(const Enclosure& a, const Enclosure& b) { return mul(a, recip(b)); }

Enclosure pow(const Enclosure& base, const Enclosure& exp) {
  if (!base.is_positive())
    throw std::domain_error("pow requires a strictly positive base enclosure");
  // x^y is monotone in x for fixed y and monotone in y for fixed x (direction
  // depending on signs), so the extrema over the box lie at its four corners.
  const mpfr_prec_t p = joint_prec(base, exp);
  mpfr_srcptr xs[2] = {base.lo().get(), base.hi().get()};
  mpfr_srcptr ys[2] = {exp.lo().get(), exp.hi().get()};
  BigFloat lo(p), hi(p), t(p);
  bool first = true;
  for (mpfr_srcptr x : xs) {
    for (mpfr_srcptr y : ys) {
      mpfr_pow(t.get(), x, y, MPFR_RNDD);
      if (first || mpfr_cmp(t.get(), lo.get()) < 0) mpfr_set(lo.get(), t.get(), MPFR_RNDD);
      mpfr_pow(t.get(), x, y, MPFR_RNDU);
      if (first || mpfr_cmp(t.get(), hi.get()) > 0) mpfr_set(hi.get(), t.get(), MPFR_RNDU);
      first = false;
    }
  }
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure pow_ui(const Enclosure& base, unsigned long e) {
  if (!base.is_positive())
    throw std::domain_error("pow_ui requires a strictly positive base enclosure");
  const mpfr_prec_t p = base.prec();
  BigFloat lo(p), hi(p);
  mpfr_pow_ui(lo.get(), base.lo().get(), e, MPFR_RNDD);
  mpfr_pow_ui(hi.get(), base.hi().get(), e, MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure exp(const Enclosure& a) {
  const mpfr_prec_t p = a.prec();
  BigFloat lo(p), hi(p);
  mpfr_exp(lo.get(), a.lo().get(), MPFR_RNDD);
  mpfr_exp(hi.get(), a.hi().get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure log(const Enclosure& a) {
  if (!a.is_positive()) throw std::domain_error("log requires a positive enclosure");
  const mpfr_prec_t p = a.prec();
  BigFloat lo(p), hi(p);
  mpfr_log(lo.get(), a.lo().get(), MPFR_RNDD);
  mpfr_log(hi.get(), a.hi().get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure sqrt(const Enclosure& a) {
  if (mpfr_sgn(a.lo().get()) < 0) throw std::domain_error("sqrt of a negative enclosure");
  const mpfr_prec_t p = a.prec();
  BigFloat lo(p), hi(p);
  mpfr_sqrt(lo.get(), a.lo().get(), MPFR_RNDD);
  mpfr_sqrt(hi.get(), a.hi().get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

}  // namespace sigclo
