#pragma once

#include <mpfr.h>

#include <string>

#include "sigclo/rational.hpp"

namespace sigclo {

// RAII wrapper for one mpfr_t.
class BigFloat {
public:
  explicit BigFloat(mpfr_prec_t prec);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

  double to_double(mpfr_rnd_t rnd) const { return mpfr_get_d(v_, rnd); }

  // Decimal rendering with the given significant digits, rounded in direction rnd.
  std::string str(int digits, mpfr_rnd_t rnd) const;

private:
  mpfr_t v_;
};

int cmp(const BigFloat& a, const BigFloat& b);

// Certified interval [lo, hi] at a stated precision: lo is rounded down and hi
// rounded up by every operation, so the exact value of any expression built
// from enclosures is contained in the result.
class Enclosure {
public:
  Enclosure(BigFloat lo, BigFloat hi);

  static Enclosure from_rational(const Rational& q, mpfr_prec_t prec);
  static Enclosure from_integer(long v, mpfr_prec_t prec);

  const BigFloat& lo() const { return lo_; }
  const BigFloat& hi() const { return hi_; }
  mpfr_prec_t prec() const { return lo_.prec(); }

  bool contains(const Enclosure& inner) const;      // inner subseteq this
  bool contains_rational(const Rational& q) const;  // lo <= q <= hi
  bool strictly_below(const Enclosure& other) const;  // hi < other.lo
  bool overlaps(const Enclosure& other) const;

  bool is_positive() const;  // lo > 0

  double midpoint_double() const;
  double width_double() const;

  std::string lo_string(int digits) const { return lo_.str(digits, MPFR_RNDD); }
  std::string hi_string(int digits) const { return hi_.str(digits, MPFR_RNDU); }
  std::string str(int digits) const;  // "[lo, hi]" for diagnostics

private:
  BigFloat lo_;
  BigFloat hi_;
};

// Outward-rounded arithmetic; results carry max(a.prec, b.prec).
Enclosure add(const Enclosure& a, const Enclosure& b);
Enclosure sub(const Enclosure& a, const Enclosure& b);
Enclosure mul(const Enclosure& a, const Enclosure& b);
Enclosure div(const Enclosure& a, const Enclosure& b);  // requires 0 not in b

inline Enclosure operator+(const Enclosure& a, const Enclosure& b) { return add(a, b); }
inline Enclosure operator-(const Enclosure& a, const Enclosure& b) { return sub(a, b); }
inline Enclosure operator*(const Enclosure& a, const Enclosure& b) { return mul(a, b); }
inline Enclosure operator/(const Enclosure& a, const Enclosure& b) { return div(a, b); }

Enclosure recip(const Enclosure& a);  // requires 0 not in a

// base^exp for base.lo > 0; extrema are attained at the corners because the
// map is monotone in each argument once the other is fixed.
Enclosure pow(const Enclosure& base, const Enclosure& exp);
Enclosure pow_ui(const Enclosure& base, unsigned long e);

// Monotone elementary functions.
Enclosure exp(const Enclosure& a);
Enclosure log(const Enclosure& a);   // requires a.lo > 0
Enclosure sqrt(const Enclosure& a);  // requires a.lo >= 0

}  // namespace sigclo
