#include "sigclo/rational.hpp"

#include <cctype>

namespace sigclo {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

std::optional<Rational> parse_rational(const std::string& text) {
  std::string s = text;
  bool negative = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    negative = (s[0] == '-');
    s = s.substr(1);
  }
  if (s.empty()) return std::nullopt;

  Rational q;
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    mpz_class d(den);
    if (d == 0) return std::nullopt;
    q = Rational(mpz_class(num), d);
  } else {
    auto dot = s.find('.');
    if (dot == std::string::npos) {
      if (!all_digits(s)) return std::nullopt;
      q = Rational(mpz_class(s));
    } else {
      std::string ipart = s.substr(0, dot);
      std::string fpart = s.substr(dot + 1);
      if (ipart.empty()) ipart = "0";
      if (fpart.empty()) return std::nullopt;
      if (!all_digits(ipart) || !all_digits(fpart)) return std::nullopt;
      mpz_class den = 1;
      for (size_t i = 0; i < fpart.size(); ++i) den *= 10;
      q = Rational(mpz_class(ipart) * den + mpz_class(fpart), den);
    }
  }
  q.canonicalize();
  if (negative) q = -q;
  return q;
}

std::string fraction_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string decimal_or_fraction_string(const Rational& q) {
  mpz_class den = q.get_den();
  if (den == 1) return q.get_num().get_str();
  // strip factors of 2 and 5
  mpz_class d = den;
  unsigned long twos = 0, fives = 0;
  while (mpz_divisible_ui_p(d.get_mpz_t(), 2)) {
    d /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(d.get_mpz_t(), 5)) {
    d /= 5;
    ++fives;
  }
  if (d != 1) return fraction_string(q);

  unsigned long digits = twos > fives ? twos : fives;
  mpz_class scale = 1;
  for (unsigned long i = 0; i < digits; ++i) scale *= 10;
  mpz_class scaled = q.get_num() * (scale / den);  // exact by construction
  bool neg = scaled < 0;
  mpz_class abs_scaled = neg ? mpz_class(-scaled) : scaled;
  std::string s = abs_scaled.get_str();
  if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  s.insert(s.size() - digits, ".");
  // drop trailing zeros in the fractional part
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return (neg ? "-" : "") + s;
}

Rational pow_rational(const Rational& base, unsigned long e) {
  Rational out;
  mpz_pow_ui(out.get_num().get_mpz_t(), base.get_num().get_mpz_t(), e);
  mpz_pow_ui(out.get_den().get_mpz_t(), base.get_den().get_mpz_t(), e);
  out.canonicalize();
  return out;
}

std::optional<unsigned long> as_integer_at_least(const Rational& q, unsigned long lower_bound) {
  if (q.get_den() != 1) return std::nullopt;
  const mpz_class& n = q.get_num();
  if (!n.fits_ulong_p()) return std::nullopt;
  unsigned long v = n.get_ui();
  if (q < 0 || v < lower_bound) return std::nullopt;
  return v;
}

}  // namespace sigclo
