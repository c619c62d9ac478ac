#include "sigclo/endpoints.hpp"

#include <cstdlib>
#include <functional>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sigclo/errors.hpp"
#include "sigclo/primes.hpp"

namespace sigclo {

EndpointExpr unit_expr() { return EndpointExpr{}; }

EndpointExpr tail_expr(std::uint32_t j) {
  EndpointExpr e;
  e.tail = j;
  return e;
}

EndpointExpr expr_mul_sigma(EndpointExpr e, std::uint32_t prime_index, std::uint64_t exponent) {
  if (exponent == 0) return e;  // sigma(p^0) = 1
  if (!e.factors.emplace(prime_index, exponent).second)
    throw DuplicatePrimeError("prime index " + std::to_string(prime_index) +
                              " appears twice in an endpoint product");
  return e;
}

std::string render_expr(const EndpointExpr& e) {
  if (e.factors.empty() && !e.tail) return "1";
  std::string out;
  for (const auto& [index, exponent] : e.factors) {
    if (!out.empty()) out += '*';
    out += "sigma(" + std::to_string(nth_prime(index)) + '^';
    out += exponent == kInfiniteExponent ? "inf" : std::to_string(exponent);
    out += ')';
  }
  if (e.tail) {
    if (!out.empty()) out += '*';
    out += "T_" + std::to_string(*e.tail);
  }
  return out;
}

namespace {

bool parse_u64(const std::string& s, std::uint64_t& out) {
  if (s.empty() || s.size() > 19) return false;
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  out = v;
  return true;
}

// "sigma(<prime>^<exp>)" -> factor; returns false on any malformation.
bool parse_sigma_token(const std::string& tok, std::uint32_t& index, std::uint64_t& exponent) {
  constexpr const char* kPrefix = "sigma(";
  if (tok.rfind(kPrefix, 0) != 0 || tok.back() != ')') return false;
  const std::string inner = tok.substr(6, tok.size() - 7);
  const auto caret = inner.find('^');
  if (caret == std::string::npos) return false;
  std::uint64_t prime = 0;
  if (!parse_u64(inner.substr(0, caret), prime) || prime < 2) return false;
  const std::string exp_text = inner.substr(caret + 1);
  if (exp_text == "inf") {
    exponent = kInfiniteExponent;
  } else if (!parse_u64(exp_text, exponent) || exponent == 0 ||
             exponent == kInfiniteExponent) {
    return false;
  }
  const auto candidate = static_cast<std::uint32_t>(first_index_at_least(prime));
  if (nth_prime(candidate) != prime) return false;  // not a prime
  index = candidate;
  return true;
}

}  // namespace

std::optional<EndpointExpr> parse_expr(const std::string& text) {
  if (text == "1") return unit_expr();
  EndpointExpr e;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto star = text.find('*', pos);
    const std::string tok =
        text.substr(pos, star == std::string::npos ? std::string::npos : star - pos);
    if (tok.empty()) return std::nullopt;
    if (tok.rfind("T_", 0) == 0) {
      std::uint64_t j = 0;
      if (e.tail || !parse_u64(tok.substr(2), j) || j > 0xffffffffu) return std::nullopt;
      e.tail = static_cast<std::uint32_t>(j);
    } else {
      std::uint32_t index = 0;
      std::uint64_t exponent = 0;
      if (!parse_sigma_token(tok, index, exponent)) return std::nullopt;
      if (e.tail) return std::nullopt;  // tail must come last
      if (!e.factors.emplace(index, exponent).second) return std::nullopt;
    }
    if (star == std::string::npos) break;
    pos = star + 1;
  }
  return e;
}

namespace {

// p^r as an exact integer, valid when r is a positive integer.
mpz_class prime_power_exact(std::uint32_t prime_index, const Rational& r) {
  mpz_class result;
  mpz_ui_pow_ui(result.get_mpz_t(), nth_prime(prime_index), mpz_get_ui(r.get_num_mpz_t()));
  return result;
}

bool is_positive_integer(const Rational& r) {
  return sgn(r) > 0 && r.get_den() == 1 && mpz_fits_ulong_p(r.get_num_mpz_t());
}

// Memo shared by the hot paths below (p^-r enclosures and tail products);
// cache hits reproduce the uncached value bit for bit.
Enclosure memoized(const std::string& key, const std::function<Enclosure()>& compute) {
  static std::mutex mu;
  static std::unordered_map<std::string, Enclosure> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (const auto it = cache.find(key); it != cache.end()) return it->second;
  }
  Enclosure value = compute();
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, std::move(value)).first->second;
}

// p_j^-r in (0, 1), memoized per (prime, r, prec).
Enclosure prime_power_enclosure(std::uint32_t prime_index, const Rational& r,
                                mpfr_prec_t prec) {
  const unsigned long p = nth_prime(prime_index);
  const std::string key =
      std::to_string(p) + "^-" + fraction_string(r) + "@" + std::to_string(prec);
  return memoized(key, [&] {
    return pow_enclosure(Rational(p), -r, prec);
  });
}

}  // namespace

std::optional<Rational> sigma_prime_power_exact(std::uint32_t prime_index,
                                                std::uint64_t exponent, const Rational& r) {
  if (!is_positive_integer(r)) return std::nullopt;
  const mpz_class P = prime_power_exact(prime_index, r);  // p^r
  if (exponent == kInfiniteExponent) {
    // sum_{i>=0} P^-i = P/(P-1)
    return Rational(P, P - 1);
  }
  // sum_{i=0}^{a} P^-i = (P^{a+1} - 1) / (P^a (P - 1))
  mpz_class Pa, Pa1;
  mpz_pow_ui(Pa.get_mpz_t(), P.get_mpz_t(), static_cast<unsigned long>(exponent));
  Pa1 = Pa * P;
  Rational result(Pa1 - 1, Pa * (P - 1));
  result.canonicalize();
  return result;
}

Enclosure sigma_prime_power(std::uint32_t prime_index, std::uint64_t exponent,
                            const Rational& r, mpfr_prec_t prec) {
  if (const auto exact = sigma_prime_power_exact(prime_index, exponent, r))
    return Enclosure::from_rational(*exact, prec);
  const Enclosure x = prime_power_enclosure(prime_index, r, prec);  // p^-r in (0, 1)
  const Enclosure one = Enclosure::from_integer(1, prec);
  if (exponent == kInfiniteExponent) return recip(one - x);
  return (one - pow_ui(x, static_cast<unsigned long>(exponent) + 1)) / (one - x);
}

Enclosure tail_product(std::uint32_t j, const Rational& r, mpfr_prec_t prec) {
  const std::string key =
      "T_" + std::to_string(j) + ":" + fraction_string(r) + "@" + std::to_string(prec);
  return memoized(key, [&] {
    Enclosure acc = zeta_enclosure(r, prec);
    const Enclosure one = Enclosure::from_integer(1, prec);
    const bool exact_terms = is_positive_integer(r);
    for (std::uint32_t k = 1; k <= j; ++k) {
      if (exact_terms) {
        const mpz_class P = prime_power_exact(k, r);
        acc = acc * Enclosure::from_rational(Rational(P - 1, P), prec);
      } else {
        acc = acc * (one - prime_power_enclosure(k, r, prec));
      }
    }
    return acc;
  });
}

std::optional<ClosedForm> closed_form(const EndpointExpr& e, const Rational& r) {
  if (!is_positive_integer(r)) return std::nullopt;
  ClosedForm form;
  form.coeff = 1;
  for (const auto& [index, exponent] : e.factors)
    form.coeff *= *sigma_prime_power_exact(index, exponent, r);
  if (e.tail) {
    form.has_zeta = true;
    for (std::uint32_t k = 1; k <= *e.tail; ++k) {
      const mpz_class P = prime_power_exact(k, r);
      form.coeff *= Rational(P - 1, P);
    }
  }
  form.coeff.canonicalize();
  return form;
}

Enclosure expr_value(const EndpointExpr& e, const Rational& r, mpfr_prec_t prec) {
  Enclosure acc = e.tail ? tail_product(*e.tail, r, prec) : Enclosure::from_integer(1, prec);
  for (const auto& [index, exponent] : e.factors)
    acc = acc * sigma_prime_power(index, exponent, r, prec);
  return acc;
}

RealSource endpoint_source(const EndpointExpr& e, const Rational& r) {
  RealSource s;
  if (const auto form = closed_form(e, r); form && !form->has_zeta) s.exact = form->coeff;
  if (e.factors.empty() && !e.tail) s.exact = Rational(1);  // empty product, any r
  s.eval = [e, r](mpfr_prec_t prec) { return expr_value(e, r, prec); };
  s.desc = render_expr(e);
  return s;
}

Order compare_endpoints(const EndpointExpr& a, const EndpointExpr& b, const Rational& r,
                        const PrecisionPolicy& policy) {
  if (a == b) return Order::Equal;
  // For integer r both sides may reduce to coeff or coeff*zeta(r); with the
  // same zeta factor on both sides the rational coefficients decide exactly.
  const auto fa = closed_form(a, r);
  const auto fb = closed_form(b, r);
  if (fa && fb && fa->has_zeta == fb->has_zeta) {
    const int c = cmp(fa->coeff, fb->coeff);
    return c < 0 ? Order::Less : c > 0 ? Order::Greater : Order::Equal;
  }
  const Order o = compare(endpoint_source(a, r), endpoint_source(b, r), policy);
  if (o == Order::Undecided) throw ComparisonError(render_expr(a), render_expr(b));
  return o;
}

}  // namespace sigclo
