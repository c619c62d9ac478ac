#include "sigclo/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

#include "sigclo/errors.hpp"
#include "sigclo/primes.hpp"

namespace sigclo {

SpfTable::SpfTable(std::uint32_t limit) : limit_(limit) {
  if (limit < 1) throw std::invalid_argument("sieve limit must be at least 1");
  if (limit > 200000000u)
    throw std::invalid_argument("sieve limit above 2e8 is not supported (memory)");
  spf_.assign(static_cast<std::size_t>(limit) + 1, 0);
  std::vector<std::uint32_t> primes;
  for (std::uint32_t i = 2; i <= limit; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = i;
      primes.push_back(i);
    }
    for (std::uint32_t p : primes) {
      if (p > spf_[i] || static_cast<std::uint64_t>(p) * i > limit) break;
      spf_[static_cast<std::size_t>(p) * i] = p;  // least factor of p*i is p
    }
  }
}

std::uint32_t SpfTable::spf(std::uint32_t n) const {
  if (n < 2 || n > limit_) throw std::out_of_range("spf query outside [2, limit]");
  return spf_[n];
}

std::vector<SpfTable::PrimePower> SpfTable::factor(std::uint32_t n) const {
  if (n < 1 || n > limit_) throw std::out_of_range("factor query outside [1, limit]");
  std::vector<PrimePower> factors;
  while (n > 1) {
    const std::uint32_t p = spf_[n];
    std::uint32_t a = 0;
    while (n % p == 0) {
      n /= p;
      ++a;
    }
    factors.push_back(PrimePower{p, a});
  }
  return factors;
}

namespace {

bool positive_integer(const Rational& r) { return sgn(r) > 0 && r.get_den() == 1; }

// sigma_{-r}(p^a) by direct summation (deliberately not the geometric closed
// form used elsewhere, so the oracle is an independent route).
Rational sigma_factor_exact(std::uint32_t p, std::uint32_t a, const Rational& r) {
  mpz_class pe;  // p^r
  mpz_ui_pow_ui(pe.get_mpz_t(), p, mpz_get_ui(r.get_num_mpz_t()));
  Rational acc(0);
  mpz_class denom(1);
  for (std::uint32_t i = 0; i <= a; ++i) {
    acc += Rational(1, denom);
    denom *= pe;
  }
  acc.canonicalize();
  return acc;
}

Enclosure sigma_factor_enclosure(std::uint32_t p, std::uint32_t a, const Rational& r,
                                 mpfr_prec_t prec) {
  const Enclosure x = pow_enclosure(Rational(static_cast<unsigned long>(p)), -r, prec);
  Enclosure term = Enclosure::from_integer(1, prec);
  Enclosure acc = term;
  for (std::uint32_t i = 1; i <= a; ++i) {
    term = term * x;
    acc = acc + term;
  }
  return acc;
}

using FactorList = std::vector<SpfTable::PrimePower>;

RealSource sigma_from_factors(std::uint32_t n, FactorList factors, const Rational& r) {
  RealSource s;
  s.desc = "sigma_{-" + fraction_string(r) + "}(" + std::to_string(n) + ")";
  if (positive_integer(r)) {
    Rational v(1);
    for (const auto& [p, a] : factors) v *= sigma_factor_exact(p, a, r);
    v.canonicalize();
    return RealSource::from_rational(std::move(v), std::move(s.desc));
  }
  s.eval = [factors = std::move(factors), r](mpfr_prec_t prec) {
    Enclosure acc = Enclosure::from_integer(1, prec);
    for (const auto& [p, a] : factors) acc = acc * sigma_factor_enclosure(p, a, r, prec);
    return acc;
  };
  return s;
}

FactorList trial_division(std::uint32_t n) {
  FactorList factors;
  for (std::uint32_t p = 2; static_cast<std::uint64_t>(p) * p <= n; ++p) {
    if (n % p) continue;
    std::uint32_t a = 0;
    while (n % p == 0) {
      n /= p;
      ++a;
    }
    factors.push_back({p, a});
  }
  if (n > 1) factors.push_back({n, 1});
  return factors;
}

}  // namespace

RealSource sigma_value(std::uint32_t n, const Rational& r) {
  if (n < 1) throw std::invalid_argument("sigma_value needs n >= 1");
  return sigma_from_factors(n, trial_division(n), r);
}

std::vector<OracleInterval> to_oracle_intervals(const std::vector<ClosedInterval>& intervals,
                                                const Rational& r) {
  std::vector<OracleInterval> out;
  out.reserve(intervals.size());
  for (const ClosedInterval& iv : intervals)
    out.push_back(OracleInterval{endpoint_source(iv.lo, r), endpoint_source(iv.hi, r),
                                 iv.lo, iv.hi});
  return out;
}

namespace {

// Relative guard band of the double-precision prefilter.  The fast path
// accumulates at most ~40 double roundings per value (pow, geometric series,
// products), so its relative error stays below ~1e-14; anything within the
// 1e-11 band of an interval boundary is re-decided with certified arithmetic,
// leaving three orders of magnitude of headroom.
constexpr double kBand = 1e-11;

struct DoubleBounds {
  double lo_hi = 0;     // upper double bound on the interval's lo endpoint
  double hi_lo = 0;     // lower double bound on the interval's hi endpoint
  double hi_hi = 0;     // upper double bound on the interval's hi endpoint
  bool lo_is_one = false;  // lo is exactly 1: sigma >= 1 makes the lower check free
};

enum class Membership { Inside, Outside, Ambiguous };

// A sigma value as both a numeric source and (when all prime indices are
// known) a symbolic product, enabling structural equality with endpoints.
struct SigmaSample {
  RealSource source;
  std::optional<EndpointExpr> expr;
};

// Three-way order of the sample against one endpoint, or nullopt when even
// the maximum precision leaves it open.  Prefers the symbolic route: a value
// equal to the endpoint *as an expression* is decided instantly, which no
// enclosure ever could.
std::optional<Order> decide(const SigmaSample& value, const RealSource& endpoint,
                            const std::optional<EndpointExpr>& endpoint_expr,
                            const Rational& r, const PrecisionPolicy& policy) {
  if (value.expr && endpoint_expr) {
    try {
      return compare_endpoints(*value.expr, *endpoint_expr, r, policy);
    } catch (const ComparisonError&) {
      return std::nullopt;
    }
  }
  const Order o = compare(value.source, endpoint, policy);
  if (o == Order::Undecided) return std::nullopt;
  return o;
}

Membership certified_membership(const SigmaSample& value, const OracleInterval& interval,
                                const Rational& r, const PrecisionPolicy& policy) {
  const auto at_lo = decide(value, interval.lo, interval.lo_expr, r, policy);
  if (!at_lo) return Membership::Ambiguous;
  if (*at_lo == Order::Less) return Membership::Outside;
  const auto at_hi = decide(value, interval.hi, interval.hi_expr, r, policy);
  if (!at_hi) return Membership::Ambiguous;
  if (*at_hi == Order::Greater) return Membership::Outside;
  return Membership::Inside;
}

}  // namespace

OracleReport oracle_run(const Rational& r, std::uint32_t limit,
                        const std::vector<OracleInterval>& intervals,
                        const PrecisionPolicy& policy, unsigned threads) {
  if (intervals.empty()) throw std::invalid_argument("oracle needs at least one interval");
  if (cmp(r, Rational(1)) <= 0) throw DomainError("oracle requires r > 1");

  const SpfTable sieve(limit);
  const std::size_t ell = intervals.size();

  std::vector<DoubleBounds> bounds(ell);
  for (std::size_t i = 0; i < ell; ++i) {
    const Enclosure lo = intervals[i].lo.enclosure(policy.base);
    const Enclosure hi = intervals[i].hi.enclosure(policy.base);
    bounds[i].lo_hi = lo.hi().to_double(MPFR_RNDU);
    bounds[i].hi_lo = hi.lo().to_double(MPFR_RNDD);
    bounds[i].hi_hi = hi.hi().to_double(MPFR_RNDU);
    bounds[i].lo_is_one = intervals[i].lo.exact && *intervals[i].lo.exact == 1;
  }

  const double r_d = mpq_get_d(r.get_mpq_t());
  constexpr std::uint32_t kChunk = 1u << 16;
  const std::uint32_t nchunks = (limit + kChunk - 1) / kChunk;

  struct ChunkResult {
    std::vector<std::uint64_t> counts;
    std::uint64_t unclassified = 0;
    std::vector<std::uint32_t> violations;
  };
  std::vector<ChunkResult> results(nchunks);
  std::atomic<std::uint32_t> next{0};

  auto classify_chunk = [&](std::uint32_t c) {
    ChunkResult& out = results[c];
    out.counts.assign(ell, 0);
    const std::uint32_t begin = c * kChunk + 1;
    const std::uint32_t end = static_cast<std::uint32_t>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(c + 1) * kChunk, limit));
    for (std::uint32_t n = begin; n <= end; ++n) {
      // Fast path: double-precision sigma value via the spf factorization.
      double v_d = 1.0;
      for (std::uint32_t m = n; m > 1;) {
        const std::uint32_t p = sieve.spf(m);
        std::uint32_t a = 0;
        while (m % p == 0) {
          m /= p;
          ++a;
        }
        const double x = std::pow(static_cast<double>(p), -r_d);
        double term = 1.0, factor = 1.0;
        for (std::uint32_t i = 1; i <= a; ++i) {
          term *= x;
          factor += term;
        }
        v_d *= factor;
      }
      std::size_t found = ell;
      for (std::size_t i = 0; i < ell; ++i) {
        const bool above_lo = bounds[i].lo_is_one || v_d * (1 - kBand) > bounds[i].lo_hi;
        if (above_lo && v_d * (1 + kBand) < bounds[i].hi_lo) {
          found = i;
          break;
        }
      }
      if (found < ell) {
        ++out.counts[found];
        continue;
      }

      // Boundary band or genuine gap: decide with certified arithmetic,
      // starting from the interval the double value points at.
      const FactorList factors = sieve.factor(n);
      SigmaSample v{sigma_from_factors(n, factors, r), unit_expr()};
      for (const auto& [p, a] : factors)
        v.expr = expr_mul_sigma(std::move(*v.expr),
                                static_cast<std::uint32_t>(first_index_at_least(p)), a);
      std::size_t guess = 0;
      while (guess < ell && v_d * (1 + kBand) > bounds[guess].hi_hi) ++guess;
      bool ambiguous = false;
      std::size_t home = ell;
      if (guess < ell) {
        const Membership m = certified_membership(v, intervals[guess], r, policy);
        if (m == Membership::Inside) home = guess;
        if (m == Membership::Ambiguous) ambiguous = true;
      }
      for (std::size_t i = 0; home == ell && i < ell; ++i) {
        if (i == guess) continue;
        const Membership m = certified_membership(v, intervals[i], r, policy);
        if (m == Membership::Inside) home = i;
        if (m == Membership::Ambiguous) ambiguous = true;
      }
      if (home < ell)
        ++out.counts[home];
      else if (ambiguous)
        ++out.unclassified;
      else
        out.violations.push_back(n);  // certifiably outside every interval
    }
  };

  auto worker = [&]() {
    for (;;) {
      const std::uint32_t c = next.fetch_add(1);
      if (c >= nchunks) return;
      classify_chunk(c);
    }
  };

  unsigned nthreads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  nthreads = std::min<unsigned>(nthreads, nchunks);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  OracleReport report;
  report.density.limit = limit;
  report.density.counts.assign(ell, 0);
  for (const ChunkResult& cr : results) {
    for (std::size_t i = 0; i < ell; ++i) report.density.counts[i] += cr.counts[i];
    report.density.unclassified += cr.unclassified;
    report.violations.insert(report.violations.end(), cr.violations.begin(),
                             cr.violations.end());
  }
  report.density.empirical.resize(ell);
  for (std::size_t i = 0; i < ell; ++i)
    report.density.empirical[i] =
        static_cast<double>(report.density.counts[i]) / static_cast<double>(limit);
  return report;
}

DensityReport empirical_densities(const Rational& r, std::uint32_t limit,
                                  const std::vector<ClosedInterval>& intervals,
                                  const PrecisionPolicy& policy) {
  return oracle_run(r, limit, to_oracle_intervals(intervals, r), policy).density;
}

std::vector<std::uint32_t> gap_violations(const Rational& r, std::uint32_t limit,
                                          const std::vector<ClosedInterval>& intervals,
                                          const PrecisionPolicy& policy) {
  return oracle_run(r, limit, to_oracle_intervals(intervals, r), policy).violations;
}

Enclosure eta_g(const Rational& s, mpfr_prec_t prec) {
  const Enclosure one = Enclosure::from_integer(1, prec);
  const Enclosure p2 = pow_enclosure(Rational(2), s, prec);
  const Enclosure p3 = pow_enclosure(Rational(3), s, prec);
  return (p2 / (p2 - one)) * ((p3 + one) / (p3 - one)) - zeta_enclosure(s, prec);
}

namespace {

// Certified sign of g: +1 / -1 when the enclosure separates from 0 at some
// precision up to policy.max, 0 when it never does.
int certified_sign_of_g(const Rational& s, const PrecisionPolicy& policy) {
  for (mpfr_prec_t prec = policy.base; prec <= policy.max; prec *= 2) {
    const Enclosure g = eta_g(s, prec);
    if (mpfr_sgn(g.lo().get()) > 0) return 1;
    if (mpfr_sgn(g.hi().get()) < 0) return -1;
  }
  return 0;
}

}  // namespace

Enclosure eta_solve(double tol, const PrecisionPolicy& policy) {
  if (!(tol > 0)) throw std::invalid_argument("eta_solve needs tol > 0");

  Rational a(3, 2), b(2);
  const int sign_a = certified_sign_of_g(a, policy);
  const int sign_b = certified_sign_of_g(b, policy);
  if (sign_a == 0 || sign_b == 0 || sign_a == sign_b)
    throw RangeError("no certified sign change of g on [3/2, 2]");

  Rational width_goal;
  mpq_set_d(width_goal.get_mpq_t(), tol);
  while (cmp(b - a, width_goal) > 0) {
    const Rational mid = (a + b) / 2;
    const int sign_mid = certified_sign_of_g(mid, policy);
    if (sign_mid == 0)
      throw ComparisonError("g(" + fraction_string(mid) + ")", "0");
    (sign_mid == sign_a ? a : b) = mid;
  }

  BigFloat lo(policy.base), hi(policy.base);
  mpfr_set_q(lo.get(), a.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi.get(), b.get_mpq_t(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

}  // namespace sigclo
