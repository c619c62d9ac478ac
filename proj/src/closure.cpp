#include "sigclo/closure.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "sigclo/errors.hpp"
#include "sigclo/primes.hpp"

namespace sigclo {

namespace {

constexpr std::uint64_t kCutoffLoopCap = 1000000;
constexpr std::uint32_t kDusartFloor = 463;  // ratio bound unconditional from p_463 on

void require_r_above_one(const Rational& r) {
  if (cmp(r, Rational(1)) <= 0)
    throw DomainError("r must be a real number greater than 1, got " + fraction_string(r));
}

// Exact test of p_{j+1} <= 2^(1/r) p_j: with r = u/v in lowest terms this is
// p_{j+1}^u <= 2^v p_j^u, an integer comparison.
bool ratio_bounded(std::uint32_t j, const Rational& r) {
  if (!mpz_fits_ulong_p(r.get_num_mpz_t()) || !mpz_fits_ulong_p(r.get_den_mpz_t()))
    throw DomainError("numerator/denominator of r too large: " + fraction_string(r));
  const unsigned long u = mpz_get_ui(r.get_num_mpz_t());
  const unsigned long v = mpz_get_ui(r.get_den_mpz_t());
  mpz_class lhs, rhs;
  mpz_ui_pow_ui(lhs.get_mpz_t(), nth_prime(j + 1), u);
  mpz_ui_pow_ui(rhs.get_mpz_t(), nth_prime(j), u);
  mpz_mul_2exp(rhs.get_mpz_t(), rhs.get_mpz_t(), v);
  return lhs <= rhs;
}

// 1 + p_j^-r as a comparison source (exact for positive-integer r).
RealSource one_plus_prime_power(std::uint32_t j, const Rational& r) {
  const Rational p(static_cast<unsigned long>(nth_prime(j)));
  const std::string desc = "1+" + p.get_str() + "^-(" + fraction_string(r) + ")";
  if (sgn(r) > 0 && r.get_den() == 1) {
    mpz_class P;
    mpz_pow_ui(P.get_mpz_t(), p.get_num_mpz_t(), mpz_get_ui(r.get_num_mpz_t()));
    return RealSource::from_rational(Rational(P + 1, P), desc);
  }
  RealSource s;
  s.eval = [p, r](mpfr_prec_t prec) {
    return Enclosure::from_integer(1, prec) + pow_enclosure(p, -r, prec);
  };
  s.desc = desc;
  return s;
}

Rational euler_phi_density(std::uint32_t j) {
  Rational acc(1);
  for (std::uint32_t k = 1; k <= j; ++k) {
    const unsigned long p = nth_prime(k);
    acc *= Rational(p - 1, p);
  }
  acc.canonicalize();
  return acc;
}

}  // namespace

std::uint32_t find_jprime(const Rational& r, const PrecisionPolicy& policy) {
  require_r_above_one(r);

  // B = max{463, least index with p_j >= exp(sqrt(1/(2(2^(1/r)-1))))},
  // the exp bound rounded outward (up).
  const mpfr_prec_t prec = policy.base;
  const Enclosure two = Enclosure::from_integer(2, prec);
  const Enclosure root = pow_enclosure(Rational(2), Rational(1) / r, prec);  // 2^(1/r) > 1
  const Enclosure bound =
      exp(sqrt(recip(two * (root - Enclosure::from_integer(1, prec)))));
  BigFloat ceil_hi(prec);
  mpfr_ceil(ceil_hi.get(), bound.hi().get());
  const unsigned long threshold = mpfr_get_ui(ceil_hi.get(), MPFR_RNDU);
  const std::uint32_t exp_index =
      threshold < 2 ? 1u : static_cast<std::uint32_t>(first_index_at_least(threshold));
  const std::uint32_t B = std::max(kDusartFloor, exp_index);

  std::uint32_t last_failure = 0;
  for (std::uint32_t j = B; j >= 1; --j) {
    if (!ratio_bounded(j, r)) {
      last_failure = j;
      break;
    }
  }
  return last_failure + 1;
}

std::uint32_t compute_j0(const Rational& r, std::uint32_t j_prime,
                         const PrecisionPolicy& policy) {
  require_r_above_one(r);
  std::uint32_t j0 = 0;
  for (std::uint32_t j = 1; j < j_prime; ++j) {
    const RealSource tail = endpoint_source(tail_expr(j), r);
    const RealSource threshold = one_plus_prime_power(j, r);
    const Order o = compare(tail, threshold, policy);
    if (o == Order::Undecided) throw ComparisonError(tail.desc, threshold.desc);
    if (o == Order::Less) j0 = j;  // T_j < 1 + p_j^-r: inequality fails at j
  }
  return j0;
}

std::uint32_t compute_j0(const Rational& r, const PrecisionPolicy& policy) {
  return compute_j0(r, find_jprime(r, policy), policy);
}

LevelState base_level(const Rational& r, std::uint32_t j0) {
  require_r_above_one(r);
  LevelState state;
  state.level = j0;
  state.intervals.push_back(ClosedInterval{unit_expr(), tail_expr(j0)});
  state.densities.push_back(euler_phi_density(j0));
  return state;
}

std::uint64_t cutoff_exponent(std::uint32_t j, const ClosedInterval& interval,
                              const Rational& r, const PrecisionPolicy& policy) {
  // sigma(p^{a+1})/sigma(p^a) <= hi/lo  <=>  sigma(p^{a+1}) lo <= sigma(p^a) hi;
  // everything is positive, so compare the cross products as endpoint exprs.
  for (std::uint64_t a = 0; a <= kCutoffLoopCap; ++a) {
    const EndpointExpr lhs = expr_mul_sigma(interval.lo, j, a + 1);
    const EndpointExpr rhs = expr_mul_sigma(interval.hi, j, a);
    if (compare_endpoints(lhs, rhs, r, policy) != Order::Greater) return a;
  }
  throw std::logic_error("cutoff exponent exceeded sanity cap at prime index " +
                         std::to_string(j) + "; comparison policy is likely broken");
}

std::vector<ClosedInterval> expand_interval(std::uint32_t j, const ClosedInterval& interval,
                                            const Rational& r,
                                            const PrecisionPolicy& policy) {
  const std::uint64_t a0 = cutoff_exponent(j, interval, r, policy);
  std::vector<ClosedInterval> pieces;
  pieces.reserve(static_cast<std::size_t>(a0) + 1);
  for (std::uint64_t a = 0; a < a0; ++a)
    pieces.push_back(ClosedInterval{expr_mul_sigma(interval.lo, j, a),
                                    expr_mul_sigma(interval.hi, j, a)});
  pieces.push_back(ClosedInterval{expr_mul_sigma(interval.lo, j, a0),
                                  expr_mul_sigma(interval.hi, j, kInfiniteExponent)});
  return pieces;
}

MergeResult merge_intervals(const std::vector<ClosedInterval>& intervals, const Rational& r,
                            const PrecisionPolicy& policy) {
  std::vector<std::size_t> order(intervals.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return compare_endpoints(intervals[a].lo, intervals[b].lo, r, policy) == Order::Less;
  });

  MergeResult result;
  result.component_of.resize(intervals.size());
  for (const std::size_t idx : order) {
    const ClosedInterval& next = intervals[idx];
    bool joined = false;
    if (!result.components.empty()) {
      ClosedInterval& current = result.components.back();
      // Closed intervals: next.lo <= current.hi (touching included) joins.
      if (compare_endpoints(next.lo, current.hi, r, policy) != Order::Greater) {
        if (compare_endpoints(next.hi, current.hi, r, policy) == Order::Greater)
          current.hi = next.hi;
        joined = true;
      }
    }
    if (!joined) result.components.push_back(next);
    result.component_of[idx] = result.components.size() - 1;
  }
  return result;
}

LevelState step_down(const LevelState& state, const Rational& r,
                     const PrecisionPolicy& policy) {
  if (state.level == 0) throw std::logic_error("step_down called at level 0");
  const std::uint32_t j = state.level;
  const unsigned long p = nth_prime(j);

  // Flatten all expanded pieces, remembering source interval and exponent.
  struct Piece {
    std::size_t source;
    std::uint64_t a;
    std::uint64_t a0;
  };
  std::vector<ClosedInterval> pieces;
  std::vector<Piece> origin;
  for (std::size_t k = 0; k < state.intervals.size(); ++k) {
    std::vector<ClosedInterval> expanded = expand_interval(j, state.intervals[k], r, policy);
    const std::uint64_t a0 = expanded.size() - 1;
    for (std::uint64_t a = 0; a <= a0; ++a) {
      pieces.push_back(std::move(expanded[a]));
      origin.push_back(Piece{k, a, a0});
    }
  }

  const MergeResult merged = merge_intervals(pieces, r, policy);

  // d_{j-1,h} = sum_k d_{j,k} (sum_{a<a0} delta/p^a + delta_last p^{1-a0}/(p-1)).
  std::vector<Rational> densities(merged.components.size(), Rational(0));
  for (std::size_t i = 0; i < origin.size(); ++i) {
    const Piece& piece = origin[i];
    Rational weight;
    if (piece.a < piece.a0) {
      mpz_class pa;
      mpz_ui_pow_ui(pa.get_mpz_t(), p, static_cast<unsigned long>(piece.a));
      weight = Rational(1, pa);
    } else if (piece.a0 == 0) {
      weight = Rational(p, p - 1);
    } else {
      mpz_class pa;
      mpz_ui_pow_ui(pa.get_mpz_t(), p, static_cast<unsigned long>(piece.a0) - 1);
      weight = Rational(1, pa * (p - 1));
    }
    densities[merged.component_of[i]] += state.densities[piece.source] * weight;
  }
  for (Rational& d : densities) d.canonicalize();

  LevelState next;
  next.level = j - 1;
  next.intervals = merged.components;
  next.densities = std::move(densities);
  return next;
}

void validate_level(const LevelState& state, const Rational& r, std::uint32_t j0,
                    const PrecisionPolicy& policy) {
  if (state.intervals.size() != state.densities.size())
    throw std::logic_error("level state misaligned");
  if (state.intervals.empty()) throw std::logic_error("level state has no intervals");

  if (!(state.intervals.front().lo == unit_expr()))
    throw std::logic_error("first interval must start at 1");

  // The topmost endpoint is the full product sigma(p^inf) over the primes
  // consumed so far times the tail, which telescopes back to T_level.
  EndpointExpr expected_top = tail_expr(j0);
  for (std::uint32_t k = state.level + 1; k <= j0; ++k)
    expected_top = expr_mul_sigma(expected_top, k, kInfiniteExponent);
  if (!(state.intervals.back().hi == expected_top))
    throw std::logic_error("last interval endpoint has unexpected symbolic form");

  Rational sum(0);
  for (std::size_t k = 0; k < state.intervals.size(); ++k) {
    if (sgn(state.densities[k]) <= 0) throw std::logic_error("density must be positive");
    sum += state.densities[k];
    const ClosedInterval& cur = state.intervals[k];
    if (compare_endpoints(cur.lo, cur.hi, r, policy) != Order::Less)
      throw std::logic_error("interval is degenerate or reversed");
    if (k + 1 < state.intervals.size() &&
        compare_endpoints(cur.hi, state.intervals[k + 1].lo, r, policy) != Order::Less)
      throw std::logic_error("intervals are not strictly separated");
  }
  sum.canonicalize();
  if (cmp(sum, euler_phi_density(state.level)) != 0)
    throw std::logic_error("densities do not sum to prod (1 - 1/p_k) at level " +
                           std::to_string(state.level));
}

ClosureResult closure(const Rational& r, const PrecisionPolicy& policy) {
  require_r_above_one(r);

  ClosureResult result;
  result.r = r;
  result.precision_used = policy.base;
  result.j_prime = find_jprime(r, policy);
  result.j0 = compute_j0(r, result.j_prime, policy);

  LevelState state = base_level(r, result.j0);
  validate_level(state, r, result.j0, policy);
  while (state.level > 0) {
    state = step_down(state, r, policy);
    validate_level(state, r, result.j0, policy);
  }

  // Level 0 closes the circle: densities sum to 1 and the top endpoint is an
  // enclosure of zeta(r) (full Euler product).
  Rational total(0);
  for (const Rational& d : state.densities) total += d;
  total.canonicalize();
  if (cmp(total, Rational(1)) != 0)
    throw std::logic_error("level-0 densities do not sum to 1");
  if (!expr_value(state.intervals.back().hi, r, policy.base)
           .overlaps(zeta_enclosure(r, policy.base)))
    throw std::logic_error("level-0 upper endpoint does not enclose zeta(r)");

  result.final = std::move(state);
  return result;
}

}  // namespace sigclo
