#pragma once

#include <cstdint>
#include <vector>

#include "sigclo/endpoints.hpp"
#include "sigclo/rational.hpp"
#include "sigclo/realnum.hpp"

namespace sigclo {

// State of the backward recursion at one level j: the closure of sigma_{-r}
// over integers free of the first j primes, as disjoint closed intervals
// I_{j,1} < ... < I_{j,l_j} with exact densities d_{j,k} relative to all of N+.
struct LevelState {
  std::uint32_t level = 0;
  std::vector<ClosedInterval> intervals;
  std::vector<Rational> densities;  // aligned with intervals
};

struct ClosureResult {
  Rational r;
  std::uint32_t j_prime = 0;
  std::uint32_t j0 = 0;
  LevelState final;         // level 0
  mpfr_prec_t precision_used = 0;  // base precision of the policy in effect
};

// Minimal index j' such that p_{j+1} <= 2^(1/r) p_j for every j in [j', B],
// where B = max{463, least index with p_j >= exp(sqrt(1/(2(2^(1/r)-1))))};
// beyond B the inequality holds unconditionally (Dusart).  The ratio test is
// exact: for r = u/v it reduces to the integer comparison
// p_{j+1}^u <= 2^v p_j^u.
std::uint32_t find_jprime(const Rational& r, const PrecisionPolicy& policy = {});

// Largest j in [1, j') with T_j < 1 + p_j^-r (0 if none); for j >= j' the
// reverse inequality is guaranteed, so T_j >= 1 + p_j^-r for all j > j0.
std::uint32_t compute_j0(const Rational& r, std::uint32_t j_prime,
                         const PrecisionPolicy& policy = {});
std::uint32_t compute_j0(const Rational& r, const PrecisionPolicy& policy = {});

// Level j0: the single interval [1, T_j0] carrying density
// prod_{k<=j0} (1 - 1/p_k).
LevelState base_level(const Rational& r, std::uint32_t j0);

// Least a with sigma(p_j^{a+1})/sigma(p_j^a) <= hi/lo; decided Equal counts as
// satisfying the threshold.  The ratio is nonincreasing in a and tends to 1,
// so the loop terminates; a sanity cap guards against comparison bugs.
std::uint64_t cutoff_exponent(std::uint32_t j, const ClosedInterval& interval,
                              const Rational& r, const PrecisionPolicy& policy = {});

// J_a = sigma(p_j^a) * I for a < a0, and J_{a0} = [sigma(p_j^{a0}) lo,
// sigma(p_j^inf) hi].  Consecutive pieces are strictly separated: that is
// precisely the chain of Greater comparisons the cutoff search performed.
std::vector<ClosedInterval> expand_interval(std::uint32_t j, const ClosedInterval& interval,
                                            const Rational& r,
                                            const PrecisionPolicy& policy = {});

// Union of closed intervals as ordered disjoint components; touching
// endpoints merge.  component_of[i] gives the component index of input i.
struct MergeResult {
  std::vector<ClosedInterval> components;
  std::vector<std::size_t> component_of;
};
MergeResult merge_intervals(const std::vector<ClosedInterval>& intervals, const Rational& r,
                            const PrecisionPolicy& policy = {});

// One step of the backward recursion: expand every interval of level j with
// prime p_j, merge, and push densities through the delta-weighted geometric
// sums, all in exact rational arithmetic.
LevelState step_down(const LevelState& state, const Rational& r,
                     const PrecisionPolicy& policy = {});

// Full level invariant check (sortedness, certified gaps, density identity);
// throws std::logic_error on violation.  j0 fixes the expected tail shape.
void validate_level(const LevelState& state, const Rational& r, std::uint32_t j0,
                    const PrecisionPolicy& policy = {});

// The main algorithm: Cl(sigma_{-r}(N+)) as disjoint closed intervals with
// exact densities summing to 1.  Throws DomainError for r <= 1.
ClosureResult closure(const Rational& r, const PrecisionPolicy& policy = {});

}  // namespace sigclo
