#pragma once

#include <cstdint>
#include <vector>

#include "sigclo/closure.hpp"
#include "sigclo/endpoints.hpp"
#include "sigclo/rational.hpp"
#include "sigclo/realnum.hpp"

namespace sigclo {

// Smallest-prime-factor table for 2..limit (linear sieve), the factorization
// backbone of the brute-force enumeration.
class SpfTable {
public:
  explicit SpfTable(std::uint32_t limit);

  std::uint32_t limit() const { return limit_; }
  std::uint32_t spf(std::uint32_t n) const;  // least prime factor, 2 <= n <= limit

  struct PrimePower {
    std::uint32_t p;
    std::uint32_t a;
  };
  std::vector<PrimePower> factor(std::uint32_t n) const;  // 1 <= n <= limit

private:
  std::uint32_t limit_;
  std::vector<std::uint32_t> spf_;
};

// sigma_{-r}(n) as a comparison source: exact rational for positive-integer r,
// certified enclosure otherwise.  Factors n by trial division, so it does not
// need a sieve (the bulk enumeration uses SpfTable internally instead).
RealSource sigma_value(std::uint32_t n, const Rational& r);

// Intervals the oracle checks against.  Normally derived from a ClosureResult,
// but endpoints may also be plain rationals (e.g. a sabotaged override file),
// which ClosedInterval cannot express.  When an endpoint came from an
// expression the symbolic form is kept: a sigma value that lands exactly on
// sigma(m)*... can then be decided structurally, where numerics alone would
// stay ambiguous forever.
struct OracleInterval {
  RealSource lo;
  RealSource hi;
  std::optional<EndpointExpr> lo_expr;
  std::optional<EndpointExpr> hi_expr;
};

std::vector<OracleInterval> to_oracle_intervals(const std::vector<ClosedInterval>& intervals,
                                                const Rational& r);

struct DensityReport {
  std::uint64_t limit = 0;
  std::vector<std::uint64_t> counts;  // per interval, aligned with input order
  std::uint64_t unclassified = 0;     // boundary-ambiguous values, never guessed
  std::vector<double> empirical;      // counts / limit
};

struct OracleReport {
  DensityReport density;
  std::vector<std::uint32_t> violations;  // n certifiably outside every interval
};

// Enumerate n = 1..limit, classify every sigma_{-r}(n) into an interval,
// count violations (values certifiably in a gap) and unclassified values.
// Work is chunked across threads (0 = hardware default); counts merge by
// exact addition, so the result is deterministic.
OracleReport oracle_run(const Rational& r, std::uint32_t limit,
                        const std::vector<OracleInterval>& intervals,
                        const PrecisionPolicy& policy = {}, unsigned threads = 0);

// Single-purpose wrappers over oracle_run.
DensityReport empirical_densities(const Rational& r, std::uint32_t limit,
                                  const std::vector<ClosedInterval>& intervals,
                                  const PrecisionPolicy& policy = {});
std::vector<std::uint32_t> gap_violations(const Rational& r, std::uint32_t limit,
                                          const std::vector<ClosedInterval>& intervals,
                                          const PrecisionPolicy& policy = {});

// g(s) = 2^s/(2^s - 1) * (3^s + 1)/(3^s - 1) - zeta(s), whose unique root in
// (1, 2] is the threshold eta below which the closure is a single interval.
Enclosure eta_g(const Rational& s, mpfr_prec_t prec);

// Bisection for eta over [3/2, 2] with certified signs at every step; returns
// a bracket of width <= tol.  Throws RangeError if the initial bracket's sign
// change cannot be certified.
Enclosure eta_solve(double tol, const PrecisionPolicy& policy = {});

}  // namespace sigclo
