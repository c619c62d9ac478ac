// Acceptance gate: one line per criterion, nonzero exit iff any fails.
// Tolerances and runtime budgets are pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <numbers>
#include <string>
#include <vector>

#include "sigclo/cli.hpp"
#include "sigclo/closure.hpp"
#include "sigclo/oracle.hpp"
#include "sigclo/primes.hpp"
#include "sigclo/report.hpp"

using namespace sigclo;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& what, const std::string& detail = "") {
  std::printf("criterion %d: %s — %s%s%s\n", criterion, ok ? "PASS" : "FAIL", what.c_str(),
              detail.empty() ? "" : ": ", detail.c_str());
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct CheckFail {
  std::string message;
};

void expect(bool cond, const std::string& message) {
  if (!cond) throw CheckFail{message};
}

void run(int criterion, const std::string& what, void (*body)()) {
  try {
    body();
    report(criterion, true, what);
  } catch (const CheckFail& f) {
    report(criterion, false, what, f.message);
  } catch (const std::exception& e) {
    report(criterion, false, what, std::string("exception: ") + e.what());
  }
}

EndpointExpr parse(const std::string& text) {
  const auto e = parse_expr(text);
  expect(e.has_value(), "internal: bad expression " + text);
  return *e;
}

// pi^2/den to ~75 correct digits, from MPFR's pi constant — a route that
// never touches the zeta code under test.
Enclosure pi_squared_over(unsigned long den) {
  const mpfr_prec_t prec = 256;
  BigFloat lo(prec), hi(prec);
  mpfr_const_pi(lo.get(), MPFR_RNDD);
  mpfr_const_pi(hi.get(), MPFR_RNDU);
  const Enclosure pi(lo, hi);
  return div(mul(pi, pi), Enclosure::from_integer(static_cast<long>(den), prec));
}

bool agrees_to_30_digits(const Enclosure& enclosure, const Enclosure& reference) {
  return enclosure.overlaps(reference) && enclosure.width_double() < 1e-30 &&
         reference.width_double() < 1e-30;
}

// The 20 sample exponents of criteria 2 and 3: r = 1.01 + 0.19 k in (1.01, 5).
std::vector<Rational> sample_r() {
  std::vector<Rational> out;
  for (int k = 1; k <= 20; ++k) {
    Rational r = Rational(101, 100) + Rational(19 * k, 100);
    r.canonicalize();
    out.push_back(r);
  }
  return out;
}

void criterion1() {
  const auto start = std::chrono::steady_clock::now();
  const Rational r(2);
  const ClosureResult result = closure(r);

  // Intermediates of the backward recursion.
  expect(result.j0 == 2, "j0 != 2");
  const LevelState base = base_level(r, result.j0);
  expect(cutoff_exponent(2, base.intervals[0], r) == 1, "a_{2,1} != 1");
  const LevelState level1 = step_down(base, r);
  expect(level1.intervals.size() == 2, "ell_1 != 2");
  expect(level1.densities[0] == Rational(1, 3), "d_{1,1} != 1/3");
  expect(level1.densities[1] == Rational(1, 6), "d_{1,2} != 1/6");
  expect(cutoff_exponent(1, level1.intervals[0], r) == 1, "a_{1,1} != 1");
  expect(cutoff_exponent(1, level1.intervals[1], r) == 1, "a_{1,2} != 1");

  // Final structure: three intervals with the pinned closed forms.
  expect(result.final.intervals.size() == 3, "ell != 3");
  const struct {
    const char* expr;
    Rational coeff;
    bool has_zeta;
  } golden[6] = {
      {"1", Rational(1), false},
      {"T_2", Rational(2, 3), true},
      {"sigma(3^1)", Rational(10, 9), false},
      {"sigma(3^inf)*T_2", Rational(3, 4), true},
      {"sigma(2^1)", Rational(5, 4), false},
      {"sigma(2^inf)*sigma(3^inf)*T_2", Rational(1), true},
  };
  for (int i = 0; i < 6; ++i) {
    const ClosedInterval& iv = result.final.intervals[i / 2];
    const EndpointExpr& e = (i % 2) ? iv.hi : iv.lo;
    expect(e == parse(golden[i].expr),
           std::string("endpoint ") + std::to_string(i) + " is not " + golden[i].expr);
    const auto form = closed_form(e, r);
    expect(form.has_value(), "closed form missing");
    expect(form->coeff == golden[i].coeff && form->has_zeta == golden[i].has_zeta,
           std::string("closed form of ") + golden[i].expr + " wrong");
  }
  expect(result.final.densities ==
             std::vector<Rational>{Rational(1, 3), Rational(1, 6), Rational(1, 2)},
         "densities != (1/3, 1/6, 1/2)");

  // Numeric enclosures against an independent pi^2 route, 30 digits.
  const unsigned long dens[3] = {9, 8, 6};
  for (int k = 0; k < 3; ++k) {
    const Enclosure value = expr_value(result.final.intervals[k].hi, r, 128);
    expect(agrees_to_30_digits(value, pi_squared_over(dens[k])),
           "upper endpoint " + std::to_string(k + 1) + " does not match pi^2/" +
               std::to_string(dens[k]) + " to 30 digits");
  }

  expect(seconds_since(start) < 1.0, "runtime exceeded 1 s");
}

void criterion2() {
  const auto start = std::chrono::steady_clock::now();
  for (const Rational& r : sample_r()) {
    const std::uint32_t j0 = compute_j0(r);
    LevelState state = base_level(r, j0);
    while (true) {
      // Per-level density identity, recomputed from scratch.
      Rational sum(0);
      for (const Rational& d : state.densities) {
        expect(sgn(d) > 0, "non-positive density at r = " + fraction_string(r));
        sum += d;
      }
      sum.canonicalize();
      Rational phi(1);
      for (std::uint32_t k = 1; k <= state.level; ++k) {
        const unsigned long p = nth_prime(k);
        phi *= Rational(p - 1, p);
      }
      phi.canonicalize();
      expect(sum == phi, "level " + std::to_string(state.level) + " density sum wrong at r = " +
                             fraction_string(r));
      if (state.level == 0) break;
      state = step_down(state, r);
    }
    expect(!state.densities.empty(), "empty level 0");
  }
  expect(seconds_since(start) < 30.0, "runtime exceeded 30 s");
}

void criterion3() {
  const PrecisionPolicy policy;
  for (const Rational& r : sample_r()) {
    const ClosureResult result = closure(r);
    const auto& intervals = result.final.intervals;
    expect(!intervals.empty(), "no intervals at r = " + fraction_string(r));
    expect(intervals.front().lo == unit_expr(), "first lo != 1 at r = " + fraction_string(r));
    for (std::size_t k = 0; k < intervals.size(); ++k) {
      expect(compare_endpoints(intervals[k].lo, intervals[k].hi, r, policy) == Order::Less,
             "degenerate interval at r = " + fraction_string(r));
      if (k + 1 < intervals.size())
        expect(compare_endpoints(intervals[k].hi, intervals[k + 1].lo, r, policy) ==
                   Order::Less,
               "uncertified gap at r = " + fraction_string(r));
    }
    const Enclosure top = expr_value(intervals.back().hi, r, policy.base);
    expect(top.overlaps(zeta_enclosure(r, policy.base)),
           "last hi does not enclose zeta(r) at r = " + fraction_string(r));
  }
}

void criterion4() {
  const auto start = std::chrono::steady_clock::now();
  for (const Rational& r : {Rational(2), Rational(5, 2), Rational(3)}) {
    const std::uint32_t limit = 1000000;
    const ClosureResult result = closure(r);
    const OracleReport rep =
        oracle_run(r, limit, to_oracle_intervals(result.final.intervals, r));
    expect(rep.violations.empty(), std::to_string(rep.violations.size()) +
                                       " gap violation(s) at r = " + fraction_string(r));
    std::uint64_t classified = 0;
    for (const std::uint64_t c : rep.density.counts) classified += c;
    expect(classified + rep.density.unclassified == limit,
           "classification does not partition 1..N at r = " + fraction_string(r));
    expect(rep.density.unclassified <= limit / 1000,
           "too many unclassified values at r = " + fraction_string(r));
    if (r == Rational(2)) {
      const double exact[3] = {1.0 / 3, 1.0 / 6, 1.0 / 2};
      for (int k = 0; k < 3; ++k)
        expect(std::abs(rep.density.empirical[k] - exact[k]) <= 0.01,
               "empirical density " + std::to_string(k + 1) + " off by more than 0.01");
    }
  }
  expect(seconds_since(start) < 60.0, "runtime exceeded 60 s");
}

void criterion5() {
  const auto start = std::chrono::steady_clock::now();
  const Enclosure bracket = eta_solve(1e-6);
  Rational eta_ref(18877909, 10000000);
  eta_ref.canonicalize();
  expect(bracket.contains_rational(eta_ref), "bracket misses 1.8877909");
  expect(bracket.width_double() <= 1e-6, "bracket wider than 1e-6");
  expect(seconds_since(start) < 5.0, "runtime exceeded 5 s");
}

void criterion6() {
  const ClosureResult dense = closure(Rational(9, 5));
  expect(dense.final.intervals.size() == 1, "ell != 1 at r = 1.8");
  expect(dense.final.intervals[0] == ClosedInterval{unit_expr(), tail_expr(0)},
         "interval at r = 1.8 is not [1, zeta(9/5)]");
  const Enclosure hi = expr_value(dense.final.intervals[0].hi, Rational(9, 5), 128);
  expect(hi.overlaps(zeta_enclosure(Rational(9, 5), 128)),
         "upper endpoint does not enclose zeta(9/5)");

  const ClosureResult split = closure(Rational(39, 20));
  expect(split.final.intervals.size() >= 2, "ell < 2 at r = 1.95");
}

void criterion7() {
  ScanConfig config;
  config.r_min = Rational(3, 2);
  config.r_max = Rational(7, 2);
  config.step = Rational(1, 100);
  const std::vector<ScanRow> rows = run_scan(config);
  expect(rows.size() == 201, "expected 201 rows, got " + std::to_string(rows.size()));
  for (const ScanRow& row : rows)
    expect(row.error.empty(), "error row at r = " + row.r_text + ": " + row.error);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i <= 38)  // r = 1.50 .. 1.88
      expect(rows[i].ell == 1, "ell != 1 at r = " + rows[i].r_text);
  }
  expect(rows.back().ell >= 3, "ell < 3 at r = 3.5");

  // Raster regression: the r = 2.00 band against the golden normalized
  // endpoints, recomputed from double-precision pi.
  const unsigned width = 1000;
  const std::string pgm = render_pgm(rows, width, 0);
  const std::string header =
      "P5\n" + std::to_string(width) + " " + std::to_string(rows.size()) + "\n255\n";
  expect(pgm.rfind(header, 0) == 0, "unexpected PGM header");
  const std::size_t r2_index = 50;  // r = 1.5 + 50/100
  expect(rows[r2_index].r_text == "2", "row 50 is not r = 2");
  const std::size_t y = rows.size() - 1 - r2_index;  // r increases upward
  const char* band = pgm.data() + header.size() + y * width;

  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double z = pi2 / 6;
  const double x_bounds[6] = {0.0,
                              (pi2 / 9 - 1) / (z - 1),
                              (10.0 / 9 - 1) / (z - 1),
                              (pi2 / 8 - 1) / (z - 1),
                              (5.0 / 4 - 1) / (z - 1),
                              1.0};
  for (unsigned c = 0; c < width; ++c) {
    const double x = (c + 0.5) / width;
    double nearest = 1.0;
    bool expected_black = false;
    for (int k = 0; k < 6; k += 2) {
      expected_black = expected_black || (x_bounds[k] <= x && x <= x_bounds[k + 1]);
      for (int b = 0; b < 2; ++b)
        nearest = std::min(nearest, std::abs(x - x_bounds[k + b]));
    }
    if (nearest <= 1.0 / width) continue;  // within one pixel of a boundary
    const bool actual_black = band[c] == 0;
    expect(actual_black == expected_black,
           "pixel " + std::to_string(c) + " of the r = 2 band disagrees beyond 1 px");
  }
}

void criterion8() {
  for (const Rational& r : {Rational(2), Rational(9, 5), Rational(39, 20)}) {
    const PrecisionPolicy base_policy;
    PrecisionPolicy doubled = base_policy;
    doubled.base *= 2;
    const std::string a = symbolic_text(closure(r, base_policy));
    const std::string b = symbolic_text(closure(r, doubled));
    expect(!a.empty() && a == b,
           "symbolic report changed under doubled precision at r = " + fraction_string(r));
  }
}

}  // namespace

int main() {
  run(1, "golden structure, closed forms and 30-digit numerics for r = 2", criterion1);
  run(2, "exact density conservation per level for 20 sampled r", criterion2);
  run(3, "certified interval ordering, gaps and zeta cap for 20 sampled r", criterion3);
  run(4, "brute-force oracle coverage at N = 10^6 for r in {2, 5/2, 3}", criterion4);
  run(5, "eta bracket of width <= 1e-6 containing 1.8877909", criterion5);
  run(6, "single dense interval at r = 1.8, split closure at r = 1.95", criterion6);
  run(7, "error-free scan of [1.5, 3.5] and raster regression of the r = 2 band", criterion7);
  run(8, "byte-identical symbolic reports under doubled precision", criterion8);
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures ? 1 : 0;
}
