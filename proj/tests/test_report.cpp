#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigclo/cli.hpp"
#include "sigclo/closure.hpp"
#include "sigclo/report.hpp"

using sigclo::ClosureResult;
using sigclo::ParsedReport;
using sigclo::PrecisionPolicy;
using sigclo::Rational;
using sigclo::ScanRow;

namespace {

const ClosureResult& closure2() {
  static const ClosureResult result = sigclo::closure(Rational(2));
  return result;
}

std::size_t count_occurrences(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("report_json round-trips through report_from_json") {
  const PrecisionPolicy policy;
  const std::string json = sigclo::report_json(closure2(), "2", policy);
  const ParsedReport back = sigclo::report_from_json(json);
  CHECK(back.r_text == "2");
  CHECK(back.r == Rational(2));
  CHECK(back.precision_bits == static_cast<long>(policy.base));
  CHECK(back.j_prime == 5);
  CHECK(back.j0 == 2);
  CHECK(back.intervals == closure2().final.intervals);
  CHECK(back.densities == closure2().final.densities);
}

TEST_CASE("report_json content spot checks") {
  const std::string json = sigclo::report_json(closure2(), "2", PrecisionPolicy{});
  CHECK(json.find("\"ell\": 3") != std::string::npos);
  CHECK(json.find("\"closed_form\": \"(2/3)*zeta(2)\"") != std::string::npos);
  CHECK(json.find("\"closed_form\": \"zeta(2)\"") != std::string::npos);
  CHECK(json.find("\"closed_form\": \"10/9\"") != std::string::npos);
  CHECK(json.find("\"expr\": \"sigma(2^inf)*sigma(3^inf)*T_2\"") != std::string::npos);
  // zeta(2) = 1.6449340668... to 40 digits, outward rounded on both sides.
  CHECK(json.find("1.6449340668482264364724151666460251892") != std::string::npos);
}

TEST_CASE("report_from_json rejects malformed input") {
  const std::string good = sigclo::report_json(closure2(), "2", PrecisionPolicy{});
  CHECK_THROWS_AS(sigclo::report_from_json("{ not json"), std::runtime_error);
  CHECK_THROWS_AS(sigclo::report_from_json("{}"), std::runtime_error);

  std::string bad_ell = good;
  const auto pos = bad_ell.find("\"ell\": 3");
  REQUIRE(pos != std::string::npos);
  bad_ell.replace(pos, 8, "\"ell\": 4");
  CHECK_THROWS_AS(sigclo::report_from_json(bad_ell), std::runtime_error);

  std::string bad_expr = good;
  const auto epos = bad_expr.find("sigma(3^1)");
  REQUIRE(epos != std::string::npos);
  bad_expr.replace(epos, 10, "sigma(4^1)");
  CHECK_THROWS_AS(sigclo::report_from_json(bad_expr), std::runtime_error);
}

TEST_CASE("report_text is a readable listing") {
  const std::string text = sigclo::report_text(closure2(), "2", PrecisionPolicy{});
  CHECK(text.find("r = 2") != std::string::npos);
  CHECK(text.find("j_prime = 5, j0 = 2, ell = 3") != std::string::npos);
  CHECK(text.find("interval 3:") != std::string::npos);
  CHECK(text.find("density: 1/2 ~ 0.5") != std::string::npos);
  CHECK(text.find("sigma(2^inf)*sigma(3^inf)*T_2") != std::string::npos);
}

TEST_CASE("symbolic_text golden output for r = 2") {
  const std::string expected =
      "r=2\n"
      "j_prime=5\n"
      "j0=2\n"
      "ell=3\n"
      "interval 1: lo=1 hi=T_2 density=1/3\n"
      "interval 2: lo=sigma(3^1) hi=sigma(3^inf)*T_2 density=1/6\n"
      "interval 3: lo=sigma(2^1) hi=sigma(2^inf)*sigma(3^inf)*T_2 density=1/2\n";
  CHECK(sigclo::symbolic_text(closure2()) == expected);
}

TEST_CASE("symbolic_text is invariant under precision doubling") {
  PrecisionPolicy doubled;
  doubled.base *= 2;
  doubled.max *= 2;
  const ClosureResult redo = sigclo::closure(Rational(2), doubled);
  CHECK(sigclo::symbolic_text(redo) == sigclo::symbolic_text(closure2()));
}

TEST_CASE("scan_row normalizes endpoints into [0, 1]") {
  const ScanRow row = sigclo::scan_row(closure2(), "2", PrecisionPolicy{});
  CHECK(row.r_text == "2");
  CHECK(row.ell == 3);
  CHECK(row.error.empty());
  REQUIRE(row.endpoints.size() == 6);
  const double expected[6] = {0.0, 0.1498181, 0.1722831, 0.3623635, 0.3876369, 1.0};
  for (int i = 0; i < 6; ++i) CHECK(std::abs(row.endpoints[i] - expected[i]) < 2e-6);
  CHECK(row.densities == std::vector<std::string>{"1/3", "1/6", "1/2"});
}

TEST_CASE("scan CSV round-trips, including quoting") {
  ScanRow ok = sigclo::scan_row(closure2(), "2", PrecisionPolicy{});
  ScanRow failed;
  failed.r_text = "1";
  failed.ell = 0;
  failed.error = "closure needs r > 1, got \"1\", aborting";
  const std::string csv = sigclo::scan_csv({ok, failed});
  CHECK(csv.rfind("r,ell,endpoints,densities,error\n", 0) == 0);

  const auto rows = sigclo::parse_scan_csv(csv);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].r_text == "2");
  CHECK(rows[0].ell == 3);
  CHECK(rows[0].densities == ok.densities);
  REQUIRE(rows[0].endpoints.size() == 6);
  for (int i = 0; i < 6; ++i) CHECK(std::abs(rows[0].endpoints[i] - ok.endpoints[i]) < 1e-9);
  CHECK(rows[1].error == failed.error);
  CHECK(rows[1].ell == 0);
}

TEST_CASE("parse_scan_csv rejects garbage") {
  CHECK_THROWS_AS(sigclo::parse_scan_csv("nonsense\n1,2,3\n"), std::runtime_error);
  CHECK_THROWS_AS(sigclo::parse_scan_csv("r,ell,endpoints,densities,error\n2,3\n"),
                  std::runtime_error);
  // Endpoint list length must be 2*ell on a successful row.
  CHECK_THROWS_AS(
      sigclo::parse_scan_csv("r,ell,endpoints,densities,error\n2,3,\"0;1\",\"1\",\"\"\n"),
      std::runtime_error);
}

TEST_CASE("render_pgm geometry and pixel values") {
  ScanRow bottom;  // rows[0] is drawn at the bottom of the image
  bottom.r_text = "2";
  bottom.ell = 1;
  bottom.endpoints = {0.0, 0.5};
  bottom.densities = {"1"};
  ScanRow top;
  top.r_text = "3";
  top.ell = 1;
  top.endpoints = {0.5, 1.0};
  top.densities = {"1"};

  const unsigned width = 10, height = 2;
  const std::string pgm = sigclo::render_pgm({bottom, top}, width, height);
  const std::string header = "P5\n10 2\n255\n";
  REQUIRE(pgm.rfind(header, 0) == 0);
  REQUIRE(pgm.size() == header.size() + width * height);
  const auto pixel = [&](unsigned x, unsigned y) {
    return static_cast<unsigned char>(pgm[header.size() + y * width + x]);
  };
  // y = 0 is the top scan row: right half black.
  CHECK(pixel(0, 0) == 255);
  CHECK(pixel(9, 0) == 0);
  // y = 1 is the bottom scan row: left half black.
  CHECK(pixel(0, 1) == 0);
  CHECK(pixel(9, 1) == 255);
  // The boundary pixel centers: (4+0.5)/10 = 0.45 <= 0.5 black on bottom row,
  // (5+0.5)/10 = 0.55 > 0.5 white.
  CHECK(pixel(4, 1) == 0);
  CHECK(pixel(5, 1) == 255);
}

TEST_CASE("render_pgm default height is one row per scan line") {
  const ScanRow row = sigclo::scan_row(closure2(), "2", PrecisionPolicy{});
  const std::string pgm = sigclo::render_pgm({row, row, row}, 64, 0);
  CHECK(pgm.rfind("P5\n64 3\n255\n", 0) == 0);
}

TEST_CASE("render_svg draws one rectangle per interval plus background") {
  const ScanRow row = sigclo::scan_row(closure2(), "2", PrecisionPolicy{});
  const std::string svg = sigclo::render_svg({row, row}, 400, 100);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(count_occurrences(svg, "<rect") == 1 + 2 * 3);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("plots reject empty or degenerate input") {
  CHECK_THROWS_AS(sigclo::render_pgm({}, 10, 10), std::runtime_error);
  ScanRow row;
  row.endpoints = {0.0, 1.0};
  row.ell = 1;
  CHECK_THROWS_AS(sigclo::render_pgm({row}, 0, 10), std::runtime_error);
  CHECK_THROWS_AS(sigclo::render_svg({}, 10, 10), std::runtime_error);
}

TEST_CASE("parse_intervals_override accepts expressions and rationals") {
  const std::string text = R"json([
    {"lo": "1", "hi": "T_2"},
    {"lo": "sigma(3^1)", "hi": "13/10"}
  ])json";
  const auto intervals = sigclo::parse_intervals_override(text, Rational(2));
  REQUIRE(intervals.size() == 2);
  REQUIRE(intervals[0].lo.exact);
  CHECK(*intervals[0].lo.exact == Rational(1));
  CHECK(!intervals[0].hi.exact);  // T_2 carries zeta
  CHECK(intervals[0].hi_expr.has_value());
  REQUIRE(intervals[1].lo.exact);
  CHECK(*intervals[1].lo.exact == Rational(10, 9));
  CHECK(intervals[1].lo_expr.has_value());
  REQUIRE(intervals[1].hi.exact);
  CHECK(*intervals[1].hi.exact == Rational(13, 10));
  CHECK(!intervals[1].hi_expr.has_value());  // plain rationals stay numeric
}

TEST_CASE("parse_intervals_override rejects malformed input") {
  CHECK_THROWS_AS(sigclo::parse_intervals_override("not json", Rational(2)),
                  std::runtime_error);
  CHECK_THROWS_AS(sigclo::parse_intervals_override("[]", Rational(2)), std::runtime_error);
  CHECK_THROWS_AS(sigclo::parse_intervals_override(R"([{"lo": "1"}])", Rational(2)),
                  std::runtime_error);
  CHECK_THROWS_AS(
      sigclo::parse_intervals_override(R"json([{"lo": "1", "hi": "sigma(4^2)"}])json",
                                       Rational(2)),
      std::runtime_error);
}

TEST_CASE("run_scan covers the range inclusively and isolates failures") {
  sigclo::ScanConfig config;
  config.r_min = Rational(1);
  config.r_max = Rational(3, 2);
  config.step = Rational(1, 4);
  const auto rows = sigclo::run_scan(config);
  REQUIRE(rows.size() == 3);  // r = 1, 5/4, 3/2
  CHECK(rows[0].r_text == "1");
  CHECK(!rows[0].error.empty());  // closure rejects r = 1, scan keeps going
  CHECK(rows[1].r_text == "1.25");
  CHECK(rows[1].error.empty());
  CHECK(rows[1].ell == 1);
  CHECK(rows[2].r_text == "1.5");
  CHECK(rows[2].error.empty());
  CHECK(rows[2].ell == 1);
}

TEST_CASE("run_scan agrees with a direct closure call") {
  sigclo::ScanConfig config;
  config.r_min = Rational(2);
  config.r_max = Rational(2);
  config.step = Rational(1, 100);
  const auto rows = sigclo::run_scan(config);
  REQUIRE(rows.size() == 1);
  const ScanRow direct = sigclo::scan_row(closure2(), "2", PrecisionPolicy{});
  CHECK(rows[0].ell == direct.ell);
  CHECK(rows[0].densities == direct.densities);
  REQUIRE(rows[0].endpoints.size() == direct.endpoints.size());
  for (std::size_t i = 0; i < direct.endpoints.size(); ++i)
    CHECK(rows[0].endpoints[i] == doctest::Approx(direct.endpoints[i]).epsilon(1e-12));
}
