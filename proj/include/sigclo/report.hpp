#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sigclo/closure.hpp"
#include "sigclo/oracle.hpp"

namespace sigclo {

// JSON report of a ClosureResult.  r_text preserves the exact input spelling
// of r; numeric values are 40-digit outward-rounded decimal strings; closed
// forms appear only when r is a positive integer.
std::string report_json(const ClosureResult& result, const std::string& r_text,
                        const PrecisionPolicy& policy);

// Round-trip: parse a report produced by report_json.  Throws
// std::runtime_error on malformed input.
struct ParsedReport {
  std::string r_text;
  Rational r;
  long precision_bits = 0;
  std::uint32_t j_prime = 0;
  std::uint32_t j0 = 0;
  std::vector<ClosedInterval> intervals;
  std::vector<Rational> densities;
};
ParsedReport report_from_json(const std::string& json_text);

// Human-readable listing for --format text.
std::string report_text(const ClosureResult& result, const std::string& r_text,
                        const PrecisionPolicy& policy);

// Purely symbolic projection (no numeric enclosures): the structure that must
// be byte-identical when the base precision is doubled.
std::string symbolic_text(const ClosureResult& result);

// One scan line: ell, normalized endpoints x = (v-1)/(zeta(r)-1) alternating
// lo/hi, densities as fractions.  error is empty on success; failed rows keep
// their r and the message so a sweep never dies half way.
struct ScanRow {
  std::string r_text;
  std::uint32_t ell = 0;
  std::vector<double> endpoints;      // x_lo1, x_hi1, x_lo2, ...
  std::vector<std::string> densities; // "num/den"
  std::string error;
};

ScanRow scan_row(const ClosureResult& result, const std::string& r_text,
                 const PrecisionPolicy& policy);

// CSV with header "r,ell,endpoints,densities,error"; list fields are quoted,
// semicolon-separated.  parse_scan_csv accepts exactly this dialect.
std::string scan_csv(const std::vector<ScanRow>& rows);
std::vector<ScanRow> parse_scan_csv(const std::string& text);

// Raster (binary PGM, P5): one band per scan row, r increasing upward, pixel
// center (c + 0.5)/width black iff it lies in a normalized interval.
std::string render_pgm(const std::vector<ScanRow>& rows, unsigned width, unsigned height);

// Vector variant: one rectangle per interval per row.
std::string render_svg(const std::vector<ScanRow>& rows, unsigned width, unsigned height);

// Override file for verification runs: JSON array of {"lo": s, "hi": s} with
// each endpoint either an expression in the endpoint grammar or a rational
// like "13/10" / "1.3".  Throws std::runtime_error on malformed input.
std::vector<OracleInterval> parse_intervals_override(const std::string& json_text,
                                                     const Rational& r);

}  // namespace sigclo
