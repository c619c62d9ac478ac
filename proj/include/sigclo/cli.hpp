#pragma once

#include <string>
#include <vector>

#include "sigclo/rational.hpp"
#include "sigclo/realnum.hpp"
#include "sigclo/report.hpp"

namespace sigclo {

// Sweep [r_min, r_max] in exact rational steps (r_i = r_min + i*step), one
// ScanRow per value; a failing r is recorded in its row's error field and the
// sweep continues.  Rows come back in r order regardless of thread schedule.
struct ScanConfig {
  Rational r_min;
  Rational r_max;
  Rational step;
  PrecisionPolicy policy;
  unsigned threads = 0;  // 0 = hardware default
};
std::vector<ScanRow> run_scan(const ScanConfig& config);

// Entry point behind main(); returns the process exit code:
// 0 ok, 2 domain error, 3 undecided comparison, 4 verification failure,
// 5 I/O or parse error.
int run_cli(int argc, char** argv);

}  // namespace sigclo
