#include "sigclo/cli.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "sigclo/closure.hpp"
#include "sigclo/errors.hpp"
#include "sigclo/oracle.hpp"

namespace sigclo {

namespace {

Rational parse_r_or_throw(const std::string& text) {
  const auto r = parse_rational(text);
  if (!r) throw DomainError("cannot parse r value: " + text);
  return *r;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw std::runtime_error("read failure: " + path);
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failure: " + path);
}

struct ClosureArgs {
  std::string r_text;
  PrecisionPolicy policy;
  std::string format = "json";
};

struct ScanArgs {
  std::string r_min, r_max, step = "1/100";
  PrecisionPolicy policy;
  unsigned threads = 0;
  std::string out;  // empty = stdout
};

struct PlotArgs {
  std::string scan_path;
  unsigned width = 800;
  unsigned height = 0;  // 0 = one pixel row per scan row
  std::string out;
  std::string format;  // pgm|svg, default from extension
};

struct VerifyArgs {
  std::string r_text;
  std::uint32_t limit = 1000000;
  PrecisionPolicy policy;
  unsigned threads = 0;
  std::string override_path;
};

struct EtaArgs {
  double tol = 1e-6;
  PrecisionPolicy policy;
};

void add_precision_flags(CLI::App* cmd, PrecisionPolicy& policy) {
  cmd->add_option("--prec", policy.base, "base working precision in bits")
      ->check(CLI::Range(static_cast<mpfr_prec_t>(16), static_cast<mpfr_prec_t>(1 << 20)))
      ->capture_default_str();
  cmd->add_option("--max-prec", policy.max, "precision escalation ceiling in bits")
      ->check(CLI::Range(static_cast<mpfr_prec_t>(16), static_cast<mpfr_prec_t>(1 << 24)))
      ->capture_default_str();
}

int cmd_closure(const ClosureArgs& args) {
  const Rational r = parse_r_or_throw(args.r_text);
  const ClosureResult result = closure(r, args.policy);
  if (args.format == "text")
    std::cout << report_text(result, args.r_text, args.policy);
  else
    std::cout << report_json(result, args.r_text, args.policy);
  return 0;
}

int cmd_scan(const ScanArgs& args) {
  ScanConfig config;
  config.r_min = parse_r_or_throw(args.r_min);
  config.r_max = parse_r_or_throw(args.r_max);
  config.step = parse_r_or_throw(args.step);
  if (cmp(config.r_min, Rational(1)) <= 0 || cmp(config.r_max, config.r_min) < 0)
    throw DomainError("scan range must satisfy 1 < r-min <= r-max");
  if (sgn(config.step) <= 0) throw DomainError("scan step must be positive");
  config.policy = args.policy;
  config.threads = args.threads;
  const std::string csv = scan_csv(run_scan(config));
  if (args.out.empty())
    std::cout << csv;
  else
    write_file(args.out, csv);
  return 0;
}

int cmd_plot(const PlotArgs& args) {
  const std::vector<ScanRow> rows = parse_scan_csv(read_file(args.scan_path));
  std::string format = args.format;
  if (format.empty()) {
    const auto dot = args.out.rfind('.');
    format = dot == std::string::npos ? "pgm" : args.out.substr(dot + 1);
  }
  std::string image;
  if (format == "pgm")
    image = render_pgm(rows, args.width, args.height);
  else if (format == "svg")
    image = render_svg(rows, args.width, args.height);
  else
    throw std::runtime_error("unsupported plot format: " + format);
  write_file(args.out, image);
  return 0;
}

int cmd_verify(const VerifyArgs& args) {
  const Rational r = parse_r_or_throw(args.r_text);

  std::vector<OracleInterval> intervals;
  std::vector<Rational> expected;  // densities when intervals come from closure()
  if (args.override_path.empty()) {
    const ClosureResult result = closure(r, args.policy);
    intervals = to_oracle_intervals(result.final.intervals, r);
    expected = result.final.densities;
    std::cout << "closure: ell = " << result.final.intervals.size() << "\n";
  } else {
    intervals = parse_intervals_override(read_file(args.override_path), r);
    std::cout << "override: " << intervals.size() << " interval(s) from "
              << args.override_path << "\n";
  }

  const OracleReport report = oracle_run(r, args.limit, intervals, args.policy, args.threads);
  for (std::size_t i = 0; i < report.density.counts.size(); ++i) {
    std::printf("interval %zu: count %llu, empirical %.6f", i + 1,
                static_cast<unsigned long long>(report.density.counts[i]),
                report.density.empirical[i]);
    if (i < expected.size())
      std::printf(", exact %s ~ %.6f", fraction_string(expected[i]).c_str(),
                  mpq_get_d(expected[i].get_mpq_t()));
    std::printf("\n");
  }
  std::cout << "unclassified: " << report.density.unclassified << "\n";
  if (!report.violations.empty()) {
    std::cout << "FAIL: " << report.violations.size()
              << " value(s) certifiably outside every interval; first offenders:";
    for (std::size_t i = 0; i < report.violations.size() && i < 10; ++i)
      std::cout << " " << report.violations[i];
    std::cout << "\n";
    return 4;
  }
  std::cout << "PASS: no gap violations up to " << args.limit << "\n";
  return 0;
}

int cmd_eta(const EtaArgs& args) {
  const Enclosure eta = eta_solve(args.tol, args.policy);
  std::cout << "eta in " << eta.str(12) << " (bracket width <= " << args.tol << ")\n";
  return 0;
}

}  // namespace

std::vector<ScanRow> run_scan(const ScanConfig& config) {
  // Exact rational stepping: count = floor((r_max - r_min)/step) + 1 values.
  mpz_class steps;
  {
    const Rational span = (config.r_max - config.r_min) / config.step;
    mpz_fdiv_q(steps.get_mpz_t(), span.get_num_mpz_t(), span.get_den_mpz_t());
  }
  if (steps < 0) return {};
  const std::size_t count = static_cast<std::size_t>(steps.get_ui()) + 1;

  std::vector<ScanRow> rows(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      const Rational r = config.r_min + Rational(static_cast<long>(i)) * config.step;
      ScanRow& row = rows[i];
      row.r_text = decimal_or_fraction_string(r);
      try {
        row = scan_row(closure(r, config.policy), row.r_text, config.policy);
      } catch (const std::exception& e) {
        row.ell = 0;
        row.endpoints.clear();
        row.densities.clear();
        row.error = e.what();
      }
    }
  };
  unsigned nthreads =
      config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  nthreads = std::min<unsigned>(nthreads, static_cast<unsigned>(count));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return rows;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"closure of the image of the generalized divisor function sigma_{-r}"};
  app.require_subcommand(1);

  ClosureArgs closure_args;
  CLI::App* closure_cmd =
      app.add_subcommand("closure", "compute Cl(sigma_{-r}(N+)) as disjoint intervals");
  closure_cmd->add_option("--r", closure_args.r_text, "exponent r (decimal or fraction), r > 1")
      ->required();
  add_precision_flags(closure_cmd, closure_args.policy);
  closure_cmd->add_option("--format", closure_args.format, "output format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();

  ScanArgs scan_args;
  CLI::App* scan_cmd = app.add_subcommand("scan", "sweep r and emit one CSV row per value");
  scan_cmd->add_option("--r-min", scan_args.r_min)->required();
  scan_cmd->add_option("--r-max", scan_args.r_max)->required();
  scan_cmd->add_option("--step", scan_args.step)->capture_default_str();
  add_precision_flags(scan_cmd, scan_args.policy);
  scan_cmd->add_option("--threads", scan_args.threads, "worker threads (0 = hardware)");
  scan_cmd->add_option("--out", scan_args.out, "CSV output path (default stdout)");

  PlotArgs plot_args;
  CLI::App* plot_cmd = app.add_subcommand("plot", "render a scan CSV as PGM or SVG");
  plot_cmd->add_option("--scan", plot_args.scan_path, "input CSV from the scan command")
      ->required();
  plot_cmd->add_option("--width", plot_args.width)->capture_default_str();
  plot_cmd->add_option("--height", plot_args.height, "0 = one pixel row per scan row");
  plot_cmd->add_option("--out", plot_args.out, "output image path")->required();
  plot_cmd->add_option("--format", plot_args.format, "pgm|svg (default from extension)")
      ->check(CLI::IsMember({"pgm", "svg"}));

  VerifyArgs verify_args;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "brute-force check of interval coverage and densities");
  verify_cmd->add_option("--r", verify_args.r_text)->required();
  verify_cmd->add_option("--limit", verify_args.limit, "enumerate n = 1..limit")
      ->check(CLI::Range(1u, 200000000u))
      ->capture_default_str();
  add_precision_flags(verify_cmd, verify_args.policy);
  verify_cmd->add_option("--threads", verify_args.threads);
  verify_cmd->add_option("--intervals-override", verify_args.override_path,
                         "JSON interval list replacing the computed closure");

  EtaArgs eta_args;
  CLI::App* eta_cmd = app.add_subcommand("eta", "bracket the single-interval threshold eta");
  eta_cmd->add_option("--tol", eta_args.tol, "bracket width target")->capture_default_str();
  add_precision_flags(eta_cmd, eta_args.policy);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (closure_cmd->parsed()) return cmd_closure(closure_args);
    if (scan_cmd->parsed()) return cmd_scan(scan_args);
    if (plot_cmd->parsed()) return cmd_plot(plot_args);
    if (verify_cmd->parsed()) return cmd_verify(verify_args);
    if (eta_cmd->parsed()) return cmd_eta(eta_args);
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const RangeError& e) {
    std::cerr << "range error: " << e.what() << "\n";
    return 2;
  } catch (const ComparisonError& e) {
    std::cerr << "comparison error: " << e.what() << "\n";
    return 3;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace sigclo
