#include "sigclo/report.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

#include "json.hpp"

#include "sigclo/errors.hpp"

namespace sigclo {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kValueDigits = 40;

std::string closed_form_string(const ClosedForm& form, const Rational& r) {
  const std::string coeff = fraction_string(form.coeff);
  if (!form.has_zeta) return coeff;
  const std::string zeta = "zeta(" + fraction_string(r) + ")";
  if (form.coeff == 1) return zeta;
  return "(" + coeff + ")*" + zeta;
}

ordered_json endpoint_json(const EndpointExpr& e, const Rational& r,
                           const PrecisionPolicy& policy) {
  ordered_json out;
  out["expr"] = render_expr(e);
  if (const auto form = closed_form(e, r)) out["closed_form"] = closed_form_string(*form, r);
  const Enclosure value = expr_value(e, r, policy.base);
  out["value_lo"] = value.lo_string(kValueDigits);
  out["value_hi"] = value.hi_string(kValueDigits);
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> items;
  std::string cur;
  for (char c : s) {
    if (c == ';') {
      items.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) items.push_back(std::move(cur));
  return items;
}

}  // namespace

std::string report_json(const ClosureResult& result, const std::string& r_text,
                        const PrecisionPolicy& policy) {
  ordered_json out;
  out["r"] = r_text;
  out["precision_bits"] = static_cast<long>(result.precision_used);
  out["j_prime"] = result.j_prime;
  out["j0"] = result.j0;
  out["ell"] = result.final.intervals.size();
  const Enclosure zeta = zeta_enclosure(result.r, policy.base);
  out["zeta"] = {{"value_lo", zeta.lo_string(kValueDigits)},
                 {"value_hi", zeta.hi_string(kValueDigits)}};
  out["intervals"] = ordered_json::array();
  for (std::size_t k = 0; k < result.final.intervals.size(); ++k) {
    const ClosedInterval& iv = result.final.intervals[k];
    ordered_json item;
    item["lo"] = endpoint_json(iv.lo, result.r, policy);
    item["hi"] = endpoint_json(iv.hi, result.r, policy);
    item["density"] = {{"num", result.final.densities[k].get_num().get_str()},
                       {"den", result.final.densities[k].get_den().get_str()}};
    out["intervals"].push_back(std::move(item));
  }
  return out.dump(2) + "\n";
}

ParsedReport report_from_json(const std::string& json_text) {
  ordered_json in;
  try {
    in = ordered_json::parse(json_text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("report is not valid JSON: ") + e.what());
  }
  ParsedReport report;
  try {
    report.r_text = in.at("r").get<std::string>();
    const auto r = parse_rational(report.r_text);
    if (!r) throw std::runtime_error("unparseable r: " + report.r_text);
    report.r = *r;
    report.precision_bits = in.at("precision_bits").get<long>();
    report.j_prime = in.at("j_prime").get<std::uint32_t>();
    report.j0 = in.at("j0").get<std::uint32_t>();
    const std::size_t ell = in.at("ell").get<std::size_t>();
    for (const auto& item : in.at("intervals")) {
      ClosedInterval iv;
      const auto lo = parse_expr(item.at("lo").at("expr").get<std::string>());
      const auto hi = parse_expr(item.at("hi").at("expr").get<std::string>());
      if (!lo || !hi) throw std::runtime_error("unparseable endpoint expression");
      iv.lo = *lo;
      iv.hi = *hi;
      report.intervals.push_back(std::move(iv));
      Rational d(mpz_class(item.at("density").at("num").get<std::string>()),
                 mpz_class(item.at("density").at("den").get<std::string>()));
      d.canonicalize();
      if (sgn(d) <= 0) throw std::runtime_error("density must be positive");
      report.densities.push_back(std::move(d));
    }
    if (report.intervals.size() != ell)
      throw std::runtime_error("ell does not match the interval list");
  } catch (const ordered_json::exception& e) {
    throw std::runtime_error(std::string("report schema violation: ") + e.what());
  }
  return report;
}

std::string report_text(const ClosureResult& result, const std::string& r_text,
                        const PrecisionPolicy& policy) {
  std::string out;
  out += "closure of the sigma_{-r} image for r = " + r_text + "\n";
  out += "precision: " + std::to_string(result.precision_used) + " bits (escalating to " +
         std::to_string(policy.max) + ")\n";
  out += "j_prime = " + std::to_string(result.j_prime) +
         ", j0 = " + std::to_string(result.j0) +
         ", ell = " + std::to_string(result.final.intervals.size()) + "\n";
  const Enclosure zeta = zeta_enclosure(result.r, policy.base);
  out += "zeta(r) in " + zeta.str(20) + "\n";
  for (std::size_t k = 0; k < result.final.intervals.size(); ++k) {
    const ClosedInterval& iv = result.final.intervals[k];
    out += "interval " + std::to_string(k + 1) + ":\n";
    for (const bool is_hi : {false, true}) {
      const EndpointExpr& e = is_hi ? iv.hi : iv.lo;
      out += is_hi ? "  hi: " : "  lo: ";
      out += render_expr(e);
      if (const auto form = closed_form(e, result.r))
        out += " = " + closed_form_string(*form, result.r);
      out += " in " + expr_value(e, result.r, policy.base).str(20) + "\n";
    }
    const Rational& d = result.final.densities[k];
    out += "  density: " + fraction_string(d) + " ~ " +
           format_double(mpq_get_d(d.get_mpq_t())) + "\n";
  }
  return out;
}

std::string symbolic_text(const ClosureResult& result) {
  std::string out;
  out += "r=" + fraction_string(result.r) + "\n";
  out += "j_prime=" + std::to_string(result.j_prime) + "\n";
  out += "j0=" + std::to_string(result.j0) + "\n";
  out += "ell=" + std::to_string(result.final.intervals.size()) + "\n";
  for (std::size_t k = 0; k < result.final.intervals.size(); ++k) {
    out += "interval " + std::to_string(k + 1) + ": lo=" +
           render_expr(result.final.intervals[k].lo) + " hi=" +
           render_expr(result.final.intervals[k].hi) + " density=" +
           fraction_string(result.final.densities[k]) + "\n";
  }
  return out;
}

ScanRow scan_row(const ClosureResult& result, const std::string& r_text,
                 const PrecisionPolicy& policy) {
  ScanRow row;
  row.r_text = r_text;
  row.ell = static_cast<std::uint32_t>(result.final.intervals.size());
  const double zeta_mid = zeta_enclosure(result.r, policy.base).midpoint_double();
  for (std::size_t k = 0; k < result.final.intervals.size(); ++k) {
    for (const bool is_hi : {false, true}) {
      const EndpointExpr& e = is_hi ? result.final.intervals[k].hi
                                    : result.final.intervals[k].lo;
      const double v = expr_value(e, result.r, policy.base).midpoint_double();
      const double x = (v - 1.0) / (zeta_mid - 1.0);
      row.endpoints.push_back(std::min(1.0, std::max(0.0, x)));
    }
    row.densities.push_back(fraction_string(result.final.densities[k]));
  }
  return row;
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::string out = "r,ell,endpoints,densities,error\n";
  for (const ScanRow& row : rows) {
    out += row.r_text + "," + std::to_string(row.ell) + ",";
    std::string endpoints;
    for (std::size_t i = 0; i < row.endpoints.size(); ++i) {
      if (i) endpoints += ';';
      endpoints += format_double(row.endpoints[i]);
    }
    std::string densities;
    for (std::size_t i = 0; i < row.densities.size(); ++i) {
      if (i) densities += ';';
      densities += row.densities[i];
    }
    out += csv_quote(endpoints) + "," + csv_quote(densities) + "," + csv_quote(row.error);
    out += '\n';
  }
  return out;
}

std::vector<ScanRow> parse_scan_csv(const std::string& text) {
  std::vector<ScanRow> rows;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    const std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("r,ell,", 0) != 0)
        throw std::runtime_error("scan CSV header missing or unrecognized");
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != 5)
      throw std::runtime_error("scan CSV row has " + std::to_string(fields.size()) +
                               " fields, expected 5");
    ScanRow row;
    row.r_text = fields[0];
    row.ell = static_cast<std::uint32_t>(std::strtoul(fields[1].c_str(), nullptr, 10));
    for (const std::string& item : split_list(fields[2]))
      row.endpoints.push_back(std::strtod(item.c_str(), nullptr));
    row.densities = split_list(fields[3]);
    row.error = fields[4];
    if (row.endpoints.size() != 2 * static_cast<std::size_t>(row.ell) && row.error.empty())
      throw std::runtime_error("scan CSV row for r=" + row.r_text +
                               " has a malformed endpoint list");
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

// Map output row y (0 = top) to a scan row index; r increases upward.
std::size_t scan_index_for_row(unsigned y, unsigned height, std::size_t nrows) {
  const double t = (y + 0.5) / height;                      // fraction from the top
  const auto from_top = static_cast<std::size_t>(t * static_cast<double>(nrows));
  const std::size_t clamped = std::min(from_top, nrows - 1);
  return nrows - 1 - clamped;
}

}  // namespace

std::string render_pgm(const std::vector<ScanRow>& rows, unsigned width, unsigned height) {
  if (rows.empty()) throw std::runtime_error("cannot plot an empty scan");
  if (width == 0) throw std::runtime_error("plot width must be positive");
  if (height == 0) height = static_cast<unsigned>(rows.size());
  std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out.reserve(out.size() + static_cast<std::size_t>(width) * height);
  for (unsigned y = 0; y < height; ++y) {
    const ScanRow& row = rows[scan_index_for_row(y, height, rows.size())];
    for (unsigned c = 0; c < width; ++c) {
      const double x = (c + 0.5) / width;
      bool black = false;
      for (std::size_t k = 0; k + 1 < row.endpoints.size() && !black; k += 2)
        black = row.endpoints[k] <= x && x <= row.endpoints[k + 1];
      out += static_cast<char>(black ? 0 : 255);
    }
  }
  return out;
}

std::string render_svg(const std::vector<ScanRow>& rows, unsigned width, unsigned height) {
  if (rows.empty()) throw std::runtime_error("cannot plot an empty scan");
  if (width == 0) throw std::runtime_error("plot width must be positive");
  if (height == 0) height = static_cast<unsigned>(rows.size());
  const double band = static_cast<double>(height) / static_cast<double>(rows.size());
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    std::to_string(width) + "\" height=\"" + std::to_string(height) +
                    "\" viewBox=\"0 0 " + std::to_string(width) + " " +
                    std::to_string(height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  char buf[160];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double y = static_cast<double>(height) - static_cast<double>(i + 1) * band;
    for (std::size_t k = 0; k + 1 < rows[i].endpoints.size(); k += 2) {
      const double x0 = rows[i].endpoints[k] * width;
      const double x1 = rows[i].endpoints[k + 1] * width;
      std::snprintf(buf, sizeof buf,
                    "<rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\"/>\n", x0, y,
                    std::max(x1 - x0, 0.05), band);
      out += buf;
    }
  }
  out += "</svg>\n";
  return out;
}

std::vector<OracleInterval> parse_intervals_override(const std::string& json_text,
                                                     const Rational& r) {
  ordered_json in;
  try {
    in = ordered_json::parse(json_text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("override file is not valid JSON: ") + e.what());
  }
  if (!in.is_array() || in.empty())
    throw std::runtime_error("override file must be a non-empty JSON array");
  std::vector<OracleInterval> out;
  for (const auto& item : in) {
    OracleInterval iv;
    for (const bool is_hi : {false, true}) {
      std::string text;
      try {
        text = item.at(is_hi ? "hi" : "lo").get<std::string>();
      } catch (const ordered_json::exception& e) {
        throw std::runtime_error(std::string("override entry schema violation: ") + e.what());
      }
      RealSource source;
      if (const auto q = parse_rational(text)) {
        source = RealSource::from_rational(*q, text);
      } else if (const auto e = parse_expr(text)) {
        source = endpoint_source(*e, r);
        (is_hi ? iv.hi_expr : iv.lo_expr) = *e;
      } else {
        throw std::runtime_error("override endpoint is neither rational nor expression: " +
                                 text);
      }
      (is_hi ? iv.hi : iv.lo) = std::move(source);
    }
    out.push_back(std::move(iv));
  }
  return out;
}

}  // namespace sigclo
