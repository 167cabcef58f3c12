#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "ehrelay/errors.hpp"
#include "ehrelay/experiment.hpp"

namespace ehrelay::experiment {

namespace {

std::string num(double v) { return fmt::format("{:.12g}", v); }

double parse_field(const std::string& text, int line_no) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError(fmt::format("csv line {}: '{}' is not a number", line_no, text));
  }
  return value;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
  out << content;
  if (!out) throw ConfigError(fmt::format("write to '{}' failed", path.string()));
}

}  // namespace

std::string to_csv(const SweepResult& result) {
  std::string out;
  for (const auto& [key, value] : result.metadata) out += fmt::format("# {} = {}\n", key, value);
  out += "axis,method,value,std_err\n";
  for (const auto& row : result.rows) {
    out += fmt::format("{},{},{},{}\n", num(row.axis), row.method, num(row.value),
                       row.std_err ? num(*row.std_err) : std::string());
  }
  return out;
}

SweepResult parse_csv(const std::string& text) {
  SweepResult result;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (header_seen) throw ValidationError(fmt::format("csv line {}: metadata after header", line_no));
      const auto eq = line.find(" = ");
      if (line.size() < 2 || eq == std::string::npos) continue;
      result.metadata.emplace_back(line.substr(2, eq - 2), line.substr(eq + 3));
      continue;
    }
    if (!header_seen) {
      if (line != "axis,method,value,std_err") {
        throw ValidationError(fmt::format("csv line {}: unexpected header '{}'", line_no, line));
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ls(line);
    for (std::string f; std::getline(ls, f, ',');) fields.push_back(f);
    if (line.back() == ',') fields.emplace_back();
    if (fields.size() != 4) {
      throw ValidationError(fmt::format("csv line {}: expected 4 fields", line_no));
    }
    SweepRow row;
    row.axis = parse_field(fields[0], line_no);
    row.method = fields[1];
    row.value = parse_field(fields[2], line_no);
    if (!fields[3].empty()) row.std_err = parse_field(fields[3], line_no);
    result.rows.push_back(row);
  }
  if (!header_seen) throw ValidationError("csv: missing header");
  for (const auto& [key, value] : result.metadata) {
    if (key == "axis") result.axis_name = value;
  }
  return result;
}

std::string plot_script(const SweepResult& result, const std::string& csv_name) {
  std::vector<std::string> methods;
  std::set<std::string> seen;
  for (const auto& row : result.rows) {
    if (seen.insert(row.method).second) methods.push_back(row.method);
  }
  std::string metric;
  for (const auto& [key, value] : result.metadata) {
    if (key == "metric") metric = value;
  }
  std::string out;
  out += "# Run from the directory containing this script.\n";
  out += "set datafile separator ','\n";
  out += fmt::format("set xlabel '{}'\n", result.axis_name);
  out += fmt::format("set ylabel '{}'\n", metric);
  if (metric == "outage") out += "set logscale y\n";
  out += "set key outside right\n";
  out += "set grid\n";
  out += "plot \\\n";
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const auto& m = methods[i];
    const char* style = m == "mc" ? "points pt 6" : "linespoints";
    out += fmt::format("  '{}' using 1:(strcol(2) eq '{}' ? $3 : NaN) with {} title '{}'{}\n",
                       csv_name, m, style, m, i + 1 < methods.size() ? ", \\" : "");
  }
  return out;
}

void write_outputs(const SweepResult& result, const std::filesystem::path& csv_path) {
  write_file(csv_path, to_csv(result));
  auto script = csv_path;
  script.replace_extension(".gp");
  write_file(script, plot_script(result, csv_path.filename().string()));
}

bool is_validated_method(const std::string& method) {
  return method == "exact_quadrature" || method == "exact_taylor" ||
         method == "capacity_quadrature" || method == "capacity_series";
}

ValidationReport validate_result(const SweepResult& result) {
  ValidationReport report;
  report.passed = true;
  for (const auto& row : result.rows) {
    if (!is_validated_method(row.method)) continue;
    const SweepRow* reference = nullptr;
    for (const auto& candidate : result.rows) {
      if (candidate.method == "mc" && candidate.axis == row.axis) reference = &candidate;
    }
    if (!reference) continue;
    ValidationEntry e;
    e.axis = row.axis;
    e.method = row.method;
    e.analytic = row.value;
    e.mc = reference->value;
    e.std_err = reference->std_err.value_or(0.0);
    e.pass = std::abs(e.analytic - e.mc) <= 3.0 * e.std_err;
    report.passed = report.passed && e.pass;
    report.entries.push_back(e);
  }
  if (report.entries.empty()) report.passed = false;
  return report;
}

std::string ValidationReport::text() const {
  std::string out = fmt::format("{:>14} {:>20} {:>16} {:>16} {:>12} {:>8}  verdict\n", "axis",
                                "method", "analytic", "mc", "std_err", "z");
  for (const auto& e : entries) {
    const double dev = std::abs(e.analytic - e.mc);
    const std::string z = e.std_err > 0.0 ? fmt::format("{:.2f}", dev / e.std_err) : "-";
    out += fmt::format("{:>14.8g} {:>20} {:>16.10g} {:>16.10g} {:>12.4g} {:>8}  {}\n", e.axis,
                       e.method, e.analytic, e.mc, e.std_err, z, e.pass ? "pass" : "FAIL");
  }
  out += fmt::format("overall: {} ({} comparisons)\n", passed ? "pass" : "FAIL", entries.size());
  return out;
}

ValidationReport validate(const ExperimentConfig& config) {
  bool has_mc = false;
  bool has_analytic = false;
  for (const auto& m : config.methods) {
    has_mc = has_mc || m == "mc";
    has_analytic = has_analytic || is_validated_method(m);
  }
  if (!has_mc || !has_analytic) {
    throw ConfigError(
        "validate needs mc and at least one of exact_quadrature, exact_taylor, "
        "capacity_quadrature, capacity_series");
  }
  const SweepResult result = run_sweep(config);
  const std::filesystem::path csv(config.output_path);
  write_outputs(result, csv);
  ValidationReport report = validate_result(result);
  auto report_path = csv;
  report_path.replace_extension(".validation.txt");
  write_file(report_path, report.text());
  return report;
}

}  // namespace ehrelay::experiment
