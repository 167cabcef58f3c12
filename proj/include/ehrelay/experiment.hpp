#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ehrelay/model.hpp"

namespace ehrelay::experiment {

inline constexpr const char* kVersion = "1.0.0";

enum class Metric { outage, capacity, diversity };
enum class Axis { snr_db, lambda, r, d1 };

const char* to_string(Metric metric);
const char* to_string(Axis axis);

struct SweepSpec {
  Axis axis = Axis::snr_db;
  double start = 0.0;
  double stop = 30.0;
  int steps = 7;

  // Evenly spaced, endpoints included.
  std::vector<double> points() const;
};

// Flat experiment description. Powers are linear; when snr_db is set it
// fixes p1 = sigma2 * 10^(snr_db/10) and rescales p2 to keep p2/p1.
struct ExperimentConfig {
  double p1 = 100.0;
  double p2 = 100.0;
  double sigma2 = 1.0;
  std::optional<double> snr_db;
  double eta = 1.0;
  double lambda = 0.75;
  double epsilon = 0.5;
  double d1 = 0.5;
  double path_loss_exp = 3.0;
  double t1 = 1.0;  // target rates, bits/s/Hz (outage)
  double t2 = 1.0;
  double r = 0.5;   // multiplexing gain (diversity)

  // Inferred from the methods when not given explicitly.
  std::optional<Metric> metric;
  SweepSpec sweep;
  std::vector<std::string> methods;

  std::int64_t mc_n = 1'000'000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  double fd_delta_db = 0.25;
  std::string output_path = "ehrelay_sweep.csv";

  // Added to b in every closed-form evaluation (never in the simulator).
  // Test hook for sensitivity checks; not settable from a config file.
  double corrupt_b_offset = 0.0;

  // Throws ConfigError on the first violated constraint.
  void validate() const;
  Metric resolved_metric() const;
  // System parameters at one sweep point.
  model::SystemParams params_at(double axis_value) const;
};

/// Parses `key = value` lines. Blank lines and lines starting with '#' are
/// skipped; unknown or repeated keys are errors. The result is validated.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical key = value rendering; parse_config(to_config_text(c)) == c
/// up to the test hook.
std::string to_config_text(const ExperimentConfig& config);

struct SweepRow {
  double axis = 0.0;
  std::string method;
  double value = 0.0;
  std::optional<double> std_err;  // Monte Carlo rows only
};

struct SweepResult {
  std::string axis_name;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<SweepRow> rows;

  // Values of `method` in axis order.
  std::vector<std::pair<double, double>> series(const std::string& method) const;
};

/// Evaluates every method at every axis point. Deterministic given the
/// seed and independent of the worker count. Numerical failures are
/// re-thrown with the axis point and method prepended.
SweepResult run_sweep(const ExperimentConfig& config);

// CSV: '#'-prefixed metadata, header `axis,method,value,std_err`, values
// with 12 significant digits, empty std_err for analytic rows.
std::string to_csv(const SweepResult& result);
SweepResult parse_csv(const std::string& text);

/// Gnuplot script plotting every method of `result` from `csv_name`,
/// a path relative to the script's directory.
std::string plot_script(const SweepResult& result, const std::string& csv_name);

/// Writes the CSV at `csv_path` and the plot script next to it (.gp).
void write_outputs(const SweepResult& result, const std::filesystem::path& csv_path);

struct ValidationEntry {
  double axis = 0.0;
  std::string method;
  double analytic = 0.0;
  double mc = 0.0;
  double std_err = 0.0;
  bool pass = false;
};

struct ValidationReport {
  std::vector<ValidationEntry> entries;
  bool passed = false;

  std::string text() const;
};

/// Methods whose values are compared against mc by validate().
bool is_validated_method(const std::string& method);

/// |analytic - mc| <= 3 std_err for every validated method at every point
/// (exact equality when std_err is zero).
ValidationReport validate_result(const SweepResult& result);

/// Runs the sweep, writes outputs and the report (<stem>.validation.txt)
/// beside the CSV. Requires mc and at least one validated method.
ValidationReport validate(const ExperimentConfig& config);

struct LambdaStar {
  std::string method;
  double lambda = 0.0;
  double value = 0.0;
  // Neighbouring grid points (the optimum lies between them).
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  bool flat = false;
};

/// Grid search over a lambda sweep for the single analytic method in the
/// config: maximum for capacity and diversity, minimum for outage. A
/// constant grid returns the first point and logs a warning.
LambdaStar find_lambda_star(const ExperimentConfig& config);
LambdaStar lambda_star_from(const SweepResult& result, const std::string& method,
                            Metric metric);

struct PresetOptions {
  std::int64_t mc_n = 1'000'000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  std::filesystem::path out_dir = ".";
};

/// Configurations reproducing figure 1..4. Figures 3 and 4 expand into one
/// configuration per curve (SNR and d1 respectively).
std::vector<ExperimentConfig> preset(int figure, const PresetOptions& options);

}  // namespace ehrelay::experiment
