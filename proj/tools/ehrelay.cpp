#include <chrono>
#include <cstdio>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "ehrelay/errors.hpp"
#include "ehrelay/experiment.hpp"

namespace ex = ehrelay::experiment;

namespace {

enum ExitCode { kOk = 0, kValidationFailed = 1, kConfigError = 2, kNumericalError = 3 };

// Wall time goes to stderr so the CSV stays byte-identical across runs.
class Stopwatch {
 public:
  explicit Stopwatch(std::string label) : label_(std::move(label)) {}
  ~Stopwatch() {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
    spdlog::info("{}: {:.2f} s wall time", label_, dt.count());
  }

 private:
  std::string label_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int run(const std::string& config_path) {
  const auto config = ex::load_config(config_path);
  Stopwatch timer("run");
  const auto result = ex::run_sweep(config);
  ex::write_outputs(result, config.output_path);
  fmt::print("wrote {} ({} rows)\n", config.output_path, result.rows.size());
  return kOk;
}

int validate(const std::string& config_path) {
  const auto config = ex::load_config(config_path);
  Stopwatch timer("validate");
  const auto report = ex::validate(config);
  fmt::print("{}", report.text());
  return report.passed ? kOk : kValidationFailed;
}

int lambda_star(const std::string& config_path) {
  const auto config = ex::load_config(config_path);
  const auto star = ex::find_lambda_star(config);
  fmt::print("method = {}\nlambda* = {:.6g}\nvalue = {:.12g}\nbracket = [{:.6g}, {:.6g}]\n",
             star.method, star.lambda, star.value, star.bracket_lo, star.bracket_hi);
  if (star.flat) fmt::print("warning: metric is flat over the grid\n");
  return kOk;
}

int reproduce(int figure, const ex::PresetOptions& options) {
  Stopwatch timer(fmt::format("reproduce figure {}", figure));
  for (const auto& config : ex::preset(figure, options)) {
    const auto result = ex::run_sweep(config);
    ex::write_outputs(result, config.output_path);
    fmt::print("wrote {}\n", config.output_path);
    if (config.sweep.axis == ex::Axis::lambda) {
      const std::string method = figure == 2 ? "capacity_quadrature" : "dmt";
      const auto star = ex::lambda_star_from(result, method, config.resolved_metric());
      fmt::print("  {} lambda* = {:.6g} (value {:.6g})\n", method, star.lambda, star.value);
    }
    bool has_mc = false;
    for (const auto& m : config.methods) has_mc = has_mc || m == "mc";
    if (has_mc) {
      const auto report = ex::validate_result(result);
      fmt::print("  analytic vs mc: {}\n", report.passed ? "pass" : "FAIL");
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-way AF relaying with energy harvesting: sweeps, validation, figures"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Evaluate a sweep and write CSV + gnuplot script");
  run_cmd->add_option("--config", config_path, "Config file (key = value)")->required();
  auto* validate_cmd = app.add_subcommand("validate", "Check closed forms against Monte Carlo");
  validate_cmd->add_option("--config", config_path, "Config file (key = value)")->required();
  auto* star_cmd = app.add_subcommand("lambda-star", "Grid search for the best power split");
  star_cmd->add_option("--config", config_path, "Config file (key = value)")->required();

  int figure = 0;
  ex::PresetOptions preset;
  std::string out_dir = ".";
  auto* repro = app.add_subcommand("reproduce", "Regenerate a figure preset");
  repro->add_option("--figure", figure, "Figure number")->required()->check(CLI::Range(1, 4));
  repro->add_option("--n", preset.mc_n, "Monte Carlo samples per point")
      ->check(CLI::PositiveNumber);
  repro->add_option("--seed", preset.seed, "Random seed");
  repro->add_option("--workers", preset.workers, "Worker threads (0 = all cores)");
  repro->add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);
  spdlog::set_pattern("[%l] %v");

  try {
    if (*run_cmd) return run(config_path);
    if (*validate_cmd) return validate(config_path);
    if (*star_cmd) return lambda_star(config_path);
    preset.out_dir = out_dir;
    return reproduce(figure, preset);
  } catch (const ehrelay::ValidationError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfigError;
  } catch (const ehrelay::NumericalError& e) {
    fmt::print(stderr, "numerical failure: {}\n", e.what());
    return kNumericalError;
  } catch (const ehrelay::DomainError& e) {
    fmt::print(stderr, "numerical failure: {}\n", e.what());
    return kNumericalError;
  } catch (const std::filesystem::filesystem_error& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfigError;
  }
}
