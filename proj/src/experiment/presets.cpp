#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "ehrelay/errors.hpp"
#include "ehrelay/experiment.hpp"
#include "methods.hpp"

namespace ehrelay::experiment {

LambdaStar lambda_star_from(const SweepResult& result, const std::string& method,
                            Metric metric) {
  const auto grid = result.series(method);
  if (grid.empty()) throw ConfigError(fmt::format("no rows for method '{}'", method));
  const bool maximize = metric != Metric::outage;
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double v = grid[i].second;
    if (maximize ? v > grid[best].second : v < grid[best].second) best = i;
  }
  LambdaStar out;
  out.method = method;
  const auto [lo, hi] = std::minmax_element(
      grid.begin(), grid.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  out.flat = hi->second - lo->second <= 1e-12 * std::max(1.0, std::abs(hi->second));
  if (out.flat) {
    best = 0;
    spdlog::warn("{} is flat over the lambda grid; reporting the first point", method);
  }
  out.lambda = grid[best].first;
  out.value = grid[best].second;
  out.bracket_lo = grid[best == 0 ? 0 : best - 1].first;
  out.bracket_hi = grid[std::min(best + 1, grid.size() - 1)].first;
  return out;
}

LambdaStar find_lambda_star(const ExperimentConfig& config) {
  config.validate();
  if (config.sweep.axis != Axis::lambda) throw ConfigError("lambda-star needs sweep = lambda");
  std::vector<std::string> analytic;
  for (const auto& m : config.methods) {
    if (detail::method_metric(m)) analytic.push_back(m);
  }
  if (analytic.size() != 1 || analytic.front() == "capacity_bounds") {
    throw ConfigError("lambda-star needs exactly one analytic method (capacity_bounds excluded)");
  }
  ExperimentConfig single = config;
  single.methods = analytic;
  return lambda_star_from(run_sweep(single), analytic.front(), config.resolved_metric());
}

std::vector<ExperimentConfig> preset(int figure, const PresetOptions& options) {
  ExperimentConfig base;
  base.mc_n = options.mc_n;
  base.seed = options.seed;
  base.workers = options.workers;
  const auto out = [&](const std::string& name) { return (options.out_dir / name).string(); };

  std::vector<ExperimentConfig> configs;
  switch (figure) {
    case 1: {
      // Outage vs SNR at lambda = 3/4.
      ExperimentConfig c = base;
      c.lambda = 0.75;
      c.sweep = {Axis::snr_db, 0.0, 30.0, 7};
      c.methods = {"mc", "exact_quadrature", "lower_bound", "upper_bound", "non_coop"};
      c.output_path = out("fig1.csv");
      configs.push_back(c);
      break;
    }
    case 2: {
      // Ergodic capacity vs lambda at 20 dB.
      ExperimentConfig c = base;
      c.snr_db = 20.0;
      c.sweep = {Axis::lambda, 0.05, 0.95, 19};
      c.methods = {"mc", "capacity_quadrature", "capacity_series", "capacity_bounds",
                   "non_coop"};
      c.output_path = out("fig2.csv");
      configs.push_back(c);
      break;
    }
    case 3: {
      // Finite-SNR DMT, one curve per SNR.
      for (const int db : {5, 10, 15, 20}) {
        ExperimentConfig c = base;
        c.snr_db = db;
        c.lambda = 0.75;
        c.sweep = {Axis::r, 0.05, 1.0, 20};
        c.methods = {"dmt", "non_coop"};
        c.output_path = out(fmt::format("fig3_snr{:02d}.csv", db));
        configs.push_back(c);
      }
      break;
    }
    case 4: {
      // Diversity vs lambda at r = 0.5, 20 dB, one curve per relay position.
      for (const double d1 : {0.1, 0.25, 0.5}) {
        ExperimentConfig c = base;
        c.snr_db = 20.0;
        c.r = 0.5;
        c.d1 = d1;
        c.sweep = {Axis::lambda, 0.05, 0.95, 19};
        c.methods = {"dmt", "non_coop"};
        c.output_path = out(fmt::format("fig4_d1_{:.2f}.csv", d1));
        configs.push_back(c);
      }
      break;
    }
    default:
      throw ConfigError(fmt::format("unknown figure {} (expected 1-4)", figure));
  }
  for (const auto& c : configs) c.validate();
  return configs;
}

}  // namespace ehrelay::experiment
