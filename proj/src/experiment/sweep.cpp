#include <array>
#include <cmath>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "ehrelay/analytic.hpp"
#include "ehrelay/errors.hpp"
#include "ehrelay/experiment.hpp"
#include "ehrelay/mc.hpp"
#include "methods.hpp"

namespace ehrelay::experiment {

namespace detail {

namespace {

struct MethodInfo {
  const char* name;
  std::optional<Metric> metric;
};

constexpr std::array<MethodInfo, 11> kMethods{{
    {"mc", std::nullopt},
    {"non_coop", std::nullopt},
    {"exact_taylor", Metric::outage},
    {"exact_quadrature", Metric::outage},
    {"lower_bound", Metric::outage},
    {"upper_bound", Metric::outage},
    {"high_snr", Metric::outage},
    {"capacity_series", Metric::capacity},
    {"capacity_quadrature", Metric::capacity},
    {"capacity_bounds", Metric::capacity},
    {"dmt", Metric::diversity},
}};

}  // namespace

bool is_known_method(const std::string& method) {
  for (const auto& m : kMethods) {
    if (method == m.name) return true;
  }
  return false;
}

std::optional<Metric> method_metric(const std::string& method) {
  for (const auto& m : kMethods) {
    if (method == m.name) return m.metric;
  }
  return std::nullopt;
}

}  // namespace detail

namespace {

using analytic::IntegralMethod;

// Independent, reproducible seed per sweep point.
std::uint64_t point_seed(std::uint64_t seed, std::size_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct Point {
  double axis = 0.0;
  model::SystemParams params;
  model::DerivedCoeffs coeffs;  // possibly corrupted, closed forms only
  model::TargetRates targets;
  double r = 0.0;
  double gamma = 0.0;  // P1 / sigma^2
  mc::McOptions mc;
};

void evaluate(const Point& p, Metric metric, const std::string& method, double fd_delta_db,
              std::vector<SweepRow>& rows) {
  const auto push = [&](const std::string& name, double value,
                        std::optional<double> se = std::nullopt) {
    rows.push_back({p.axis, name, value, se});
  };

  if (method == "mc") {
    switch (metric) {
      case Metric::outage: {
        const auto e = mc::estimate_outage(p.params, p.targets, p.mc);
        push(method, e.mean, e.std_err);
        return;
      }
      case Metric::capacity: {
        const auto e = mc::estimate_capacity(p.params, p.mc);
        push(method, e.mean, e.std_err);
        return;
      }
      case Metric::diversity: {
        const auto e = mc::estimate_diversity_fd(p.params, p.r, 10.0 * std::log10(p.gamma),
                                                 fd_delta_db, p.mc);
        push(method, e.value, e.std_err);
        return;
      }
    }
  }
  if (method == "non_coop") {
    const auto base = model::non_coop_baseline(p.params);
    switch (metric) {
      case Metric::outage: push(method, base.outage(p.targets)); return;
      case Metric::capacity: push(method, base.capacity()); return;
      case Metric::diversity: push(method, model::NonCoopBaseline::diversity(p.r, p.gamma)); return;
    }
  }
  if (method == "exact_taylor") {
    push(method, analytic::outage_exact(p.params, p.coeffs, p.targets, IntegralMethod::taylor));
  } else if (method == "exact_quadrature") {
    push(method,
         analytic::outage_exact(p.params, p.coeffs, p.targets, IntegralMethod::quadrature));
  } else if (method == "lower_bound") {
    push(method, analytic::outage_bounds(p.params, p.coeffs, p.targets).lower);
  } else if (method == "upper_bound") {
    push(method, analytic::outage_bounds(p.params, p.coeffs, p.targets).upper);
  } else if (method == "high_snr") {
    push(method, analytic::outage_high_snr(p.params, p.coeffs, p.targets));
  } else if (method == "capacity_quadrature") {
    push(method, analytic::capacity_quadrature(p.params, p.coeffs));
  } else if (method == "capacity_series") {
    const auto s = analytic::capacity_series(p.params, p.coeffs, {},
                                             analytic::LogMomentMethod::quadrature);
    if (!s.converged) {
      spdlog::warn("capacity_series at {} stopped after {} terms (tail {:.3g})", p.axis,
                   s.terms_used, s.tail_estimate);
    }
    push(method, s.value);
  } else if (method == "capacity_bounds") {
    const auto b = analytic::capacity_bounds(p.params, p.coeffs);
    push("capacity_bounds.lower", b.lower);
    push("capacity_bounds.tight_upper", b.tight_upper);
    push("capacity_bounds.loose_upper", b.loose_upper);
  } else if (method == "dmt") {
    push(method, analytic::dmt(p.r, p.gamma, p.params));
  } else {
    throw ConfigError(fmt::format("unknown method '{}'", method));
  }
}

}  // namespace

std::vector<std::pair<double, double>> SweepResult::series(const std::string& method) const {
  std::vector<std::pair<double, double>> out;
  for (const auto& row : rows) {
    if (row.method == method) out.emplace_back(row.axis, row.value);
  }
  return out;
}

SweepResult run_sweep(const ExperimentConfig& config) {
  config.validate();
  const Metric metric = config.resolved_metric();

  SweepResult result;
  result.axis_name = to_string(config.sweep.axis);
  result.metadata = {
      {"generator", "ehrelay"},
      {"version", kVersion},
      {"metric", to_string(metric)},
      {"axis", result.axis_name},
      {"seed", std::to_string(config.seed)},
  };
  // Config echo without the fields that must not change the bytes of a
  // re-run (worker count, output location).
  std::istringstream echo(to_config_text(config));
  for (std::string line; std::getline(echo, line);) {
    const auto eq = line.find(" = ");
    const std::string key = line.substr(0, eq);
    if (key == "workers" || key == "output_path") continue;
    result.metadata.emplace_back("config." + key, line.substr(eq + 3));
  }

  const auto axis_points = config.sweep.points();
  for (std::size_t i = 0; i < axis_points.size(); ++i) {
    Point p;
    p.axis = axis_points[i];
    p.params = config.params_at(p.axis);
    p.coeffs = model::derived_coeffs(p.params);
    p.coeffs.b += config.corrupt_b_offset;
    p.targets = model::TargetRates::from_rates(config.t1, config.t2);
    p.r = config.sweep.axis == Axis::r ? p.axis : config.r;
    p.gamma = p.params.p1 / p.params.sigma2;
    p.mc.n = config.mc_n;
    p.mc.seed = point_seed(config.seed, i);
    p.mc.workers = config.workers;

    for (const auto& method : config.methods) {
      try {
        evaluate(p, metric, method, config.fd_delta_db, result.rows);
      } catch (const ConfigError&) {
        throw;
      } catch (const NumericalError& e) {
        throw NumericalError(fmt::format("{} = {}, method {}: {}", result.axis_name, p.axis,
                                         method, e.what()));
      } catch (const DomainError& e) {
        throw NumericalError(fmt::format("{} = {}, method {}: {}", result.axis_name, p.axis,
                                         method, e.what()));
      }
    }
  }
  return result;
}

}  // namespace ehrelay::experiment
