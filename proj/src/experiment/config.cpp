#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "ehrelay/errors.hpp"
#include "ehrelay/experiment.hpp"
#include "methods.hpp"

namespace ehrelay::experiment {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(const std::string& key, const std::string& text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ConfigError(fmt::format("config key '{}': '{}' is not a finite number", key, text));
  }
  return value;
}

// Integers may be written in scientific notation (mc_n = 1e6).
std::int64_t parse_count(const std::string& key, const std::string& text) {
  const double value = parse_real(key, text);
  if (value != std::floor(value) || std::abs(value) > 9.0e15) {
    throw ConfigError(fmt::format("config key '{}': '{}' is not an integer", key, text));
  }
  return static_cast<std::int64_t>(value);
}

std::uint64_t parse_seed(const std::string& text) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(fmt::format("config key 'seed': '{}' is not an unsigned integer", text));
  }
  return value;
}

Metric parse_metric(const std::string& text) {
  if (text == "outage") return Metric::outage;
  if (text == "capacity") return Metric::capacity;
  if (text == "diversity") return Metric::diversity;
  throw ConfigError(fmt::format("config key 'metric': unknown metric '{}'", text));
}

Axis parse_axis(const std::string& text) {
  if (text == "snr_db") return Axis::snr_db;
  if (text == "lambda") return Axis::lambda;
  if (text == "r") return Axis::r;
  if (text == "d1") return Axis::d1;
  throw ConfigError(fmt::format("config key 'sweep': unknown axis '{}'", text));
}

std::vector<std::string> parse_methods(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string real(double v) { return fmt::format("{:.17g}", v); }

void check_open_unit(double v, const char* what) {
  if (!(v > 0.0 && v < 1.0)) {
    throw ConfigError(fmt::format("{} = {} must lie strictly inside (0, 1)", what, v));
  }
}

}  // namespace

const char* to_string(Metric metric) {
  switch (metric) {
    case Metric::outage: return "outage";
    case Metric::capacity: return "capacity";
    case Metric::diversity: return "diversity";
  }
  return "?";
}

const char* to_string(Axis axis) {
  switch (axis) {
    case Axis::snr_db: return "snr_db";
    case Axis::lambda: return "lambda";
    case Axis::r: return "r";
    case Axis::d1: return "d1";
  }
  return "?";
}

std::vector<double> SweepSpec::points() const {
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    out[static_cast<std::size_t>(i)] =
        i == steps - 1 ? stop : start + (stop - start) * i / (steps - 1.0);
  }
  return out;
}

Metric ExperimentConfig::resolved_metric() const {
  std::set<Metric> implied;
  for (const auto& m : methods) {
    if (const auto metric = detail::method_metric(m)) implied.insert(*metric);
  }
  if (implied.size() > 1) {
    throw ConfigError("methods mix outage, capacity and diversity evaluators");
  }
  if (metric) {
    if (!implied.empty() && *implied.begin() != *metric) {
      throw ConfigError(fmt::format("metric = {} conflicts with the listed methods",
                                    to_string(*metric)));
    }
    return *metric;
  }
  if (implied.empty()) {
    throw ConfigError("metric cannot be inferred from the methods; set 'metric'");
  }
  return *implied.begin();
}

model::SystemParams ExperimentConfig::params_at(double axis_value) const {
  double power1 = p1;
  double power2 = p2;
  double lam = lambda;
  double dist = d1;
  const auto set_snr = [&](double db) {
    const double ratio = p2 / p1;
    power1 = sigma2 * std::pow(10.0, db / 10.0);
    power2 = power1 * ratio;
  };
  if (snr_db) set_snr(*snr_db);
  switch (sweep.axis) {
    case Axis::snr_db: set_snr(axis_value); break;
    case Axis::lambda: lam = axis_value; break;
    case Axis::d1: dist = axis_value; break;
    case Axis::r: break;
  }
  try {
    return model::build_params(power1, power2, sigma2, eta, lam, epsilon, dist, path_loss_exp);
  } catch (const ValidationError& e) {
    throw ConfigError(fmt::format("{} = {}: {}", to_string(sweep.axis), axis_value, e.what()));
  }
}

void ExperimentConfig::validate() const {
  if (methods.empty()) throw ConfigError("methods must not be empty");
  std::set<std::string> seen;
  for (const auto& m : methods) {
    if (!detail::is_known_method(m)) throw ConfigError(fmt::format("unknown method '{}'", m));
    if (!seen.insert(m).second) throw ConfigError(fmt::format("method '{}' listed twice", m));
  }
  const Metric m = resolved_metric();

  if (sweep.steps < 2) throw ConfigError("steps must be >= 2");
  if (!std::isfinite(sweep.start) || !std::isfinite(sweep.stop) || !(sweep.start < sweep.stop)) {
    throw ConfigError("sweep requires finite start < stop");
  }
  switch (sweep.axis) {
    case Axis::lambda:
      check_open_unit(sweep.start, "lambda start");
      check_open_unit(sweep.stop, "lambda stop");
      break;
    case Axis::d1:
      check_open_unit(sweep.start, "d1 start");
      check_open_unit(sweep.stop, "d1 stop");
      break;
    case Axis::r:
      if (m != Metric::diversity) throw ConfigError("sweep = r requires metric = diversity");
      if (!(sweep.start > 0.0 && sweep.stop <= 1.0)) {
        throw ConfigError("multiplexing gain sweep must lie in (0, 1]");
      }
      break;
    case Axis::snr_db: break;
  }

  if (!(p1 > 0.0 && p2 > 0.0 && sigma2 > 0.0)) {
    throw ConfigError("p1, p2 and sigma2 must be positive");
  }
  if (!(t1 >= 0.0 && t2 >= 0.0)) throw ConfigError("target rates t1, t2 must be >= 0");
  if (!(mc_n >= 1)) throw ConfigError("mc_n must be >= 1");
  if (!(fd_delta_db > 0.0)) throw ConfigError("fd_delta_db must be positive");
  if (output_path.empty()) throw ConfigError("output_path must not be empty");
  if (m == Metric::diversity) {
    if (p1 != p2) throw ConfigError("metric = diversity needs symmetric powers (p1 = p2)");
    if (sweep.axis != Axis::r && !(r > 0.0 && r <= 1.0)) {
      throw ConfigError("r must lie in (0, 1]");
    }
  }
  // Domain checks of every other field at both ends of the sweep.
  params_at(sweep.start);
  params_at(sweep.stop);
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("config line {}: expected 'key = value'", line_no));
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (!seen.insert(key).second) {
      throw ConfigError(fmt::format("config line {}: key '{}' repeated", line_no, key));
    }
    if (value.empty()) {
      throw ConfigError(fmt::format("config line {}: key '{}' has no value", line_no, key));
    }

    if (key == "p1") c.p1 = parse_real(key, value);
    else if (key == "p2") c.p2 = parse_real(key, value);
    else if (key == "sigma2") c.sigma2 = parse_real(key, value);
    else if (key == "snr_db") c.snr_db = parse_real(key, value);
    else if (key == "eta") c.eta = parse_real(key, value);
    else if (key == "lambda") c.lambda = parse_real(key, value);
    else if (key == "epsilon") c.epsilon = parse_real(key, value);
    else if (key == "d1") c.d1 = parse_real(key, value);
    else if (key == "path_loss_exp") c.path_loss_exp = parse_real(key, value);
    else if (key == "t1") c.t1 = parse_real(key, value);
    else if (key == "t2") c.t2 = parse_real(key, value);
    else if (key == "r") c.r = parse_real(key, value);
    else if (key == "metric") c.metric = parse_metric(value);
    else if (key == "sweep") c.sweep.axis = parse_axis(value);
    else if (key == "start") c.sweep.start = parse_real(key, value);
    else if (key == "stop") c.sweep.stop = parse_real(key, value);
    else if (key == "steps") c.sweep.steps = static_cast<int>(std::clamp<std::int64_t>(
        parse_count(key, value), -1, 1'000'000));
    else if (key == "methods") c.methods = parse_methods(value);
    else if (key == "mc_n") c.mc_n = parse_count(key, value);
    else if (key == "seed") c.seed = parse_seed(value);
    else if (key == "workers") {
      const auto w = parse_count(key, value);
      if (w < 0 || w > 4096) throw ConfigError("workers must lie in [0, 4096]");
      c.workers = static_cast<unsigned>(w);
    }
    else if (key == "fd_delta_db") c.fd_delta_db = parse_real(key, value);
    else if (key == "output_path") c.output_path = value;
    else throw ConfigError(fmt::format("config line {}: unknown key '{}'", line_no, key));
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  auto config = parse_config(buf.str());
  // Relative output paths are taken relative to the config file.
  const std::filesystem::path out(config.output_path);
  if (out.is_relative()) config.output_path = (path.parent_path() / out).string();
  return config;
}

std::string to_config_text(const ExperimentConfig& c) {
  std::string out;
  const auto line = [&out](const char* key, const std::string& value) {
    out += fmt::format("{} = {}\n", key, value);
  };
  line("p1", real(c.p1));
  line("p2", real(c.p2));
  line("sigma2", real(c.sigma2));
  if (c.snr_db) line("snr_db", real(*c.snr_db));
  line("eta", real(c.eta));
  line("lambda", real(c.lambda));
  line("epsilon", real(c.epsilon));
  line("d1", real(c.d1));
  line("path_loss_exp", real(c.path_loss_exp));
  line("t1", real(c.t1));
  line("t2", real(c.t2));
  line("r", real(c.r));
  if (c.metric) line("metric", to_string(*c.metric));
  line("sweep", to_string(c.sweep.axis));
  line("start", real(c.sweep.start));
  line("stop", real(c.sweep.stop));
  line("steps", std::to_string(c.sweep.steps));
  std::string methods;
  for (const auto& m : c.methods) methods += (methods.empty() ? "" : ", ") + m;
  line("methods", methods);
  line("mc_n", std::to_string(c.mc_n));
  line("seed", std::to_string(c.seed));
  line("workers", std::to_string(c.workers));
  line("fd_delta_db", real(c.fd_delta_db));
  line("output_path", c.output_path);
  return out;
}

}  // namespace ehrelay::experiment
