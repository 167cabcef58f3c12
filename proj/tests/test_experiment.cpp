#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ehrelay/errors.hpp"
#include "ehrelay/experiment.hpp"

using namespace ehrelay;
using namespace ehrelay::experiment;
namespace fs = std::filesystem;

namespace {

const char* kOutageConfig = R"(# outage sweep
snr_db = 10
lambda = 0.75
sweep = snr_db
start = 0
stop = 30
steps = 4
methods = mc, exact_quadrature, lower_bound, upper_bound
mc_n = 1e5
seed = 3
)";

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ehrelay_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string with_line(std::string text, const std::string& line) { return text + line + "\n"; }

}  // namespace

TEST(Config, ParsesKeysAndInfersMetric) {
  const auto c = parse_config(kOutageConfig);
  EXPECT_EQ(c.sweep.axis, Axis::snr_db);
  EXPECT_EQ(c.sweep.steps, 4);
  EXPECT_EQ(c.mc_n, 100'000);
  EXPECT_EQ(c.seed, 3u);
  ASSERT_EQ(c.methods.size(), 4u);
  EXPECT_EQ(c.methods[1], "exact_quadrature");
  EXPECT_EQ(c.resolved_metric(), Metric::outage);
}

TEST(Config, MetricInferenceFromMethods) {
  auto c = parse_config("sweep = lambda\nstart = 0.1\nstop = 0.9\nsteps = 3\nmethods = dmt\n");
  EXPECT_EQ(c.resolved_metric(), Metric::diversity);
  c = parse_config("sweep = lambda\nstart = 0.1\nstop = 0.9\nsteps = 3\nmethods = non_coop\n"
                   "metric = capacity\n");
  EXPECT_EQ(c.resolved_metric(), Metric::capacity);
  EXPECT_THROW(parse_config("methods = non_coop\n"), ConfigError);
  EXPECT_THROW(parse_config("methods = dmt, capacity_series\n"), ConfigError);
  EXPECT_THROW(parse_config("methods = dmt\nmetric = outage\n"), ConfigError);
}

TEST(Config, RejectsUnknownAndRepeatedKeys) {
  EXPECT_THROW(parse_config(with_line(kOutageConfig, "lamda = 0.5")), ConfigError);
  EXPECT_THROW(parse_config(with_line(kOutageConfig, "seed = 4")), ConfigError);
  EXPECT_THROW(parse_config(with_line(kOutageConfig, "corrupt_b_offset = 0.1")), ConfigError);
  EXPECT_THROW(parse_config(with_line(kOutageConfig, "just words")), ConfigError);
}

TEST(Config, RejectsInvalidValues) {
  const std::string base = "methods = exact_quadrature\n";
  EXPECT_THROW(parse_config(base + "steps = 1\n"), ConfigError);
  EXPECT_THROW(parse_config(base + "lambda = 1\n"), ConfigError);
  EXPECT_THROW(parse_config(base + "lambda = abc\n"), ConfigError);
  EXPECT_THROW(parse_config(base + "sweep = lambda\nstart = 0\nstop = 0.5\n"), ConfigError);
  EXPECT_THROW(parse_config(base + "sweep = d1\nstart = 0.2\nstop = 1\n"), ConfigError);
  EXPECT_THROW(parse_config(base + "sweep = r\nstart = 0.1\nstop = 1\n"), ConfigError);
  EXPECT_THROW(parse_config(base + "start = 10\nstop = 5\n"), ConfigError);
  EXPECT_THROW(parse_config(base + "mc_n = 0\n"), ConfigError);
  EXPECT_THROW(parse_config("methods = exact_quadrature, bogus\n"), ConfigError);
  EXPECT_THROW(parse_config("methods =\n"), ConfigError);
  EXPECT_THROW(parse_config("methods = dmt\np1 = 10\np2 = 20\n"), ConfigError);
  EXPECT_THROW(parse_config("methods = dmt\nsweep = r\nstart = 0.5\nstop = 1.5\n"), ConfigError);
}

TEST(Config, ValidationErrorsAreCatchableAsValidationError) {
  EXPECT_THROW(parse_config("steps = 0\nmethods = mc\n"), ValidationError);
}

TEST(Config, TextRoundTrip) {
  auto c = parse_config(kOutageConfig);
  c.p2 = 250.0;
  c.t2 = 1.25;
  const std::string text = to_config_text(c);
  const auto back = parse_config(text);
  EXPECT_EQ(to_config_text(back), text);
  EXPECT_DOUBLE_EQ(back.p2, 250.0);
  EXPECT_DOUBLE_EQ(back.t2, 1.25);
}

TEST(Config, SnrSettingKeepsPowerRatio) {
  auto c = parse_config(kOutageConfig);
  c.snr_db.reset();
  c.p1 = 10.0;
  c.p2 = 40.0;
  c.sigma2 = 2.0;
  const auto p = c.params_at(20.0);
  EXPECT_NEAR(p.p1, 200.0, 1e-9);
  EXPECT_NEAR(p.p2, 800.0, 1e-9);
  EXPECT_DOUBLE_EQ(p.sigma2, 2.0);
}

TEST(Config, LoadResolvesOutputBesideConfig) {
  const auto dir = scratch_dir("load");
  std::ofstream(dir / "exp.cfg") << with_line(kOutageConfig, "output_path = out.csv");
  const auto c = load_config(dir / "exp.cfg");
  EXPECT_EQ(fs::path(c.output_path), dir / "out.csv");
  EXPECT_THROW(load_config(dir / "missing.cfg"), ConfigError);
}

TEST(SweepSpec, EvenlySpacedWithEndpoints) {
  const auto pts = SweepSpec{Axis::lambda, 0.05, 0.95, 19}.points();
  ASSERT_EQ(pts.size(), 19u);
  EXPECT_DOUBLE_EQ(pts.front(), 0.05);
  EXPECT_DOUBLE_EQ(pts.back(), 0.95);
  EXPECT_NEAR(pts[7], 0.4, 1e-15);
}

TEST(RunSweep, OneRowPerPointAndMethod) {
  const auto r = run_sweep(parse_config(kOutageConfig));
  EXPECT_EQ(r.axis_name, "snr_db");
  EXPECT_EQ(r.rows.size(), 4u * 4u);
  for (const auto& row : r.rows) EXPECT_EQ(row.std_err.has_value(), row.method == "mc");
  const auto exact = r.series("exact_quadrature");
  const auto lower = r.series("lower_bound");
  const auto upper = r.series("upper_bound");
  ASSERT_EQ(exact.size(), 4u);
  for (std::size_t i = 0; i < exact.size(); ++i) {
    if (i > 0) {
      EXPECT_GT(exact[i].first, exact[i - 1].first);
    }
    EXPECT_LE(lower[i].second, exact[i].second + 1e-9);
    EXPECT_LE(exact[i].second, upper[i].second + 1e-9);
  }
}

TEST(RunSweep, CapacityBoundsExpandIntoThreeSeries) {
  const auto r = run_sweep(parse_config(
      "snr_db = 20\nsweep = lambda\nstart = 0.2\nstop = 0.8\nsteps = 3\n"
      "methods = capacity_quadrature, capacity_bounds\n"));
  for (const char* m : {"capacity_bounds.lower", "capacity_bounds.tight_upper",
                        "capacity_bounds.loose_upper"}) {
    EXPECT_EQ(r.series(m).size(), 3u) << m;
  }
}

TEST(RunSweep, IdenticalCsvForAnyWorkerCount) {
  auto c = parse_config(kOutageConfig);
  c.workers = 1;
  const std::string one = to_csv(run_sweep(c));
  for (unsigned w : {2u, 8u}) {
    c.workers = w;
    EXPECT_EQ(to_csv(run_sweep(c)), one);
  }
}

TEST(Csv, RoundTrip) {
  const auto r = run_sweep(parse_config(kOutageConfig));
  const std::string csv = to_csv(r);
  const auto back = parse_csv(csv);
  EXPECT_EQ(to_csv(back), csv);
  ASSERT_EQ(back.rows.size(), r.rows.size());
  EXPECT_EQ(back.metadata, r.metadata);
  EXPECT_NE(csv.find("axis,method,value,std_err\n"), std::string::npos);
}

TEST(Csv, RejectsMalformedInput) {
  EXPECT_THROW(parse_csv("axis,method,value\n1,mc,0.5\n"), ValidationError);
  EXPECT_THROW(parse_csv("axis,method,value,std_err\n1,mc,zero,\n"), ValidationError);
}

TEST(Outputs, PlotScriptUsesRelativeCsvPath) {
  const auto dir = scratch_dir("plot");
  auto c = parse_config(kOutageConfig);
  const auto r = run_sweep(c);
  write_outputs(r, dir / "curve.csv");
  ASSERT_TRUE(fs::exists(dir / "curve.csv"));
  ASSERT_TRUE(fs::exists(dir / "curve.gp"));
  const std::string gp = slurp(dir / "curve.gp");
  EXPECT_NE(gp.find("'curve.csv'"), std::string::npos);
  EXPECT_EQ(gp.find(dir.string()), std::string::npos);
  EXPECT_EQ(slurp(dir / "curve.csv"), to_csv(r));
}

TEST(Validate, FirstFigurePresetPasses) {
  PresetOptions o;
  o.out_dir = scratch_dir("fig1");
  const auto report = validate(preset(1, o).front());
  EXPECT_TRUE(report.passed) << report.text();
  EXPECT_EQ(report.entries.size(), 7u);
  EXPECT_TRUE(fs::exists(o.out_dir / "fig1.validation.txt"));
}

TEST(Validate, CorruptedCoefficientFails) {
  PresetOptions o;
  o.out_dir = scratch_dir("fig1_corrupt");
  auto c = preset(1, o).front();
  c.corrupt_b_offset = 0.1;
  EXPECT_FALSE(validate(c).passed);
}

TEST(Validate, ZeroRatesPassTrivially) {
  const auto dir = scratch_dir("zero");
  auto c = parse_config(with_line(kOutageConfig, "t1 = 0\nt2 = 0"));
  c.output_path = (dir / "zero.csv").string();
  const auto report = validate(c);
  EXPECT_TRUE(report.passed);
  const auto r = parse_csv(slurp(dir / "zero.csv"));
  for (const auto& row : r.rows) EXPECT_EQ(row.value, 0.0) << row.method;
}

TEST(Validate, NeedsMonteCarloAndAnExactMethod) {
  auto c = parse_config("methods = exact_quadrature, lower_bound\n");
  c.output_path = (scratch_dir("nomc") / "x.csv").string();
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(LambdaStar, CapacityOptimumInTheMiddle) {
  auto c = preset(2, {}).front();
  c.methods = {"capacity_quadrature"};
  const auto s = find_lambda_star(c);
  EXPECT_GE(s.lambda, 0.3);
  EXPECT_LE(s.lambda, 0.6);
  EXPECT_LE(s.bracket_lo, s.lambda);
  EXPECT_GE(s.bracket_hi, s.lambda);
  EXPECT_FALSE(s.flat);
}

TEST(LambdaStar, DiversityOptimumForNearRelay) {
  auto configs = preset(4, {});
  auto c = configs.front();
  ASSERT_DOUBLE_EQ(c.d1, 0.1);
  c.methods = {"dmt"};
  EXPECT_LE(find_lambda_star(c).lambda, 0.2 + 1e-12);
}

TEST(LambdaStar, FlatGridReturnsFirstPoint) {
  SweepResult r;
  r.axis_name = "lambda";
  for (double l : {0.2, 0.4, 0.6}) r.rows.push_back({l, "non_coop", 1.5, std::nullopt});
  const auto s = lambda_star_from(r, "non_coop", Metric::capacity);
  EXPECT_TRUE(s.flat);
  EXPECT_DOUBLE_EQ(s.lambda, 0.2);
}

TEST(LambdaStar, OutageIsMinimised) {
  SweepResult r;
  for (double l : {0.2, 0.4, 0.6}) r.rows.push_back({l, "exact_quadrature", l * (1 - l), {}});
  EXPECT_DOUBLE_EQ(lambda_star_from(r, "exact_quadrature", Metric::outage).lambda, 0.2);
  EXPECT_DOUBLE_EQ(lambda_star_from(r, "exact_quadrature", Metric::capacity).lambda, 0.4);
}

TEST(LambdaStar, RequiresLambdaAxisAndOneMethod) {
  auto c = parse_config(kOutageConfig);
  c.methods = {"exact_quadrature"};
  EXPECT_THROW(find_lambda_star(c), ConfigError);
  auto d = preset(2, {}).front();
  EXPECT_THROW(find_lambda_star(d), ConfigError);
}

TEST(Presets, FrozenShapes) {
  EXPECT_EQ(preset(1, {}).size(), 1u);
  EXPECT_EQ(preset(2, {}).size(), 1u);
  EXPECT_EQ(preset(3, {}).size(), 4u);
  EXPECT_EQ(preset(4, {}).size(), 3u);
  EXPECT_THROW(preset(5, {}), ConfigError);
  const auto fig1 = preset(1, {}).front();
  EXPECT_DOUBLE_EQ(fig1.lambda, 0.75);
  EXPECT_EQ(fig1.sweep.steps, 7);
  EXPECT_EQ(fs::path(preset(3, {})[1].output_path).filename(), "fig3_snr10.csv");
}
