#include "ehrelay/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "ehrelay/errors.hpp"

namespace ehrelay::numerics {

namespace {

// 21-point Kronrod abscissae/weights and the embedded 10-point Gauss weights
// (QUADPACK qk21). Index 10 is the centre.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980251186, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a;
  double b;
  double value;
  double error;
};

struct PanelOrder {
  bool operator()(const Panel& lhs, const Panel& rhs) const {
    return lhs.error < rhs.error;
  }
};

double checked_eval(const ScalarFunction& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    std::ostringstream msg;
    msg << "quad_adaptive: integrand is not finite at x = " << x;
    throw NumericalError(msg.str());
  }
  return y;
}

Panel gauss_kronrod_21(const ScalarFunction& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked_eval(f, centre);

  double result_k = fc * kWgk[10];
  double result_g = 0.0;
  double result_abs = std::abs(result_k);
  std::array<double, 10> f1{};
  std::array<double, 10> f2{};
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = checked_eval(f, centre - dx);
    f2[j] = checked_eval(f, centre + dx);
    const double sum = f1[j] + f2[j];
    result_k += kWgk[j] * sum;
    result_abs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) result_g += kWg[j / 2] * sum;
  }

  const double mean = 0.5 * result_k;
  double result_asc = kWgk[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j) {
    result_asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }

  const double value = result_k * half;
  result_abs *= std::abs(half);
  result_asc *= std::abs(half);
  double error = std::abs((result_k - result_g) * half);
  if (result_asc != 0.0 && error != 0.0) {
    error = result_asc * std::min(1.0, std::pow(200.0 * error / result_asc, 1.5));
  }
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  constexpr double kTiny = std::numeric_limits<double>::min();
  if (result_abs > kTiny / (50.0 * kEps)) {
    error = std::max(50.0 * kEps * result_abs, error);
  }
  return {a, b, value, error};
}

QuadResult adaptive_finite(const ScalarFunction& f, double a, double b,
                           const QuadSpec& spec) {
  std::priority_queue<Panel, std::vector<Panel>, PanelOrder> panels;
  Panel first = gauss_kronrod_21(f, a, b);
  panels.push(first);
  double total = first.value;
  double total_err = first.error;
  int evaluations = 21;
  int subdivisions = 1;

  auto tolerance = [&spec](double value) {
    return std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
  };

  while (total_err > tolerance(total)) {
    // Running sums drift; recompute before declaring failure.
    if (subdivisions >= spec.max_subdivisions) {
      auto copy = panels;
      total = 0.0;
      total_err = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        total_err += copy.top().error;
        copy.pop();
      }
      if (total_err <= tolerance(total)) break;
      const Panel& worst = panels.top();
      std::ostringstream msg;
      msg << "quad_adaptive: no convergence after " << subdivisions
          << " subdivisions; estimate " << total << " +/- " << total_err
          << ", worst subinterval [" << worst.a << ", " << worst.b
          << "] with error " << worst.error;
      throw ConvergenceError(msg.str());
    }

    const Panel worst = panels.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      std::ostringstream msg;
      msg << "quad_adaptive: subinterval [" << worst.a << ", " << worst.b
          << "] cannot be bisected further; estimate " << total << " +/- "
          << total_err;
      throw ConvergenceError(msg.str());
    }
    panels.pop();
    const Panel left = gauss_kronrod_21(f, worst.a, mid);
    const Panel right = gauss_kronrod_21(f, mid, worst.b);
    evaluations += 42;
    ++subdivisions;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }

  QuadResult out;
  out.subdivisions = subdivisions;
  out.evaluations = evaluations;
  out.value = 0.0;
  out.error = 0.0;
  while (!panels.empty()) {
    out.value += panels.top().value;
    out.error += panels.top().error;
    panels.pop();
  }
  return out;
}

}  // namespace

void QuadSpec::validate() const {
  if (!(abs_tol >= 0.0)) throw ValidationError("QuadSpec: abs_tol must be >= 0");
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw ValidationError("QuadSpec: rel_tol must lie in (0, 1)");
  }
  if (max_subdivisions < 1) {
    throw ValidationError("QuadSpec: max_subdivisions must be >= 1");
  }
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    throw ValidationError("QuadSpec: scale must be finite and >= 0");
  }
}

QuadResult quad_adaptive(const ScalarFunction& f, double a, double b,
                         const QuadSpec& spec) {
  spec.validate();
  if (!std::isfinite(a)) throw DomainError("quad_adaptive: lower limit must be finite");
  if (std::isnan(b) || b < a) throw DomainError("quad_adaptive: need b >= a");
  if (b == a) return {};

  if (std::isfinite(b)) return adaptive_finite(f, a, b, spec);

  if (spec.transform != Transform::semi_infinite_exp) {
    throw DomainError("quad_adaptive: infinite upper limit requires semi_infinite_exp");
  }

  QuadResult head;
  double start = a;
  double map_scale = 1.0;
  if (spec.scale > 0.0) {
    start = a + 50.0 * spec.scale;
    map_scale = spec.scale;
    head = adaptive_finite(f, a, start, spec);
  }
  const ScalarFunction mapped = [&f, start, map_scale](double t) {
    const double one_minus = 1.0 - t;
    const double z = start + map_scale * t / one_minus;
    return f(z) * map_scale / (one_minus * one_minus);
  };
  QuadResult tail = adaptive_finite(mapped, 0.0, 1.0, spec);
  return {head.value + tail.value, head.error + tail.error,
          head.subdivisions + tail.subdivisions, head.evaluations + tail.evaluations};
}

double root_bracketed(const ScalarFunction& g, double lo, double hi, double tol) {
  if (!(lo <= hi)) throw ValidationError("root_bracketed: need lo <= hi");
  if (!(tol > 0.0)) throw ValidationError("root_bracketed: tol must be positive");
  const double g_lo = g(lo);
  if (g_lo == 0.0) return lo;
  const double g_hi = g(hi);
  if (g_hi == 0.0) return hi;
  if (std::isnan(g_lo) || std::isnan(g_hi) || std::signbit(g_lo) == std::signbit(g_hi)) {
    std::ostringstream msg;
    msg << "root_bracketed: no sign change on [" << lo << ", " << hi << "] (g = " << g_lo
        << ", " << g_hi << ")";
    throw ValidationError(msg.str());
  }

  auto done = [tol](double x0, double x1) {
    const double width = std::abs(x1 - x0);
    return width <= tol * std::max(std::abs(x0), std::abs(x1)) ||
           width <= std::numeric_limits<double>::min();
  };
  std::uintmax_t max_iter = 500;
  const auto [left, right] =
      boost::math::tools::toms748_solve(g, lo, hi, g_lo, g_hi, done, max_iter);
  if (!done(left, right)) {
    std::ostringstream msg;
    msg << "root_bracketed: bracket [" << left << ", " << right
        << "] did not shrink below tolerance";
    throw ConvergenceError(msg.str());
  }
  return 0.5 * (left + right);
}

void SeriesControl::validate() const {
  if (max_terms < 1) throw ValidationError("SeriesControl: max_terms must be >= 1");
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw ValidationError("SeriesControl: rel_tol must lie in (0, 1)");
  }
}

SeriesResult series_accumulate(const std::function<double(int)>& term,
                               const SeriesControl& control) {
  control.validate();
  SeriesResult out;
  int quiet_run = 0;
  for (int k = 0; k < control.max_terms; ++k) {
    const double t = term(k);
    out.sum += t;
    out.terms_used = k + 1;
    out.tail_estimate = std::abs(t);
    if (std::abs(t) <= control.rel_tol * std::abs(out.sum)) {
      if (++quiet_run == 3) {
        out.converged = true;
        break;
      }
    } else {
      quiet_run = 0;
    }
  }
  return out;
}

double central_diff(const ScalarFunction& f, double x, double h) {
  if (!(h > 0.0)) throw DomainError("central_diff: step must be positive");
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace ehrelay::numerics
