#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <spdlog/spdlog.h>

#include "ehrelay/analytic.hpp"
#include "ehrelay/errors.hpp"
#include "ehrelay/specfun.hpp"
#include "probability.hpp"

namespace ehrelay::analytic {

namespace detail {

double clamp_probability(double value, std::string_view what, OnExcursion policy) {
  if (std::isnan(value)) {
    throw NumericalError(std::string(what) + ": probability evaluated to NaN");
  }
  if (value >= 0.0 && value <= 1.0) return value;
  const double excursion = value < 0.0 ? -value : value - 1.0;
  if (excursion > kClampSlack) {
    if (policy == OnExcursion::raise) {
      std::ostringstream msg;
      msg.precision(17);
      msg << what << ": probability " << value << " outside [0, 1] beyond rounding slack";
      throw NumericalError(msg.str());
    }
    spdlog::warn("{}: value {:.6g} outside [0, 1] by {:.3g}; clamped", what, value, excursion);
  } else {
    spdlog::debug("{}: clamped {:.17g} to [0, 1]", what, value);
  }
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace detail

namespace {

using detail::clamp_probability;
using detail::OnExcursion;

void require_tau(double tau, const char* who) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw DomainError(std::string(who) + ": threshold must be finite and >= 0");
  }
}

// Positive root of A x^2 - phi x - C = 0 (A, C > 0), written to avoid
// cancellation when phi < 0.
double positive_root(double a, double phi, double c) {
  const double disc = std::sqrt(phi * phi + 4.0 * a * c);
  return phi >= 0.0 ? (phi + disc) / (2.0 * a) : 2.0 * c / (disc - phi);
}

// Quantities shared by the joint term and the bounds.
struct OutageTerms {
  CornerPoint corner;
  double exp_a = 0.0;  // exp(-sigma^2 tau2 b / (P1 omega1))
  double exp_b = 0.0;  // exp(-sigma^2 tau1 b / (P2 omega2))
  double k_a = 0.0;    // sigma^2 tau2 c / (P1 omega1), paired with omega2 and y0
  double k_b = 0.0;    // sigma^2 tau1 c / (P2 omega2), paired with omega1 and x0
};

OutageTerms outage_terms(const SystemParams& p, const DerivedCoeffs& k, double tau1,
                         double tau2) {
  OutageTerms t;
  t.corner = corner_point(p, k, tau1, tau2, CornerMethod::closed_form);
  t.exp_a = std::exp(-p.sigma2 * tau2 * k.b / (p.p1 * p.omega1));
  t.exp_b = std::exp(-p.sigma2 * tau1 * k.b / (p.p2 * p.omega2));
  t.k_a = p.sigma2 * tau2 * k.c / (p.p1 * p.omega1);
  t.k_b = p.sigma2 * tau1 * k.c / (p.p2 * p.omega2);
  return t;
}

// int_0^v exp(-k/z - z/omega) dz
double truncated_integral(double k, double omega, double v, IntegralMethod method) {
  if (v <= 0.0) return 0.0;
  const auto h = [k, omega](double z) {
    return z <= 0.0 ? 0.0 : std::exp(-k / z - z / omega);
  };
  if (method == IntegralMethod::quadrature) {
    numerics::QuadSpec spec;
    spec.abs_tol = 1e-15;
    spec.rel_tol = 1e-12;
    return numerics::quad_adaptive(h, 0.0, v, spec).value;
  }
  // Second-order Taylor expansion of the integrand about nu = v/2,
  // integrated term by term over [0, v].
  const double nu = 0.5 * v;
  const double h0 = h(nu);
  const double g = k / (nu * nu) - 1.0 / omega;
  const double derivs[3] = {h0, h0 * g, h0 * (g * g - 2.0 * k / (nu * nu * nu))};
  double sum = 0.0;
  double factorial = 1.0;
  for (int n = 0; n <= 2; ++n) {
    if (n > 0) factorial *= n;
    const double span = std::pow(v - nu, n + 1) - std::pow(-nu, n + 1);
    sum += derivs[n] / (factorial * (n + 1)) * span;
  }
  return sum;
}

}  // namespace

double cdf_z(double z, double a, double b, double c, double omega1, double omega2) {
  if (!(a > 0.0)) throw DomainError("cdf_z: a must be positive");
  if (!(z >= 0.0)) throw DomainError("cdf_z: z must be >= 0");
  if (!(b >= 0.0 && c >= 0.0)) throw DomainError("cdf_z: b and c must be >= 0");
  if (!(omega1 > 0.0 && omega2 > 0.0)) throw DomainError("cdf_z: omegas must be positive");
  if (z == 0.0) return 0.0;
  if (std::isinf(z)) return 1.0;
  const double u = std::sqrt(4.0 * z * c / (a * omega1 * omega2));
  const double survival = std::exp(-z * b / (a * omega2)) * specfun::x_bessel_k1(u);
  return clamp_probability(1.0 - survival, "cdf_z");
}

double marginal_outage(const SystemParams& params, const DerivedCoeffs& coeffs, double tau,
                       Direction direction) {
  require_tau(tau, "marginal_outage");
  if (direction == Direction::to_s1) {
    return cdf_z(tau, params.p2 / params.sigma2, coeffs.b, coeffs.c, params.omega1,
                 params.omega2);
  }
  return cdf_z(tau, params.p1 / params.sigma2, coeffs.b, coeffs.c, params.omega2,
               params.omega1);
}

CornerPoint corner_point(const SystemParams& p, const DerivedCoeffs& k, double tau1,
                         double tau2, CornerMethod method) {
  if (!(tau1 > 0.0 && tau2 > 0.0) || !std::isfinite(tau1) || !std::isfinite(tau2)) {
    throw DomainError("corner_point: thresholds must be positive and finite");
  }
  const double s2 = p.sigma2;
  const double b = k.b;
  const double c = k.c;

  if (method == CornerMethod::closed_form) {
    const double phi1 = s2 * tau1 * tau2 * b * b / p.p1 + p.p2 * tau2 * c / p.p1 - tau1 * c;
    const double phi2 = s2 * tau1 * tau2 * b * b / p.p2 + p.p1 * tau1 * c / p.p2 - tau2 * c;
    return {positive_root(tau1 * b, phi1, s2 * tau1 * tau2 * b * c / p.p1),
            positive_root(tau2 * b, phi2, s2 * tau1 * tau2 * b * c / p.p2)};
  }

  // y = alpha1 (b + c/x) and x = alpha2 (b + c/y). Eliminating y gives
  // g(x) = alpha1 (b + c/x)(x - alpha2 b) - alpha2 c = 0 on x > alpha2 b,
  // where g increases from -alpha2 c to +inf.
  const double alpha1 = s2 * tau1 / p.p2;
  const double alpha2 = s2 * tau2 / p.p1;
  const auto g = [=](double x) { return alpha1 * (b + c / x) * (x - alpha2 * b) - alpha2 * c; };
  const double lo = alpha2 * b;
  double hi = std::max(2.0 * lo, alpha2 * c / (alpha1 * b) + lo);
  for (int i = 0; g(hi) <= 0.0; ++i) {
    if (i > 2000 || !std::isfinite(hi)) {
      std::ostringstream msg;
      msg << "corner_point: failed to bracket the root (tau1 = " << tau1
          << ", tau2 = " << tau2 << ", b = " << b << ", c = " << c << ")";
      throw NumericalError(msg.str());
    }
    hi *= 2.0;
  }
  const double x0 = numerics::root_bracketed(g, lo, hi, 1e-15);
  return {x0, alpha1 * (b + c / x0)};
}

double corner_residual(const SystemParams& p, const DerivedCoeffs& k, double tau1,
                       double tau2, const CornerPoint& pt) {
  const double y_fit = p.sigma2 * tau1 / p.p2 * (k.b + k.c / pt.x0);
  const double x_fit = p.sigma2 * tau2 / p.p1 * (k.b + k.c / pt.y0);
  return std::max(std::abs(pt.y0 - y_fit) / std::abs(pt.y0),
                  std::abs(pt.x0 - x_fit) / std::abs(pt.x0));
}

double joint_outage(const SystemParams& p, const DerivedCoeffs& k, double tau1, double tau2,
                    IntegralMethod method) {
  require_tau(tau1, "joint_outage");
  require_tau(tau2, "joint_outage");
  if (tau1 == 0.0 || tau2 == 0.0) return 0.0;
  const OutageTerms t = outage_terms(p, k, tau1, tau2);
  const double x0 = t.corner.x0;
  const double y0 = t.corner.y0;
  const double i1 = truncated_integral(t.k_a, p.omega2, y0, method);
  const double i2 = truncated_integral(t.k_b, p.omega1, x0, method);
  const double value = 1.0 - std::exp(-x0 / p.omega1 - y0 / p.omega2) -
                       t.exp_a * i1 / p.omega2 - t.exp_b * i2 / p.omega1;
  return clamp_probability(value, "joint_outage",
                           method == IntegralMethod::taylor ? OnExcursion::warn
                                                            : OnExcursion::raise);
}

double outage_exact(const SystemParams& params, const DerivedCoeffs& coeffs,
                    const TargetRates& targets, IntegralMethod method) {
  const double m1 = marginal_outage(params, coeffs, targets.tau1, Direction::to_s1);
  const double m2 = marginal_outage(params, coeffs, targets.tau2, Direction::to_s2);
  const double joint = joint_outage(params, coeffs, targets.tau1, targets.tau2, method);
  return clamp_probability(m1 + m2 - joint, "outage_exact",
                           method == IntegralMethod::taylor ? OnExcursion::warn
                                                            : OnExcursion::raise);
}

double outage_exact(const SystemParams& params, const TargetRates& targets,
                    IntegralMethod method) {
  return outage_exact(params, model::derived_coeffs(params), targets, method);
}

OutageBounds outage_bounds(const SystemParams& p, const DerivedCoeffs& k,
                           const TargetRates& targets) {
  require_tau(targets.tau1, "outage_bounds");
  require_tau(targets.tau2, "outage_bounds");
  if (targets.tau1 == 0.0 && targets.tau2 == 0.0) return {0.0, 0.0};

  const double exp_a = std::exp(-p.sigma2 * targets.tau2 * k.b / (p.p1 * p.omega1));
  const double exp_b = std::exp(-p.sigma2 * targets.tau1 * k.b / (p.p2 * p.omega2));
  const double u_a = std::sqrt(4.0 * p.sigma2 * targets.tau2 * k.c / (p.p1 * p.omega1 * p.omega2));
  const double u_b = std::sqrt(4.0 * p.sigma2 * targets.tau1 * k.c / (p.p2 * p.omega1 * p.omega2));
  const double success_a = exp_a * specfun::x_bessel_k1(u_a);  // 1 - Pr(gamma2 < tau2)
  const double success_b = exp_b * specfun::x_bessel_k1(u_b);  // 1 - Pr(gamma1 < tau1)

  // One zero threshold sends the corner to (inf, 0) or (0, inf).
  double corner_term = 0.0;
  double decay_x = 0.0;  // exp(-x0 / omega1)
  double decay_y = 0.0;  // exp(-y0 / omega2)
  if (targets.tau1 == 0.0) {
    decay_y = 1.0;
  } else if (targets.tau2 == 0.0) {
    decay_x = 1.0;
  } else {
    const CornerPoint c = corner_point(p, k, targets.tau1, targets.tau2);
    decay_x = std::exp(-c.x0 / p.omega1);
    decay_y = std::exp(-c.y0 / p.omega2);
    corner_term = decay_x * decay_y;
  }
  const double lower = 1.0 + corner_term - exp_a * decay_y - exp_b * decay_x;
  const double upper = 1.0 + corner_term - success_a * decay_y - success_b * decay_x;
  return {clamp_probability(lower, "outage_bounds.lower"),
          clamp_probability(upper, "outage_bounds.upper")};
}

OutageBounds outage_bounds(const SystemParams& params, const TargetRates& targets) {
  return outage_bounds(params, model::derived_coeffs(params), targets);
}

double outage_high_snr(const SystemParams& p, const DerivedCoeffs& k,
                       const TargetRates& targets) {
  require_tau(targets.tau1, "outage_high_snr");
  require_tau(targets.tau2, "outage_high_snr");
  const double value = 2.0 - std::exp(-p.sigma2 * targets.tau2 * k.b / (p.p1 * p.omega1)) -
                       std::exp(-p.sigma2 * targets.tau1 * k.b / (p.p2 * p.omega2));
  return std::clamp(value, 0.0, 1.0);
}

double outage_high_snr(const SystemParams& params, const TargetRates& targets) {
  return outage_high_snr(params, model::derived_coeffs(params), targets);
}

}  // namespace ehrelay::analytic
