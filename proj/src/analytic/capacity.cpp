#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "ehrelay/analytic.hpp"
#include "ehrelay/errors.hpp"
#include "ehrelay/specfun.hpp"

namespace ehrelay::analytic {

namespace {

const double kInvTwoLn2 = 0.5 / std::numbers::ln2;

// Per-direction exponents of the SNR survival function
//   1 - F(z) = exp(-s z) * u K1(u),  u = 2 sqrt(q z).
struct DirectionScales {
  double s = 0.0;
  double q = 0.0;
};

std::array<DirectionScales, 2> direction_scales(const SystemParams& p, const DerivedCoeffs& k) {
  if (!(k.b > 0.0) || !(k.c >= 0.0)) {
    throw DomainError("capacity: coefficients need b > 0 and c >= 0");
  }
  const double q_common = k.c / (p.omega1 * p.omega2);
  return {{{p.sigma2 * k.b / (p.p2 * p.omega2), p.sigma2 * q_common / p.p2},
           {p.sigma2 * k.b / (p.p1 * p.omega1), p.sigma2 * q_common / p.p1}}};
}

// int_0^inf exp(-s z) w(2 sqrt(q z)) / (1 + z) dz for a survival kernel w.
template <class Kernel>
double survival_integral(const DirectionScales& d, Kernel kernel) {
  const auto f = [&](double z) {
    if (z <= 0.0) return 1.0;
    return std::exp(-d.s * z) * kernel(2.0 * std::sqrt(d.q * z)) / (1.0 + z);
  };
  numerics::QuadSpec spec;
  spec.abs_tol = 1e-14;
  spec.rel_tol = 1e-11;
  spec.transform = numerics::Transform::semi_infinite_exp;
  // Decay length of the integrand: exp(-s z) or exp(-2 sqrt(q z)).
  double length = 1.0 / d.s;
  if (d.q > 0.0) length = std::min(length, 4.5 / d.q);
  spec.scale = length;
  return numerics::quad_adaptive(f, 0.0, INFINITY, spec).value;
}

double harmonic(int n) {
  double h = 0.0;
  for (int i = 1; i <= n; ++i) h += 1.0 / i;
  return h;
}

// int exp(-u) u^(l+1) (ln u - ln s) / ((l+1)! (s + u)) du
double log_moment(int l, double s) {
  const double m = l + 1.0;
  const double log_norm = std::lgamma(m + 1.0);
  const double log_s = std::log(s);
  const auto f = [=](double u) {
    if (u <= 0.0) return 0.0;
    const double log_u = std::log(u);
    return std::exp(-u + m * log_u - log_norm) * (log_u - log_s) / (s + u);
  };
  numerics::QuadSpec spec;
  spec.abs_tol = 1e-15;
  spec.rel_tol = 1e-11;
  spec.transform = numerics::Transform::semi_infinite_exp;
  spec.scale = (m + 40.0 + 10.0 * std::sqrt(m + 1.0)) / 50.0;
  return numerics::quad_adaptive(f, 0.0, INFINITY, spec).value;
}

numerics::SeriesResult direction_series(const DirectionScales& d,
                                        const numerics::SeriesControl& control,
                                        LogMomentMethod method) {
  if (d.q == 0.0) return {0.0, 0, 0.0, true};
  const double log_q = std::log(d.q);
  const double log_rho = log_q - std::log(d.s);
  const auto term = [&](int l) {
    const double weight = std::exp((l + 1) * log_rho - std::lgamma(l + 1.0));
    const double a_hat = specfun::tricomi_psi_scaled(l + 2, d.s);
    const double b_hat = method == LogMomentMethod::quadrature
                             ? log_moment(l, d.s)
                             : (specfun::digamma_nat(l + 1) - std::log(d.s)) / (l + 1.0);
    const double coef = log_q + 2.0 * specfun::kEulerGamma - harmonic(l) - harmonic(l + 1);
    return weight * (coef * a_hat + b_hat);
  };
  return numerics::series_accumulate(term, control);
}

}  // namespace

double capacity_quadrature(const SystemParams& params, const DerivedCoeffs& coeffs) {
  double total = 0.0;
  for (const auto& d : direction_scales(params, coeffs)) {
    total += survival_integral(d, [](double u) { return specfun::x_bessel_k1(u); });
  }
  return kInvTwoLn2 * total;
}

double capacity_quadrature(const SystemParams& params) {
  return capacity_quadrature(params, model::derived_coeffs(params));
}

SeriesCapacity capacity_series(const SystemParams& params, const DerivedCoeffs& coeffs,
                               const numerics::SeriesControl& control, LogMomentMethod method) {
  SeriesCapacity out;
  out.converged = true;
  double total = 0.0;
  for (const auto& d : direction_scales(params, coeffs)) {
    const auto series = direction_series(d, control, method);
    total += specfun::tricomi_psi(1, d.s) + series.sum;
    out.terms_used = std::max(out.terms_used, series.terms_used);
    out.tail_estimate = std::max(out.tail_estimate, kInvTwoLn2 * series.tail_estimate);
    out.converged = out.converged && series.converged;
  }
  out.value = kInvTwoLn2 * total;
  if (!std::isfinite(out.value)) {
    throw NumericalError("capacity_series: non-finite partial sum");
  }
  return out;
}

SeriesCapacity capacity_series(const SystemParams& params, const numerics::SeriesControl& control,
                               LogMomentMethod method) {
  return capacity_series(params, model::derived_coeffs(params), control, method);
}

CapacityBounds capacity_bounds(const SystemParams& params, const DerivedCoeffs& coeffs) {
  CapacityBounds out;
  double lower = 0.0;
  double loose = 0.0;
  for (const auto& d : direction_scales(params, coeffs)) {
    lower += survival_integral(d, [](double u) { return std::exp(-u); });
    loose += specfun::scaled_exp_integral_e1(d.s);
  }
  out.lower = kInvTwoLn2 * lower;
  out.loose_upper = kInvTwoLn2 * loose;
  out.tight_upper =
      capacity_series(params, coeffs, numerics::SeriesControl{}, LogMomentMethod::moment_approx)
          .value;
  return out;
}

CapacityBounds capacity_bounds(const SystemParams& params) {
  return capacity_bounds(params, model::derived_coeffs(params));
}

}  // namespace ehrelay::analytic
