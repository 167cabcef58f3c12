#include <cmath>
#include <sstream>

#include "ehrelay/analytic.hpp"
#include "ehrelay/errors.hpp"

namespace ehrelay::analytic {

namespace {

struct Symmetric {
  double tau = 0.0;    // (1 + gamma)^r - 1
  double slope = 0.0;  // sqrt(1 + 4 c gamma / (b^2 tau))
};

Symmetric symmetric_terms(double r, double gamma, const DerivedCoeffs& k) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("dmt: r must be positive");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("dmt: gamma must be positive");
  Symmetric s;
  s.tau = std::expm1(r * std::log1p(gamma));
  s.slope = std::sqrt(1.0 + 4.0 * k.c * gamma / (k.b * k.b * s.tau));
  return s;
}

}  // namespace

double x0_symmetric(double r, double gamma, const DerivedCoeffs& coeffs) {
  const Symmetric s = symmetric_terms(r, gamma, coeffs);
  return coeffs.b * s.tau / (2.0 * gamma) * (1.0 + s.slope);
}

DmtCoefficients dmt_coefficients(double r, double gamma, const DerivedCoeffs& coeffs) {
  const Symmetric s = symmetric_terms(r, gamma, coeffs);
  const double b = coeffs.b;
  const double c = coeffs.c;
  // gamma^2 d(tau/gamma)/dgamma
  const double n = r * gamma * std::exp((r - 1.0) * std::log1p(gamma)) - s.tau;
  DmtCoefficients out;
  out.dthreshold_dgamma = n / (gamma * gamma);
  out.dx0_dgamma =
      n * (b * (1.0 + s.slope) / (2.0 * gamma * gamma) - c / (b * gamma * s.tau * s.slope));
  return out;
}

double outage_lower_symmetric(double r, double gamma, const SystemParams& params) {
  const DerivedCoeffs k = model::derived_coeffs(params);
  const Symmetric s = symmetric_terms(r, gamma, k);
  const double x0 = x0_symmetric(r, gamma, k);
  const double inv1 = 1.0 / params.omega1;
  const double inv2 = 1.0 / params.omega2;
  const double w = k.b * s.tau / gamma;
  return 1.0 + std::exp(-(inv1 + inv2) * x0) - std::exp(-w * inv1 - x0 * inv2) -
         std::exp(-w * inv2 - x0 * inv1);
}

double dmt(double r, double gamma, const SystemParams& params) {
  const DerivedCoeffs k = model::derived_coeffs(params);
  const Symmetric s = symmetric_terms(r, gamma, k);
  const DmtCoefficients d = dmt_coefficients(r, gamma, k);
  const double x0 = x0_symmetric(r, gamma, k);
  const double inv1 = 1.0 / params.omega1;
  const double inv2 = 1.0 / params.omega2;
  const double w = k.b * s.tau / gamma;

  const double e_corner = std::exp(-(inv1 + inv2) * x0);
  const double e12 = std::exp(-w * inv1 - x0 * inv2);
  const double e21 = std::exp(-w * inv2 - x0 * inv1);
  const double p_lower = 1.0 + e_corner - e12 - e21;
  if (!(p_lower > 0.0)) {
    std::ostringstream msg;
    msg << "dmt: symmetric outage bound is " << p_lower << " at r = " << r
        << ", gamma = " << gamma << "; log-derivative undefined";
    throw NumericalError(msg.str());
  }
  const double a = d.dx0_dgamma;
  const double bb = k.b * d.dthreshold_dgamma;
  const double numer = a * (inv1 + inv2) * e_corner - (bb * inv1 + a * inv2) * e12 -
                       (bb * inv2 + a * inv1) * e21;
  return gamma * numer / p_lower;
}

}  // namespace ehrelay::analytic
