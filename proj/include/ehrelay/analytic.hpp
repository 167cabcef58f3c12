#pragma once

#include "ehrelay/model.hpp"
#include "ehrelay/numerics.hpp"

namespace ehrelay::analytic {

using model::DerivedCoeffs;
using model::SystemParams;
using model::TargetRates;

/// CDF of Z = a X Y / (b X + c) with X ~ Exp(omega1), Y ~ Exp(omega2):
///
///   F(z) = 1 - exp(-z b / (a omega2)) u K1(u),  u = sqrt(4 z c / (a omega1 omega2)).
///
/// Continuous at z = 0 through u K1(u) -> 1. Throws DomainError for a <= 0,
/// z < 0, negative b or c, or non-positive omegas.
double cdf_z(double z, double a, double b, double c, double omega1, double omega2);

enum class Direction {
  to_s1,  // gamma1: S2's message decoded at S1
  to_s2,  // gamma2: S1's message decoded at S2
};

/// Pr(gamma_i < tau) via cdf_z with a = P_j / sigma^2 (j the transmitting
/// source) and the fading means ordered so that the gain in the
/// denominator plays the role of X.
double marginal_outage(const SystemParams& params, const DerivedCoeffs& coeffs, double tau,
                       Direction direction);

// Intersection (x0, y0) of the two outage boundaries
//   y = (sigma^2 tau1 / P2)(b + c / x),  x = (sigma^2 tau2 / P1)(b + c / y)
// in the (|h1|^2, |h2|^2) plane.
struct CornerPoint {
  double x0 = 0.0;
  double y0 = 0.0;
};

enum class CornerMethod {
  closed_form,  // positive roots of the two quadratics
  root_solve,   // bracketed root in x after eliminating y from the boundaries
};

CornerPoint corner_point(const SystemParams& params, const DerivedCoeffs& coeffs,
                         double tau1, double tau2, CornerMethod method = CornerMethod::closed_form);

/// Largest relative residual of both boundary equations at `point`.
double corner_residual(const SystemParams& params, const DerivedCoeffs& coeffs, double tau1,
                       double tau2, const CornerPoint& point);

enum class IntegralMethod {
  taylor,      // second-order expansion of the I-integrand about V/2
  quadrature,  // adaptive quadrature (reference)
};

/// Pr(gamma1 < tau1, gamma2 < tau2)
///   = 1 - exp(-x0/omega1 - y0/omega2) - sum_i exp(-sigma^2 tau_j b / (P_i omega_i)) I_i / omega_j,
/// with I_i = int_0^V_i exp(-sigma^2 tau_j c / (P_i omega_i z) - z / omega_j) dz.
double joint_outage(const SystemParams& params, const DerivedCoeffs& coeffs, double tau1,
                    double tau2, IntegralMethod method);

/// System outage by inclusion-exclusion of the marginals and the joint term.
double outage_exact(const SystemParams& params, const DerivedCoeffs& coeffs,
                    const TargetRates& targets, IntegralMethod method);
double outage_exact(const SystemParams& params, const TargetRates& targets,
                    IntegralMethod method = IntegralMethod::quadrature);

struct OutageBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Closed-form bounds obtained by bounding the tail of each I-integral
/// between exp(-V/omega) times its full-range value and omega exp(-V/omega).
OutageBounds outage_bounds(const SystemParams& params, const DerivedCoeffs& coeffs,
                           const TargetRates& targets);
OutageBounds outage_bounds(const SystemParams& params, const TargetRates& targets);

/// 2 - exp(-sigma^2 tau2 b / (P1 omega1)) - exp(-sigma^2 tau1 b / (P2 omega2)),
/// the common limit of the exact value and both bounds once x0, y0 -> 0
/// and u K1(u) -> 1. Clamped to [0, 1].
double outage_high_snr(const SystemParams& params, const DerivedCoeffs& coeffs,
                       const TargetRates& targets);
double outage_high_snr(const SystemParams& params, const TargetRates& targets);

/// Ergodic sum capacity (bits/s/Hz)
///   C = 1/(2 ln 2) sum_i int_0^inf (1 - F_i(z)) / (1 + z) dz
/// by adaptive semi-infinite quadrature. This is the reference evaluator.
double capacity_quadrature(const SystemParams& params, const DerivedCoeffs& coeffs);
double capacity_quadrature(const SystemParams& params);

enum class LogMomentMethod {
  // J_l = int exp(-s z) z^(l+1) ln z / (1 + z) dz replaced by the moment
  // l! s^-(l+1) (psi(l+1) - ln s) of the integrand without 1/(1+z);
  // produces the tight upper estimate.
  moment_approx,
  quadrature,
};

struct SeriesCapacity {
  double value = 0.0;
  // Largest number of l-terms used over both directions.
  int terms_used = 0;
  // Largest last-term magnitude over both directions (bits/s/Hz).
  double tail_estimate = 0.0;
  bool converged = false;
};

/// Capacity from the K1 power series inserted into the capacity integral:
///
///   int (1-F)/(1+z) = U(1,1;s)
///     + sum_{l>=0} q^(l+1)/l! [ (ln q + 2C - H_l - H_(l+1)) U(l+2,l+2;s) + J_l/(l+1)! ]
///
/// with s = sigma^2 b / (P omega_rx), q = sigma^2 c / (P omega1 omega2) per
/// direction and H_l the harmonic numbers. The l = 0 term carries the
/// z ln z contribution. Truncated by `control`; when it stops at max_terms
/// the partial sum is returned with converged = false (this happens when
/// q / s is large, i.e. tiny lambda combined with a weak link).
SeriesCapacity capacity_series(const SystemParams& params, const DerivedCoeffs& coeffs,
                               const numerics::SeriesControl& control,
                               LogMomentMethod method);
SeriesCapacity capacity_series(const SystemParams& params,
                               const numerics::SeriesControl& control = {},
                               LogMomentMethod method = LogMomentMethod::quadrature);

struct CapacityBounds {
  double lower = 0.0;        // u K1(u) replaced by exp(-u)
  double tight_upper = 0.0;  // capacity_series with moment_approx
  double loose_upper = 0.0;  // 1/(2 ln 2) sum_i U(1,1;s_i)
};

CapacityBounds capacity_bounds(const SystemParams& params, const DerivedCoeffs& coeffs);
CapacityBounds capacity_bounds(const SystemParams& params);

// ---------------------------------------------------------------------------
// Finite-SNR diversity for symmetric relaying: P1/sigma^2 = P2/sigma^2 =
// gamma and T1 = T2 = r log2(1 + gamma) / 2, so tau = (1 + gamma)^r - 1.

/// x0 (= y0) for the symmetric case:
///   b ((1+gamma)^r - 1) / (2 gamma) * (1 + sqrt(1 + 4 c gamma / (b^2 ((1+gamma)^r - 1)))).
double x0_symmetric(double r, double gamma, const DerivedCoeffs& coeffs);

struct DmtCoefficients {
  double dx0_dgamma = 0.0;        // d x0 / d gamma
  double dthreshold_dgamma = 0.0;  // d/dgamma [((1+gamma)^r - 1) / gamma]
};

DmtCoefficients dmt_coefficients(double r, double gamma, const DerivedCoeffs& coeffs);

/// The outage lower bound specialised to the symmetric case, as a function
/// of gamma; its log-derivative is the diversity gain below.
double outage_lower_symmetric(double r, double gamma, const SystemParams& params);

/// d(r, gamma) = -gamma / P_L * dP_L / dgamma with P_L the symmetric outage
/// lower bound. Uses params' lambda, eta, epsilon and omegas; powers and
/// noise are taken from gamma. Throws NumericalError when P_L underflows.
double dmt(double r, double gamma, const SystemParams& params);

}  // namespace ehrelay::analytic
