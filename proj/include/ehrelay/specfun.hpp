#pragma once

#include <numbers>

namespace ehrelay::specfun {

inline constexpr double kEulerGamma = std::numbers::egamma_v<double>;

/// Modified Bessel function of the second kind, order one.
///
/// Power-plus-logarithm series for x < 2; Steed's continued fraction for
/// the K0/K1 pair above. Every result is checked against the sandwich
/// exp(-x) <= x K1(x) <= 1 before it is returned. Throws DomainError for
/// x <= 0 or non-finite x.
double bessel_k1(double x);

/// x * K1(x), extended continuously by 1 at x = 0.
double x_bessel_k1(double x);

/// E1(x) = int_1^inf exp(-x t) / t dt for x > 0.
double exp_integral_e1(double x);

/// exp(x) * E1(x), evaluated without forming exp(x) for large x.
double scaled_exp_integral_e1(double x);

/// Tricomi confluent hypergeometric function U(n, n, z) for integer n >= 1
/// and z > 0, i.e. the function satisfying
///
///   Gamma(n) * U(n, n, z) = int_0^inf exp(-z t) t^(n-1) / (1 + t) dt.
///
/// Evaluated by adaptive quadrature of the rescaled integral; when that
/// fails in the small-z regime the closed recurrence from exp(z) E1(z) is
/// used instead. Throws DomainError for n < 1 or z <= 0 and
/// ConvergenceError when neither path succeeds. Overflows to +inf for
/// very large n at very small z.
double tricomi_psi(int n, double z);

/// z^(n-1) * U(n, n, z) = int_0^inf exp(-u) u^(n-1) / ((n-1)! (z + u)) du,
/// which stays O(1) where U itself overflows (large n, small z).
double tricomi_psi_scaled(int n, double z);

/// Same function through the finite sum obtained by unrolling
///   M_n = Gamma(n - 1) / z^(n-1) - M_(n-1),  M_1 = exp(z) E1(z).
/// Exact in exact arithmetic; loses roughly n * log10(z / n) digits when
/// z exceeds n, so it is used only as a cross-check.
double tricomi_psi_recurrence(int n, double z);

/// Digamma at a positive integer: -C + sum_{i<k} 1/i.
double digamma_nat(int k);

}  // namespace ehrelay::specfun
