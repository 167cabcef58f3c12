#include "ehrelay/specfun.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ehrelay/errors.hpp"
#include "ehrelay/numerics.hpp"

namespace ehrelay::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_positive_finite(double x, const char* who) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream msg;
    msg << who << ": argument must be positive and finite, got " << x;
    throw DomainError(msg.str());
  }
}

// x K1(x) = 1 + sum_k t^(k+1) / (k! (k+1)!) [2 ln(x/2) - psi(k+1) - psi(k+2)],
// t = x^2 / 4. Used for x < 2 where the terms decay quickly.
double x_k1_series(double x) {
  const double t = 0.25 * x * x;
  const double two_log_half_x = 2.0 * std::log(0.5 * x);
  double coeff = t;          // t^(k+1) / (k! (k+1)!)
  double psi_k1 = -kEulerGamma;      // psi(k+1)
  double psi_k2 = 1.0 - kEulerGamma; // psi(k+2)
  double sum = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double term = coeff * (two_log_half_x - psi_k1 - psi_k2);
    sum += term;
    if (std::abs(term) <= kEps * std::abs(sum) && k > 1) break;
    coeff *= t / ((k + 1.0) * (k + 2.0));
    psi_k1 = psi_k2;
    psi_k2 += 1.0 / (k + 2.0);
  }
  return 1.0 + sum;
}

// Steed's continued fraction (Temme's CF2) for K0 and K1, x >= 2.
double k1_continued_fraction(double x) {
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i <= 10000; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) {
      h *= a1;
      const double k0 = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
      return k0 * (x + 0.5 - h) / x;
    }
  }
  std::ostringstream msg;
  msg << "bessel_k1: continued fraction did not converge at x = " << x;
  throw ConvergenceError(msg.str());
}

double e1_series(double x) {
  double term = 1.0;  // (-x)^k / k!
  double sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    term *= -x / k;
    const double add = term / k;
    sum += add;
    if (std::abs(add) < kEps * std::abs(sum)) break;
  }
  return -kEulerGamma - std::log(x) - sum;
}

// exp(x) E1(x) by modified Lentz evaluation of the continued fraction; x > 1.
double scaled_e1_continued_fraction(double x) {
  constexpr double kFloor = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / kFloor;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 10000; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  std::ostringstream msg;
  msg << "exp_integral_e1: continued fraction did not converge at x = " << x;
  throw ConvergenceError(msg.str());
}

// int_0^inf exp(-u) u^(n-1) / ((n-1)! (z + u)) du.
double normalized_psi_integral(int n, double z) {
  const double log_norm = std::lgamma(static_cast<double>(n));
  const double m = n - 1.0;
  const numerics::ScalarFunction integrand = [=](double u) {
    if (u <= 0.0) return n == 1 ? 1.0 / z : 0.0;
    const double log_w = n == 1 ? -u : -u + m * std::log(u) - log_norm;
    return std::exp(log_w) / (z + u);
  };
  numerics::QuadSpec spec;
  spec.abs_tol = 0.0;
  spec.rel_tol = 1e-12;
  spec.transform = numerics::Transform::semi_infinite_exp;
  spec.scale = (m + 40.0 + 10.0 * std::sqrt(m + 1.0)) / 50.0;
  return numerics::quad_adaptive(integrand, 0.0, INFINITY, spec).value;
}

}  // namespace

double bessel_k1(double x) {
  require_positive_finite(x, "bessel_k1");
  const double xk = x < 2.0 ? x_k1_series(x) : x * k1_continued_fraction(x);
  if (!(std::exp(-x) <= xk && xk <= 1.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "bessel_k1: bound exp(-x) <= x K1(x) <= 1 violated at x = " << x
        << " (x K1 = " << xk << ")";
    throw NumericalError(msg.str());
  }
  return xk / x;
}

double x_bessel_k1(double x) {
  if (x == 0.0) return 1.0;
  return x * bessel_k1(x);
}

double exp_integral_e1(double x) {
  require_positive_finite(x, "exp_integral_e1");
  if (x <= 1.0) return e1_series(x);
  return std::exp(-x) * scaled_e1_continued_fraction(x);
}

double scaled_exp_integral_e1(double x) {
  require_positive_finite(x, "scaled_exp_integral_e1");
  if (x <= 1.0) return std::exp(x) * e1_series(x);
  return scaled_e1_continued_fraction(x);
}

double tricomi_psi(int n, double z) {
  if (n < 1) throw DomainError("tricomi_psi: n must be >= 1");
  require_positive_finite(z, "tricomi_psi");
  double normalized;
  try {
    normalized = normalized_psi_integral(n, z);
  } catch (const NumericalError& quad_failure) {
    if (z > 1.0) {
      throw ConvergenceError(std::string("tricomi_psi: quadrature failed and the "
                                         "recurrence is unstable for z > 1: ") +
                             quad_failure.what());
    }
    return tricomi_psi_recurrence(n, z);
  }
  return std::exp((1.0 - n) * std::log(z)) * normalized;
}

double tricomi_psi_scaled(int n, double z) {
  if (n < 1) throw DomainError("tricomi_psi_scaled: n must be >= 1");
  require_positive_finite(z, "tricomi_psi_scaled");
  return normalized_psi_integral(n, z);
}

double tricomi_psi_recurrence(int n, double z) {
  if (n < 1) throw DomainError("tricomi_psi_recurrence: n must be >= 1");
  require_positive_finite(z, "tricomi_psi_recurrence");
  double m = scaled_exp_integral_e1(z);  // M_1
  double gamma_km1 = 1.0;                // Gamma(k - 1) for k = 2
  double z_pow = z;                      // z^(k - 1)
  for (int k = 2; k <= n; ++k) {
    m = gamma_km1 / z_pow - m;
    gamma_km1 *= (k - 1);
    z_pow *= z;
  }
  return m / std::tgamma(static_cast<double>(n));
}

double digamma_nat(int k) {
  if (k < 1) throw DomainError("digamma_nat: k must be >= 1");
  double harmonic = 0.0;
  for (int i = 1; i < k; ++i) harmonic += 1.0 / i;
  return -kEulerGamma + harmonic;
}

}  // namespace ehrelay::specfun
