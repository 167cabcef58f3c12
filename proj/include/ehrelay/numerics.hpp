#pragma once

#include <functional>

namespace ehrelay::numerics {

using ScalarFunction = std::function<double(double)>;

enum class Transform {
  none,
  // z = a + scale * t / (1 - t), t in [0, 1).
  semi_infinite_exp,
};

struct QuadSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;
  Transform transform = Transform::none;
  // Characteristic decay length of the integrand. When positive, a
  // semi-infinite integral is split at a + 50 * scale: the head is
  // integrated directly and only the tail goes through the mapping.
  double scale = 0.0;

  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
  int evaluations = 0;
};

/// Adaptive Gauss-Kronrod (10/21-point) quadrature of f over [a, b].
///
/// `b` may be +infinity, in which case `spec.transform` must be
/// `semi_infinite_exp`. On success the returned error estimate satisfies
/// error <= max(abs_tol, rel_tol * |value|). Throws ConvergenceError naming
/// the worst remaining subinterval when `max_subdivisions` is exhausted.
QuadResult quad_adaptive(const ScalarFunction& f, double a, double b,
                         const QuadSpec& spec = {});

/// Root of g inside [lo, hi] where g(lo) and g(hi) differ in sign.
/// An endpoint with g == 0 is returned as is. Throws ValidationError when
/// the bracket does not enclose a sign change.
double root_bracketed(const ScalarFunction& g, double lo, double hi,
                      double tol = 1e-14);

struct SeriesControl {
  int max_terms = 200;
  double rel_tol = 1e-10;

  void validate() const;
};

struct SeriesResult {
  double sum = 0.0;
  int terms_used = 0;
  // Magnitude of the last accumulated term.
  double tail_estimate = 0.0;
  bool converged = false;
};

/// Sums term(0) + term(1) + ... and stops once three consecutive terms are
/// below rel_tol * |partial sum|. Exhausting max_terms is not an error: the
/// partial sum is returned with converged = false.
SeriesResult series_accumulate(const std::function<double(int)>& term,
                               const SeriesControl& control = {});

/// (f(x + h) - f(x - h)) / (2h); truncation error O(h^2).
double central_diff(const ScalarFunction& f, double x, double h);

}  // namespace ehrelay::numerics
