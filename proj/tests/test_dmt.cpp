#include <gtest/gtest.h>

#include <cmath>

#include "ehrelay/analytic.hpp"
#include "ehrelay/errors.hpp"
#include "ehrelay/numerics.hpp"

using namespace ehrelay;
using namespace ehrelay::analytic;

namespace {

SystemParams defaults(double lambda = 0.75, double d1 = 0.5) {
  return model::build_params(1, 1, 1, 1, lambda, 0.5, d1, 3);
}

double threshold_ratio(double r, double gamma) { return std::expm1(r * std::log1p(gamma)) / gamma; }

// Lower bound from the general (asymmetric-capable) evaluator at P = gamma.
double general_lower(double r, double gamma, const SystemParams& base) {
  auto p = base;
  p.p1 = p.p2 = gamma;
  p.sigma2 = 1.0;
  return outage_bounds(p, TargetRates::from_multiplexing_gain(r, gamma)).lower;
}

double db(double v) { return std::pow(10.0, v / 10.0); }

}  // namespace

TEST(DmtCoefficients, MatchFiniteDifferences) {
  const auto k = model::derived_coeffs(defaults());
  for (double r : {0.25, 0.5, 0.75, 1.5}) {
    for (double gamma : {db(5), db(10), 100.0, db(30)}) {
      SCOPED_TRACE(::testing::Message() << "r=" << r << " gamma=" << gamma);
      const double h = 1e-4 * gamma;
      const auto c = dmt_coefficients(r, gamma, k);
      const double fd_a =
          numerics::central_diff([&](double g) { return x0_symmetric(r, g, k); }, gamma, h);
      const double fd_b =
          numerics::central_diff([&](double g) { return threshold_ratio(r, g); }, gamma, h);
      EXPECT_NEAR(c.dx0_dgamma / fd_a, 1.0, 1e-4);
      EXPECT_NEAR(c.dthreshold_dgamma / fd_b, 1.0, 1e-4);
    }
  }
}

TEST(DmtCoefficients, ThresholdSlopeVanishesAtUnitGain) {
  const auto k = model::derived_coeffs(defaults());
  for (double gamma : {1.0, 100.0, 1e4}) {
    EXPECT_NEAR(dmt_coefficients(1.0, gamma, k).dthreshold_dgamma, 0.0, 1e-15);
  }
}

TEST(X0Symmetric, VanishesAtHighSnrBelowUnitGain) {
  const auto k = model::derived_coeffs(defaults());
  EXPECT_LT(x0_symmetric(0.5, 1e16, k), 1e-3);
  EXPECT_LT(x0_symmetric(0.5, 1e16, k), x0_symmetric(0.5, 1e8, k));
}

TEST(X0Symmetric, RejectsNonPositiveGain) {
  const auto k = model::derived_coeffs(defaults());
  EXPECT_THROW(x0_symmetric(0.0, 100.0, k), DomainError);
  EXPECT_THROW(x0_symmetric(-0.5, 100.0, k), DomainError);
}

TEST(OutageLowerSymmetric, EqualsGeneralLowerBound) {
  const auto base = defaults();
  for (double r : {0.25, 0.5, 1.0}) {
    for (double gamma : {db(5), db(20)}) {
      EXPECT_NEAR(outage_lower_symmetric(r, gamma, base), general_lower(r, gamma, base), 1e-12);
    }
  }
}

TEST(Dmt, MatchesLogDerivativeOfLowerBound) {
  for (double lambda : {0.25, 0.75}) {
    const auto base = defaults(lambda);
    for (double r : {0.25, 0.5, 0.75}) {
      for (double g_db : {10.0, 15.0, 20.0}) {
        SCOPED_TRACE(::testing::Message() << "lambda=" << lambda << " r=" << r << " dB=" << g_db);
        const double gamma = db(g_db);
        const double fd =
            -gamma *
            numerics::central_diff([&](double g) { return std::log(general_lower(r, g, base)); },
                                   gamma, 1e-4 * gamma);
        EXPECT_NEAR(dmt(r, gamma, base) / fd, 1.0, 1e-3);
      }
    }
  }
}

TEST(Dmt, IncreasesWithSnr) {
  const auto base = defaults();
  double previous = -INFINITY;
  for (double g_db : {5.0, 10.0, 15.0, 20.0}) {
    const double d = dmt(0.5, db(g_db), base);
    EXPECT_GT(d, previous) << g_db;
    previous = d;
  }
}

TEST(Dmt, DecreasesWithMultiplexingGain) {
  const auto base = defaults();
  double previous = INFINITY;
  for (double r : {0.25, 0.5, 0.75, 1.0}) {
    const double d = dmt(r, db(20), base);
    EXPECT_LT(d, previous) << r;
    EXPECT_GE(d, 0.0);
    previous = d;
  }
}

TEST(Dmt, RelayPositionMovesTheBestSplit) {
  const auto best = [](double d1) {
    double best_lambda = 0.0;
    double best_d = -INFINITY;
    for (int i = 1; i <= 19; ++i) {
      const double lambda = 0.05 * i;
      const double d = dmt(0.5, 100.0, defaults(lambda, d1));
      if (d > best_d) {
        best_d = d;
        best_lambda = lambda;
      }
    }
    return best_lambda;
  };
  EXPECT_LE(best(0.1), 0.2 + 1e-12);
  EXPECT_GE(best(0.5), 0.4 - 1e-12);
  EXPECT_LE(best(0.5), 0.6 + 1e-12);
}

TEST(Dmt, DomainErrors) {
  EXPECT_THROW(dmt(0.0, 100.0, defaults()), DomainError);
  EXPECT_THROW(dmt(0.5, 0.0, defaults()), DomainError);
}
