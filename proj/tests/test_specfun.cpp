#include <gtest/gtest.h>

#include <cmath>

#include <boost/math/special_functions/digamma.hpp>

#include "ehrelay/errors.hpp"
#include "ehrelay/specfun.hpp"
#include "oracles.hpp"

using namespace ehrelay;
using namespace ehrelay::specfun;

TEST(BesselK1, MatchesIntegralRepresentationAtOne) {
  EXPECT_NEAR(oracle::k1_integral(1.0), 0.601907, 1e-6);
  EXPECT_NEAR(bessel_k1(1.0), 0.601907, 1e-5);
  EXPECT_NEAR(bessel_k1(1.0), oracle::k1_integral(1.0), 1e-12);
}

TEST(BesselK1, SmallArgumentLimit) {
  EXPECT_NEAR(x_bessel_k1(1e-8), 1.0, 1e-6);
  EXPECT_EQ(x_bessel_k1(0.0), 1.0);
}

TEST(BesselK1, AgreesWithReferencesAcrossTheSeam) {
  for (double x : {1e-6, 1e-3, 0.1, 0.5, 1.0, 1.5, 1.9, 1.999, 2.0, 2.001, 2.5, 5.0, 10.0, 30.0,
                   50.0, 200.0}) {
    SCOPED_TRACE(x);
    const double ref = oracle::k1_boost(x);
    EXPECT_NEAR(bessel_k1(x) / ref, 1.0, 1e-12);
    if (x <= 50.0) {
      EXPECT_NEAR(bessel_k1(x) / oracle::k1_integral(x), 1.0, 1e-10);
    }
  }
}

TEST(BesselK1, SandwichOnDenseGrid) {
  for (int i = 1; i <= 10000; ++i) {
    const double x = 50.0 * i / 10000.0;
    const double xk = x * bessel_k1(x);
    ASSERT_LE(std::exp(-x), xk) << x;
    ASSERT_LE(xk, 1.0) << x;
  }
}

TEST(BesselK1, RejectsInvalidArguments) {
  EXPECT_THROW(bessel_k1(0.0), DomainError);
  EXPECT_THROW(bessel_k1(-1.0), DomainError);
  EXPECT_THROW(bessel_k1(NAN), DomainError);
  EXPECT_THROW(bessel_k1(INFINITY), DomainError);
}

TEST(ExpIntegralE1, ValueAtOne) {
  EXPECT_NEAR(oracle::e1_integral(1.0), 0.2193839, 1e-7);
  EXPECT_NEAR(exp_integral_e1(1.0), 0.2193839, 1e-6);
  EXPECT_NEAR(exp_integral_e1(1.0), boost::math::expint(1, 1.0), 1e-15);
}

TEST(ExpIntegralE1, MatchesBoostAndDecreases) {
  double previous = INFINITY;
  for (double x : {1e-3, 0.01, 0.3, 0.999, 1.0, 1.001, 3.0, 10.0, 20.0, 40.0, 300.0}) {
    SCOPED_TRACE(x);
    const double e1 = exp_integral_e1(x);
    EXPECT_NEAR(e1 / boost::math::expint(1, x), 1.0, 1e-13);
    EXPECT_GT(e1, 0.0);
    EXPECT_LT(e1, previous);
    previous = e1;
  }
}

TEST(ExpIntegralE1, LogarithmicSandwich) {
  // e^-x ln(1 + 1/x) is the upper side of the classical pair; the lower side
  // carries 1/2 and 2/x.
  for (int i = 1; i <= 500; ++i) {
    const double x = 50.0 * i / 500.0;
    const double e1 = exp_integral_e1(x);
    EXPECT_LT(0.5 * std::exp(-x) * std::log1p(2.0 / x), e1) << x;
    EXPECT_LT(e1, std::exp(-x) * std::log1p(1.0 / x)) << x;
    EXPECT_LT(e1, std::log1p(1.0 / x)) << x;
  }
}

TEST(ExpIntegralE1, ScaledFormConsistent) {
  for (double x : {0.01, 0.5, 1.0, 2.0, 50.0}) {
    EXPECT_NEAR(scaled_exp_integral_e1(x), std::exp(x) * exp_integral_e1(x),
                1e-13 * scaled_exp_integral_e1(x));
  }
  EXPECT_NEAR(scaled_exp_integral_e1(1e4) * 1e4, 1.0, 1e-3);
  EXPECT_THROW(exp_integral_e1(0.0), DomainError);
}

TEST(TricomiPsi, UnitArgument) {
  EXPECT_NEAR(oracle::gamma_psi_integral(1, 1.0), 0.596347, 1e-6);
  EXPECT_NEAR(tricomi_psi(1, 1.0), 0.596347, 1e-5);
}

TEST(TricomiPsi, LargeArgumentAsymptotic) {
  EXPECT_NEAR(tricomi_psi(1, 100.0) * 100.0, 1.0, 0.05);
  for (int n : {1, 2, 5}) EXPECT_GT(tricomi_psi(n, 100.0), 0.0);
}

TEST(TricomiPsi, SecondOrderAtHalf) {
  EXPECT_NEAR(tricomi_psi(2, 0.5), oracle::gamma_psi_integral(2, 0.5), 1e-5);
}

TEST(TricomiPsi, FirstOrderEqualsScaledE1) {
  for (int i = 0; i <= 40; ++i) {
    const double z = 1e-3 * std::pow(5e4, i / 40.0);
    SCOPED_TRACE(z);
    EXPECT_NEAR(tricomi_psi(1, z) / scaled_exp_integral_e1(z), 1.0, 1e-8);
  }
}

TEST(TricomiPsi, DefiningIntegralIdentity) {
  for (int l = 0; l <= 8; ++l) {
    for (double s : {0.01, 0.1, 1.0, 10.0}) {
      SCOPED_TRACE(::testing::Message() << "l=" << l << " s=" << s);
      const double lhs = std::tgamma(l + 2.0) * tricomi_psi(l + 2, s);
      EXPECT_NEAR(lhs / oracle::gamma_psi_integral(l + 2, s), 1.0, 1e-5);
    }
  }
}

TEST(TricomiPsi, ScaledFormAndRecurrenceAgree) {
  for (int n : {1, 2, 3, 6}) {
    for (double z : {0.01, 0.2, 1.0}) {
      SCOPED_TRACE(::testing::Message() << "n=" << n << " z=" << z);
      const double psi = tricomi_psi(n, z);
      EXPECT_NEAR(tricomi_psi_recurrence(n, z) / psi, 1.0, 1e-9);
      EXPECT_NEAR(tricomi_psi_scaled(n, z) / (std::pow(z, n - 1) * psi), 1.0, 1e-12);
    }
  }
}

TEST(TricomiPsi, DecreasingInArgument) {
  for (int n : {1, 2, 4}) {
    double previous = INFINITY;
    for (double z : {0.01, 0.1, 0.5, 1.0, 5.0, 20.0}) {
      const double v = tricomi_psi(n, z);
      EXPECT_GT(v, 0.0);
      EXPECT_LT(v, previous);
      previous = v;
    }
  }
}

TEST(TricomiPsi, RejectsInvalidArguments) {
  EXPECT_THROW(tricomi_psi(0, 1.0), DomainError);
  EXPECT_THROW(tricomi_psi(1, 0.0), DomainError);
  EXPECT_THROW(tricomi_psi(1, -2.0), DomainError);
}

TEST(Digamma, IntegerValues) {
  EXPECT_NEAR(digamma_nat(1), -0.5772, 1e-4);
  EXPECT_NEAR(digamma_nat(1), -0.57721566490153286, 1e-15);
  EXPECT_NEAR(digamma_nat(2), 0.42278, 1e-5);
  EXPECT_NEAR(digamma_nat(5), 1.50612, 1e-5);
  for (int k = 1; k <= 60; ++k) {
    EXPECT_NEAR(digamma_nat(k), boost::math::digamma(static_cast<double>(k)), 1e-13);
  }
  EXPECT_THROW(digamma_nat(0), DomainError);
}

TEST(Digamma, Recurrence) {
  for (int k = 1; k <= 100; ++k) {
    EXPECT_NEAR(digamma_nat(k + 1) - digamma_nat(k), 1.0 / k, 1e-14);
  }
}

TEST(EulerConstant, FifteenDigits) {
  EXPECT_NEAR(kEulerGamma, 0.577215664901532, 1e-15);
}
