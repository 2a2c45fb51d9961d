#include <gtest/gtest.h>

#include <boost/math/distributions/students_t.hpp>
#include <limits>

#include "labelagg/special_functions.hpp"
#include "labelagg/types.hpp"
#include "oracles/beta_series_oracle.hpp"

namespace labelagg {
namespace {

TEST(IncompleteBeta, Boundaries) {
  EXPECT_EQ(regularized_incomplete_beta(2.0, 3.0, 0.0), 0.0);
  EXPECT_EQ(regularized_incomplete_beta(2.0, 3.0, 1.0), 1.0);
  EXPECT_THROW(regularized_incomplete_beta(0.0, 1.0, 0.5), ValidationError);
  EXPECT_THROW(regularized_incomplete_beta(1.0, 1.0, 1.5), ValidationError);
}

TEST(IncompleteBeta, ClosedForms) {
  for (double a : {0.5, 1.0, 3.0, 12.5}) {
    EXPECT_NEAR(regularized_incomplete_beta(a, a, 0.5), 0.5, 1e-14);
  }
  // I_x(1, b) = 1 - (1 - x)^b and I_x(a, 1) = x^a.
  EXPECT_NEAR(regularized_incomplete_beta(1.0, 4.0, 0.3), 1.0 - std::pow(0.7, 4), 1e-14);
  EXPECT_NEAR(regularized_incomplete_beta(2.5, 1.0, 0.6), std::pow(0.6, 2.5), 1e-14);
}

TEST(IncompleteBeta, MatchesSeriesOracle) {
  const double as[] = {0.5, 1.0, 1.5, 2.0, 4.5, 9.0};
  const double xs[] = {0.02, 0.2, 0.5, 0.8, 0.97};
  for (double a : as) {
    for (double b : as) {
      for (double x : xs) {
        EXPECT_NEAR(regularized_incomplete_beta(a, b, x), oracle::beta_series(a, b, x), 1e-10)
            << "a=" << a << " b=" << b << " x=" << x;
      }
    }
  }
}

TEST(FDistribution, TabulatedCriticalValue) {
  EXPECT_NEAR(f_distribution_sf(4.414, 1, 18), 0.05, 0.0005);
}

TEST(FDistribution, EdgesAndMonotonicity) {
  EXPECT_EQ(f_distribution_sf(0.0, 1, 18), 1.0);
  EXPECT_EQ(f_distribution_sf(std::numeric_limits<double>::infinity(), 1, 18), 0.0);
  double prev = 1.0;
  for (double f = 0.1; f < 50.0; f *= 1.3) {
    const double p = f_distribution_sf(f, 2, 27);
    EXPECT_LT(p, prev);
    prev = p;
  }
}

TEST(FDistribution, AgreesWithSquaredStudentT) {
  // P(F(1, v) > t^2) = P(|T_v| > t).
  for (double v : {4.0, 18.0, 60.0}) {
    const boost::math::students_t t(v);
    for (double x : {0.3, 1.0, 2.1, 4.0}) {
      const double two_sided = 2.0 * boost::math::cdf(boost::math::complement(t, x));
      EXPECT_NEAR(f_distribution_sf(x * x, 1, v), two_sided, 1e-12);
    }
  }
}

}  // namespace
}  // namespace labelagg
