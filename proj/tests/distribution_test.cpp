#include <gtest/gtest.h>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/skew_normal.hpp>
#include <cmath>
#include <random>

#include "hv/distribution.hpp"
#include "hv/errors.hpp"
#include "oracles.hpp"

namespace {

using hv::Distribution;

TEST(Empirical, CdfStepsAndLeftLimits) {
  const auto d = Distribution::empirical({3.0, 1.0, 3.0, 2.0});
  EXPECT_DOUBLE_EQ(d.cdf(0.5), 0.0);
  EXPECT_DOUBLE_EQ(d.cdf(1.0), 0.25);
  EXPECT_DOUBLE_EQ(d.cdf_left(1.0), 0.0);
  EXPECT_DOUBLE_EQ(d.cdf(2.5), 0.5);
  EXPECT_DOUBLE_EQ(d.cdf(3.0), 1.0);
  EXPECT_DOUBLE_EQ(d.cdf_left(3.0), 0.5);
  EXPECT_TRUE(std::isnan(d.pdf(1.0)));
  EXPECT_DOUBLE_EQ(d.mean(), 2.25);
}

TEST(Empirical, PartialsAgreeWithDirectSums) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z;
  std::vector<double> xs(40);
  for (double& x : xs) x = z(rng);
  const auto d = Distribution::empirical(xs);
  for (double t = -3.0; t <= 3.0; t += 0.37) {
    double lower = 0.0;
    double upper = 0.0;
    for (double x : xs) {
      lower += std::max(t - x, 0.0);
      upper += std::max(x - t, 0.0);
    }
    EXPECT_NEAR(d.lower_partial(t), lower / 40.0, 1e-13);
    EXPECT_NEAR(d.upper_partial(t), upper / 40.0, 1e-13);
    EXPECT_NEAR(d.cdf_integral(t, t + 0.8), (d.lower_partial(t + 0.8) - d.lower_partial(t)), 1e-13);
  }
}

TEST(Empirical, WeightsAreNormalised) {
  const auto d = Distribution::empirical({0.0, 1.0}, {1.0, 3.0});
  EXPECT_DOUBLE_EQ(d.cdf(0.0), 0.25);
  EXPECT_DOUBLE_EQ(d.mean(), 0.75);
  EXPECT_THROW(Distribution::empirical({0.0, 1.0}, {1.0, -1.0}), hv::ArgumentError);
  EXPECT_THROW(Distribution::empirical({}), hv::ArgumentError);
}

TEST(PiecewiseLinear, IntegralsMatchSimpson) {
  const auto d = Distribution::piecewise_linear({0.0, 1.0, 3.0}, {0.0, 0.5, 1.0});
  const auto F = [](double t) {
    if (t <= 0.0) return 0.0;
    if (t <= 1.0) return 0.5 * t;
    if (t <= 3.0) return 0.5 + 0.25 * (t - 1.0);
    return 1.0;
  };
  EXPECT_NEAR(d.cdf_integral(-1.0, 4.0), oracle::simpson(F, -1.0, 4.0), 1e-9);
  EXPECT_NEAR(d.complement_integral(0.5, 2.0),
              oracle::simpson([&](double t) { return 1.0 - F(t); }, 0.5, 2.0), 1e-9);
  EXPECT_NEAR(d.mean(), oracle::simpson([&](double t) { return 1.0 - F(t); }, 0.0, 3.0), 1e-9);
  EXPECT_THROW(Distribution::piecewise_linear({0.0, 1.0}, {0.0, 0.9}), hv::ArgumentError);
  EXPECT_THROW(Distribution::piecewise_linear({1.0, 0.0}, {0.0, 1.0}), hv::ArgumentError);
}

TEST(SkewNormal, CdfPdfAndMeanMatchBoost) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> shape(-25.0, 25.0);
  for (int i = 0; i < 50; ++i) {
    const double nu = shape(rng);
    const auto d = Distribution::skew_normal(19.0, 2.3, nu);
    boost::math::skew_normal_distribution<double> ref(19.0, 2.3, nu);
    for (double t = 12.0; t <= 26.0; t += 0.9) {
      EXPECT_NEAR(d.cdf(t), boost::math::cdf(ref, t), 1e-12);
      EXPECT_NEAR(d.pdf(t), boost::math::pdf(ref, t), 1e-12);
    }
    EXPECT_NEAR(d.mean(), boost::math::mean(ref), 1e-12);
  }
  EXPECT_NEAR(Distribution::skew_normal(19.0, 6.0, 20.0).mean(), 23.7813344275383, 1e-12);
}

TEST(SkewNormal, PartialsMatchQuadratureOfCdf) {
  const auto d = Distribution::skew_normal(1.0, 1.5, -4.0);
  boost::math::skew_normal_distribution<double> ref(1.0, 1.5, -4.0);
  const auto F = [&](double t) { return boost::math::cdf(ref, t); };
  for (double x : {-3.0, -1.0, 0.0, 0.7, 2.0}) {
    EXPECT_NEAR(d.lower_partial(x), oracle::simpson(F, -15.0, x), 1e-9);
    const auto point = d.lower_partial_point(x);
    EXPECT_NEAR(point.cdf, F(x), 1e-13);
    EXPECT_NEAR(point.lower, d.lower_partial(x), 1e-13);
    EXPECT_NEAR(d.upper_partial(x) - d.lower_partial(x), d.mean() - x, 1e-12);
  }
}

TEST(Normal, ClosedForms) {
  const auto d = Distribution::normal(2.0, 0.5);
  EXPECT_NEAR(d.cdf(2.0), 0.5, 1e-16);
  // E(x - Y)+ at the mean is sd / sqrt(2 pi).
  EXPECT_NEAR(d.lower_partial(2.0), 0.5 / std::sqrt(2.0 * M_PI), 1e-15);
  EXPECT_THROW(Distribution::normal(0.0, 0.0), hv::ArgumentError);
}

TEST(Exponential, ClosedForms) {
  const auto d = Distribution::exponential(2.0);
  EXPECT_NEAR(d.cdf(1.0), 1.0 - std::exp(-2.0), 1e-15);
  EXPECT_NEAR(d.upper_partial(1.0), std::exp(-2.0) / 2.0, 1e-15);
  EXPECT_NEAR(d.upper_partial(-1.0), 1.5, 1e-15);
  EXPECT_DOUBLE_EQ(d.support().lo, 0.0);
}

TEST(BetaDist, MatchesBoost) {
  const auto d = Distribution::beta(1.5, 2.5);
  boost::math::beta_distribution<double> ref(1.5, 2.5);
  for (double t = 0.05; t < 1.0; t += 0.1) EXPECT_NEAR(d.cdf(t), boost::math::cdf(ref, t), 1e-14);
  EXPECT_NEAR(d.mean(), 1.5 / 4.0, 1e-15);
  EXPECT_NEAR(d.lower_partial(0.6),
              oracle::simpson([&](double t) { return boost::math::cdf(ref, t); }, 0.0, 0.6), 1e-10);
}

TEST(Contaminated, CdfAgreesWithConvolution) {
  const auto base = Distribution::normal(0.0, 1.0);
  const double p = 0.05;
  const double scale = 5.0;
  const double rate = 0.8;
  const auto d = Distribution::contaminated(base, p, scale, rate);
  const auto conv = [&](double t) {
    // P(Y + scale V <= t) with V ~ Exp(rate).
    const auto integrand = [&](double v) {
      return 0.5 * std::erfc(-(t - scale * v) / std::sqrt(2.0)) * rate * std::exp(-rate * v);
    };
    return oracle::simpson(integrand, 0.0, 60.0, 60000);
  };
  for (double t : {-2.0, 0.0, 1.5, 4.0, 9.0}) {
    const double expected = (1.0 - p) * 0.5 * std::erfc(-t / std::sqrt(2.0)) + p * conv(t);
    EXPECT_NEAR(d.cdf(t), expected, 1e-9) << t;
  }
  EXPECT_NEAR(d.mean(), p * scale / rate, 1e-12);
}

TEST(Contaminated, EmpiricalBaseIsExact) {
  const auto base = Distribution::empirical({0.0, 2.0});
  const auto d = Distribution::contaminated(base, 0.5, 1.0, 1.0, 1.0);
  // Half the mass at {0, 2}; half shifted by 1 + Exp(1).
  const double t = 2.5;
  const double spike = 0.5 * ((1.0 - std::exp(-1.5)) + (0.0));
  EXPECT_NEAR(d.cdf(t), 0.5 * 1.0 + 0.5 * spike, 1e-14);
  EXPECT_NEAR(d.mean(), 1.0 + 0.5 * 2.0, 1e-14);
}

TEST(Sampling, MomentsAndDeterminism) {
  hv::Rng a(9);
  hv::Rng b(9);
  const auto d = Distribution::skew_normal(19.0, 6.0, 20.0);
  const auto xs = d.sample(a, 200000);
  EXPECT_EQ(xs, d.sample(b, 200000));
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= xs.size();
  EXPECT_NEAR(mean, d.mean(), 0.05);
  EXPECT_THROW(d.sample(a, 0), hv::ArgumentError);
}

TEST(Sampling, EmpiricalFrequencies) {
  hv::Rng rng(1);
  const auto d = Distribution::empirical({1.0, 2.0}, {1.0, 3.0});
  int ones = 0;
  for (int i = 0; i < 100000; ++i) ones += d.draw(rng) == 1.0;
  EXPECT_NEAR(ones / 1e5, 0.25, 0.01);
}

TEST(Inputs, NonFiniteArgumentsRejected) {
  const auto d = Distribution::normal(0.0, 1.0);
  EXPECT_THROW(d.cdf(NAN), hv::DomainError);
  EXPECT_THROW(d.cdf_integral(1.0, 0.0), hv::ArgumentError);
}

}  // namespace
