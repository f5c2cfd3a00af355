#include <gtest/gtest.h>

#include <boost/math/special_functions/owens_t.hpp>
#include <cmath>
#include <random>

#include "hv/errors.hpp"
#include "hv/numerics.hpp"

namespace {

TEST(OwensT, MatchesBoostAcrossRegimes) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> h_dist(-8.0, 8.0);
  std::uniform_real_distribution<double> a_dist(-30.0, 30.0);
  for (int i = 0; i < 2000; ++i) {
    const double h = h_dist(rng);
    const double a = a_dist(rng);
    EXPECT_NEAR(hv::owens_t(h, a), boost::math::owens_t(h, a), 1e-13) << h << " " << a;
  }
}

TEST(OwensT, SpecialValues) {
  EXPECT_EQ(hv::owens_t(1.3, 0.0), 0.0);
  // T(0, a) = atan(a) / (2 pi)
  for (double a : {0.25, 1.0, 4.0, 100.0})
    EXPECT_NEAR(hv::owens_t(0.0, a), std::atan(a) / (2.0 * M_PI), 1e-15);
  // T(h, 1) = Phi(h)(1 - Phi(h)) / 2
  for (double h : {-2.0, 0.3, 1.7})
    EXPECT_NEAR(hv::owens_t(h, 1.0), 0.5 * hv::normal_cdf(h) * hv::normal_sf(h), 1e-15);
  // T(h, inf) = (1 - Phi(|h|)) / 2 for h != 0
  EXPECT_NEAR(hv::owens_t(0.8, hv::kInf), 0.5 * hv::normal_sf(0.8), 1e-15);
}

TEST(OwensT, Symmetries) {
  EXPECT_DOUBLE_EQ(hv::owens_t(-1.2, 3.0), hv::owens_t(1.2, 3.0));
  EXPECT_DOUBLE_EQ(hv::owens_t(1.2, -3.0), -hv::owens_t(1.2, 3.0));
}

TEST(Integrate, PolynomialsAndOscillation) {
  EXPECT_NEAR(hv::integrate([](double x) { return x * x * x; }, 0.0, 2.0), 4.0, 1e-13);
  EXPECT_NEAR(hv::integrate([](double x) { return std::sin(x); }, 0.0, M_PI), 2.0, 1e-12);
  EXPECT_NEAR(hv::integrate([](double x) { return std::exp(x); }, 1.0, 0.0), -(M_E - 1.0), 1e-12);
  EXPECT_THROW(hv::integrate([](double) { return 1.0; }, 0.0, hv::kInf), hv::DomainError);
}

TEST(SolveMonotone, IsolatedRoot) {
  const auto f = [](double x) { return hv::SlopedValue{x * x * x - 2.0, 3.0 * x * x}; };
  const auto z = hv::solve_monotone(f, 0.0, 4.0, 1e-12, 1e-15);
  EXPECT_NEAR(z.lo, std::cbrt(2.0), 1e-11);
  EXPECT_NEAR(z.hi, std::cbrt(2.0), 1e-11);
}

TEST(SolveMonotone, PlateauEdges) {
  // Zero exactly on [1, 3].
  const auto f = [](double x) {
    if (x < 1.0) return hv::SlopedValue{x - 1.0, 1.0};
    if (x > 3.0) return hv::SlopedValue{2.0 * (x - 3.0), 2.0};
    return hv::SlopedValue{0.0, 0.0};
  };
  const auto z = hv::solve_monotone(f, -10.0, 10.0, 1e-10, 1e-14);
  EXPECT_NEAR(z.lo, 1.0, 1e-10);
  EXPECT_NEAR(z.hi, 3.0, 1e-10);
}

TEST(SolveMonotone, NoSlopeFallsBackToBisection) {
  const auto f = [](double x) { return hv::SlopedValue{std::tanh(x - 0.25)}; };
  const auto z = hv::solve_monotone(f, -5.0, 5.0, 1e-12, 0.0);
  EXPECT_NEAR(0.5 * (z.lo + z.hi), 0.25, 1e-12);
}

TEST(BracketMonotone, ExpandsFromSeed) {
  const auto f = [](double x) { return x - 100.0; };
  const auto b = hv::bracket_monotone(f, -hv::kInf, hv::kInf, 0.0, 1.0, 0.0);
  EXPECT_LT(f(b.lo), 0.0);
  EXPECT_GT(f(b.hi), 0.0);
  EXPECT_THROW(hv::bracket_monotone([](double) { return 1.0; }, -hv::kInf, 0.0, 0.0, 1.0, 0.0),
               hv::NumericError);
}

}  // namespace
