#include <gtest/gtest.h>

#include <cmath>

#include "uqdesk/calibration.hpp"
#include "uqdesk/error.hpp"
#include "uqdesk/rng.hpp"

using namespace uqdesk;
using namespace uqdesk::calibration;

namespace {

// y ~ Normal(mu, sigma^2) with the reported sigma: calibrated by construction.
PredictionSet gaussian_null(std::size_t n, std::uint64_t seed) {
  CounterRng r({seed, 77});
  PredictionSet p;
  for (std::size_t i = 0; i < n; ++i) {
    const double mu = r.uniform(-1, 1);
    const double s = r.uniform(0.05, 0.5);
    p.ids.push_back(std::to_string(i));
    p.mu.push_back(mu);
    p.sigma.push_back(s);
    p.y_true.push_back(mu + s * r.normal());
  }
  return p;
}

}  // namespace

TEST(Residuals, Examples) {
  PredictionSet p{{"a", "b", "c"}, {1, 2, 1}, {1, 1.5, 0}, {0.3, 0.5, 0.5}, {}};
  const auto z = normalized_residuals(p);
  EXPECT_EQ(z[0], 0.0);
  EXPECT_EQ(z[1], 1.0);
  EXPECT_EQ(z[2], 2.0);
  p.sigma[0] = 0.0;
  EXPECT_TRUE(std::isinf(normalized_residuals(p)[0]));
}

TEST(Area, ClosedFormCases) {
  const std::vector<double> g{0.25, 0.5, 0.75};
  EXPECT_EQ(miscalibration_area(g, g), 0.0);
  const std::vector<double> x{0.0, 0.5, 1.0}, y{0.0, 0.25, 1.0};
  EXPECT_DOUBLE_EQ(miscalibration_area(x, y), 0.125);
  // Implicit endpoints give the same answer for the interior point alone.
  EXPECT_DOUBLE_EQ(miscalibration_area(std::vector<double>{0.5}, std::vector<double>{0.25}),
                   0.125);
}

TEST(Area, ObservedZeroApproachesHalf) {
  double prev = 0.0;
  for (std::size_t m : {9, 99, 999, 9999}) {
    std::vector<double> e(m), o(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) e[j] = (j + 1.0) / (m + 1.0);
    const double a = miscalibration_area(e, o);
    EXPECT_GT(a, prev);
    EXPECT_LE(a, 0.5);
    prev = a;
  }
  EXPECT_NEAR(prev, 0.5, 1e-4);
}

TEST(Curve, GaussianNullIsNearDiagonal) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto c = calibration_curve(gaussian_null(100000, seed));
    EXPECT_EQ(c.expected.size(), 99u);
    EXPECT_LT(c.miscalibration_area, 0.01);
    for (std::size_t j = 0; j < c.expected.size(); ++j) {
      ASSERT_NEAR(c.observed[j], c.expected[j], 0.01);
    }
  }
}

TEST(Curve, OverconfidentSigmaFallsBelowDiagonal) {
  auto p = gaussian_null(100000, 4);
  for (auto& s : p.sigma) s /= 10.0;
  const auto c = calibration_curve(p);
  EXPECT_GE(c.miscalibration_area, 0.2);
  for (std::size_t j = 0; j < c.expected.size(); ++j) {
    if (c.expected[j] > 0.55) ASSERT_LT(c.observed[j], c.expected[j]);
  }
}

TEST(Curve, ZeroSigmaExcludedAndCounted) {
  auto p = gaussian_null(1000, 5);
  p.sigma[3] = 0.0;
  p.sigma[10] = 0.0;
  const auto c = calibration_curve(p);
  EXPECT_EQ(c.n_excluded_zero_sigma, 2u);
  EXPECT_EQ(c.n_used, 998u);
  for (auto& s : p.sigma) s = 0.0;
  try {
    calibration_curve(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AllSigmaZero);
  }
}

TEST(Curve, PropertyMonotoneAndBounded) {
  CounterRng r({6, 0});
  for (int t = 0; t < 100; ++t) {
    PredictionSet p;
    const auto n = 2 + r.below(200);
    const double scale = std::exp(r.uniform(-4, 4));
    for (std::size_t i = 0; i < n; ++i) {
      p.ids.push_back(std::to_string(i));
      p.mu.push_back(r.uniform(-1, 1));
      p.y_true.push_back(r.uniform(-1, 1));
      p.sigma.push_back(scale * r.uniform(0.01, 1));
    }
    const auto c = calibration_curve(p, 1 + r.below(150));
    ASSERT_GE(c.miscalibration_area, 0.0);
    ASSERT_LE(c.miscalibration_area, 0.5);
    for (std::size_t j = 1; j < c.observed.size(); ++j) {
      ASSERT_LT(c.expected[j - 1], c.expected[j]);
      ASSERT_LE(c.observed[j - 1], c.observed[j]);
    }
  }
}

TEST(Adversarial, FullFractionEqualsGlobalArea) {
  const auto p = gaussian_null(2000, 7);
  const std::vector<double> f{1.0};
  const auto a = adversarial_group_calibration(p, f, {1, 1}, 20, 10);
  EXPECT_NEAR(a.mean_worst_area[0], calibration_curve(p).miscalibration_area, 1e-12);
  EXPECT_EQ(a.std_error[0], 0.0);
  EXPECT_EQ(a.group_sizes[0], 2000u);
}

TEST(Adversarial, SmallGroupsAreWorse) {
  const auto p = gaussian_null(20000, 8);
  const std::vector<double> f{0.005, 0.01, 0.02, 0.05, 0.2};
  const auto a = adversarial_group_calibration(p, f, {2, 0});
  for (std::size_t j = 1; j < f.size(); ++j) {
    EXPECT_LT(a.mean_worst_area[j], a.mean_worst_area[j - 1]) << f[j];
  }
  for (double v : a.mean_worst_area) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 0.5);
  }
}

TEST(Adversarial, DeterministicAndSeedSensitive) {
  const auto p = gaussian_null(3000, 9);
  const std::vector<double> f{0.01, 0.1};
  const auto a = adversarial_group_calibration(p, f, {3, 0}, 30, 10);
  const auto b = adversarial_group_calibration(p, f, {3, 0}, 30, 10);
  const auto c = adversarial_group_calibration(p, f, {4, 0}, 30, 10);
  EXPECT_EQ(a.mean_worst_area, b.mean_worst_area);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_NE(a.mean_worst_area, c.mean_worst_area);
}

TEST(Adversarial, FractionTooSmall) {
  const auto p = gaussian_null(100, 10);
  const std::vector<double> f{0.5, 0.01};
  try {
    adversarial_group_calibration(p, f, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FractionTooSmall);
    EXPECT_EQ(e.index(), 1u);
  }
}
