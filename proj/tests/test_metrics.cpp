#include <gtest/gtest.h>

#include <cmath>

#include "uqdesk/error.hpp"
#include "uqdesk/metrics.hpp"
#include "uqdesk/rng.hpp"

using namespace uqdesk;
using namespace uqdesk::metrics;

namespace {

PredictionSet make(std::vector<double> y, std::vector<double> mu,
                   std::vector<double> sigma) {
  PredictionSet p;
  for (std::size_t i = 0; i < y.size(); ++i) p.ids.push_back("p" + std::to_string(i));
  p.y_true = std::move(y);
  p.mu = std::move(mu);
  p.sigma = std::move(sigma);
  return p;
}

PredictionSet random_set(std::uint64_t seed, std::size_t n) {
  CounterRng r({seed, 0});
  std::vector<double> y(n), mu(n), s(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = r.uniform(-2, 2);
    mu[i] = y[i] + 0.3 * r.normal();
    s[i] = r.uniform(0.01, 1.0);
  }
  return make(y, mu, s);
}

}  // namespace

TEST(Accuracy, PerfectPredictions) {
  const auto p = make({1, 2, 3, 5}, {1, 2, 3, 5}, {1, 1, 1, 1});
  const auto a = accuracy(p);
  EXPECT_EQ(a.mae, 0.0);
  EXPECT_EQ(a.rmse, 0.0);
  EXPECT_EQ(a.mdae, 0.0);
  EXPECT_EQ(a.marpd, 0.0);
  EXPECT_DOUBLE_EQ(*a.r2, 1.0);
  EXPECT_DOUBLE_EQ(*a.pearson_r, 1.0);
}

TEST(Accuracy, HandEvaluatedMarpd) {
  const auto a = accuracy(make({1, 1}, {1, 2}, {1, 1}));
  EXPECT_DOUBLE_EQ(a.mae, 0.5);
  EXPECT_NEAR(a.marpd, 0.5 * (0.0 + 100.0 / 3.0), 1e-12);
  EXPECT_TRUE(a.constant_target);
  EXPECT_FALSE(a.r2.has_value());
}

TEST(Accuracy, ZeroDenominatorTermCountsAsZero) {
  const auto a = accuracy(make({0, 1}, {0, 2}, {1, 1}));
  EXPECT_EQ(a.marpd_zero_denominators, 1u);
  EXPECT_NEAR(a.marpd, 0.5 * 100.0 / 3.0, 1e-12);
}

TEST(Accuracy, NeedsTwoPoints) {
  EXPECT_THROW(accuracy(make({1}, {1}, {1})), Error);
}

TEST(Accuracy, MarpdBoundedAndFieldsFinite) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto a = accuracy(random_set(s, 40));
    ASSERT_GE(a.marpd, 0.0);
    ASSERT_LE(a.marpd, 200.0);
    ASSERT_TRUE(a.r2 && std::isfinite(*a.r2) && *a.r2 <= 1.0);
    ASSERT_TRUE(a.pearson_r && std::abs(*a.pearson_r) <= 1.0);
  }
  // Opposite signs: every term reaches its maximum of 100.
  EXPECT_DOUBLE_EQ(accuracy(make({1, -2}, {-1, 2}, {1, 1})).marpd, 100.0);
}

TEST(Sharpness, Definition) {
  EXPECT_DOUBLE_EQ(sharpness(make({0, 0, 0}, {0, 0, 0}, {0.7, 0.7, 0.7})), 0.7);
  EXPECT_NEAR(sharpness(make({0, 0}, {0, 0}, {3, 4})), std::sqrt(12.5), 1e-15);
  auto p = random_set(3, 100);
  const double base = sharpness(p);
  double msq = 0;
  for (double s : p.sigma) msq += s * s;
  EXPECT_NEAR(base * base, msq / 100.0, 1e-12 * base * base);
  for (auto& s : p.sigma) s *= 2.5;
  EXPECT_NEAR(sharpness(p), 2.5 * base, 1e-12 * base);
}

TEST(Dispersion, HandEvaluatedQuartiles) {
  const auto d = dispersion(make({0, 0, 0, 0}, {0, 0, 0, 0}, {1, 2, 3, 4}));
  EXPECT_DOUBLE_EQ(d.q1, 1.75);
  EXPECT_DOUBLE_EQ(d.q2, 2.5);
  EXPECT_DOUBLE_EQ(d.q3, 3.25);
  EXPECT_DOUBLE_EQ(d.iqr, 1.5);
  EXPECT_DOUBLE_EQ(d.whisker_lo, 1.75 - 2.25);
  EXPECT_DOUBLE_EQ(d.whisker_hi, 3.25 + 2.25);
  EXPECT_EQ(d.outlier_count, 0u);
  // Bessel std of {1,2,3,4} is sqrt(5/3); mean 2.5.
  EXPECT_NEAR(*d.cv, std::sqrt(5.0 / 3.0) / 2.5, 1e-15);
}

TEST(Dispersion, ConstantSigma) {
  const auto d = dispersion(make({0, 1, 2}, {0, 1, 2}, {0.4, 0.4, 0.4}));
  EXPECT_EQ(d.iqr, 0.0);
  EXPECT_EQ(*d.cv, 0.0);
  EXPECT_EQ(d.outlier_count, 0u);
}

TEST(Dispersion, ZeroMeanSigmaLeavesCvUndefined) {
  const auto d = dispersion(make({0, 1}, {0, 1}, {0, 0}));
  EXPECT_FALSE(d.cv.has_value());
}

TEST(Dispersion, OutliersAndDrawnWhiskers) {
  const auto d = dispersion(make(std::vector<double>(6, 0.0), std::vector<double>(6, 0.0),
                                 {1, 1.1, 1.2, 1.3, 1.4, 10}));
  EXPECT_EQ(d.outliers_above, 1u);
  EXPECT_EQ(d.outliers_below, 0u);
  EXPECT_DOUBLE_EQ(d.data_whisker_hi, 1.4);
  EXPECT_DOUBLE_EQ(d.data_whisker_lo, 1.0);
}

TEST(Dispersion, OrderingAndScaleInvariance) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto p = random_set(100 + s, 37);
    const auto d = dispersion(p);
    ASSERT_LE(d.q1, d.q2);
    ASSERT_LE(d.q2, d.q3);
    for (auto& v : p.sigma) v *= 7.3;
    const auto e = dispersion(p);
    ASSERT_NEAR(*e.cv, *d.cv, 1e-12 * *d.cv);
  }
}

TEST(Grouped, RequiresGroups) {
  try {
    grouped_metrics(random_set(1, 10));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingGroups);
  }
}

TEST(Grouped, SingleGroupEqualsGlobal) {
  auto p = random_set(5, 60);
  p.groups = std::vector<std::string>(60, "all");
  const auto g = grouped_metrics(p);
  ASSERT_EQ(g.size(), 1u);
  const auto& m = g.at("all");
  const auto a = accuracy(p);
  EXPECT_EQ(m.accuracy->mae, a.mae);
  EXPECT_EQ(m.accuracy->rmse, a.rmse);
  EXPECT_EQ(m.accuracy->mdae, a.mdae);
  EXPECT_EQ(m.accuracy->marpd, a.marpd);
  EXPECT_EQ(*m.accuracy->r2, *a.r2);
  EXPECT_EQ(m.sharpness, sharpness(p));
}

TEST(Grouped, SeparatesPerfectFromImperfect) {
  auto p = make({1, 2, 3, 4}, {1, 2, 3.5, 4.5}, {1, 1, 1, 1});
  p.groups = std::vector<std::string>{"Pt", "Pt", "Cu", "Cu"};
  const auto g = grouped_metrics(p);
  EXPECT_EQ(g.at("Pt").mae, 0.0);
  EXPECT_GT(g.at("Cu").mae, 0.0);
}

TEST(Grouped, PooledMaeIsWeightedMeanOfGroups) {
  auto p = random_set(9, 200);
  CounterRng r({9, 1});
  p.groups.emplace();
  for (std::size_t i = 0; i < 200; ++i) p.groups->push_back("t" + std::to_string(r.below(5)));
  // Singleton group exercises the n < 2 path.
  (*p.groups)[0] = "solo";
  const auto g = grouped_metrics(p);
  EXPECT_FALSE(g.at("solo").accuracy.has_value());
  double weighted = 0;
  for (const auto& [tag, m] : g) weighted += m.mae * static_cast<double>(m.n);
  EXPECT_NEAR(weighted / 200.0, accuracy(p).mae, 1e-12);
}

TEST(DistributionSummary, ShapeModeAndDegenerate) {
  CounterRng r({21, 0});
  std::vector<double> v(5000);
  for (auto& x : v) x = 1.0 + 0.5 * r.normal();
  const auto grid = default_kde_grid(v, 301);
  const auto s = distribution_summary(v, grid);
  EXPECT_EQ(s.density.size(), grid.size());
  std::size_t mode = 0;
  for (std::size_t i = 1; i < s.density.size(); ++i) {
    if (s.density[i] > s.density[mode]) mode = i;
  }
  EXPECT_NEAR(grid[mode], s.box.q2, 0.1);

  const std::vector<double> same(5, 2.0);
  EXPECT_EQ(box_stats(same).q1, box_stats(same).q3);
  EXPECT_THROW(distribution_summary(same, grid), Error);
}
