#include <gtest/gtest.h>

#include <cmath>

#include "uqdesk/numerics.hpp"
#include "uqdesk/rng.hpp"
#include "uqdesk/scoring.hpp"

using namespace uqdesk;
using namespace uqdesk::scoring;

namespace {

PredictionSet single(double y, double mu, double sigma) {
  return {{"a"}, {y}, {mu}, {sigma}, {}};
}

}  // namespace

TEST(IntervalScore, PureWidthAtFiftyPercent) {
  const std::vector<double> grid{0.5};
  const auto r = interval_score(single(0.0, 0.0, 1.0), grid);
  // 2 * Phi^-1(0.75), Phi^-1(0.75) frozen from the bisection oracle.
  EXPECT_NEAR(r.mean_score, 2.0 * 0.6744897501960817, 1e-12);
}

TEST(IntervalScore, DefaultGrid) {
  const auto g = default_coverage_grid();
  ASSERT_EQ(g.size(), 99u);
  EXPECT_DOUBLE_EQ(g.front(), 0.01);
  EXPECT_DOUBLE_EQ(g.back(), 0.99);
}

TEST(IntervalScore, HomogeneousInSigmaWithoutPenalties) {
  PredictionSet p{{"a", "b"}, {1.0, -2.0}, {1.0, -2.0}, {0.3, 0.8}, {}};
  const auto base = interval_score(p);
  for (auto& s : p.sigma) s *= 3.0;
  const auto scaled = interval_score(p);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR(scaled.per_point_scores[i], 3.0 * base.per_point_scores[i], 1e-12);
  }
}

TEST(IntervalScore, ZeroSigmaUsesPenaltyOnly) {
  const auto exact = interval_score(single(1.0, 1.0, 0.0));
  EXPECT_EQ(exact.mean_score, 0.0);
  const auto miss = interval_score(single(1.5, 1.0, 0.0));
  double expect = 0.0;
  for (double c : default_coverage_grid()) expect += 2.0 / (1.0 - c) * 0.5;
  EXPECT_NEAR(miss.mean_score, expect / 99.0, 1e-9);
  EXPECT_TRUE(std::isfinite(miss.mean_score));
}

TEST(IntervalScore, DecompositionIsNonnegative) {
  CounterRng r({31, 0});
  for (int i = 0; i < 1000; ++i) {
    const double y = r.normal(), mu = r.normal(), s = r.uniform(0, 2);
    const double c = r.uniform(0.01, 0.99);
    const auto t = interval_score_terms(y, mu, s, c);
    ASSERT_GE(t.width, 0.0);
    ASSERT_GE(t.penalty, 0.0);
    const double z = numerics::std_normal_quantile(1 - (1 - c) / 2);
    ASSERT_NEAR(t.width, 2 * z * s, 1e-12);
  }
}

TEST(IntervalScore, MeanOfPointMeansEqualsMeanOfLevelMeans) {
  CounterRng r({32, 0});
  PredictionSet p;
  for (int i = 0; i < 50; ++i) {
    p.ids.push_back(std::to_string(i));
    p.mu.push_back(r.normal());
    p.y_true.push_back(r.normal());
    p.sigma.push_back(r.uniform(0.1, 2));
  }
  const auto rep = interval_score(p);
  double sum_levels = 0;
  for (double c : rep.coverage_grid) {
    double level = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      level += interval_score_terms(p.y_true[i], p.mu[i], p.sigma[i], c).total();
    }
    sum_levels += level / static_cast<double>(p.size());
  }
  EXPECT_NEAR(rep.mean_score, sum_levels / 99.0, 1e-12);
  double pm = 0;
  for (double v : rep.per_point_scores) pm += v;
  EXPECT_NEAR(rep.mean_score, pm / 50.0, 1e-12);
}

TEST(IntervalScore, StrictlyIncreasingInSigmaWhenExact) {
  double prev = -1;
  for (double s = 0.01; s < 5; s *= 1.3) {
    const double v = interval_score(single(0.2, 0.2, s)).mean_score;
    EXPECT_GT(v, prev);
    prev = v;
  }
}
