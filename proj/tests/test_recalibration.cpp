#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "uqdesk/calibration.hpp"
#include "uqdesk/error.hpp"
#include "uqdesk/metrics.hpp"
#include "uqdesk/recalibration.hpp"
#include "uqdesk/rng.hpp"

using namespace uqdesk;
using namespace uqdesk::recalibration;

namespace {

PredictionSet calibrated(std::size_t n, std::uint64_t seed) {
  CounterRng r({seed, 5});
  PredictionSet p;
  for (std::size_t i = 0; i < n; ++i) {
    const double mu = r.uniform(-2, 2);
    const double s = r.uniform(0.1, 1.0);
    p.ids.push_back(std::to_string(i));
    p.mu.push_back(mu);
    p.sigma.push_back(s);
    p.y_true.push_back(mu + s * r.normal());
  }
  return p;
}

double area_at(const PredictionSet& p, double s) {
  return calibration::calibration_curve(apply_scalar(p, s)).miscalibration_area;
}

}  // namespace

TEST(FitScalar, CalibratedInputNeedsNoScaling) {
  const auto r = fit_scalar(calibrated(20000, 1));
  EXPECT_GE(r.scalar, 0.95);
  EXPECT_LE(r.scalar, 1.05);
  EXPECT_LE(r.area_after, r.area_before);
}

TEST(FitScalar, HalvedSigmaRecoversTwo) {
  auto p = calibrated(20000, 2);
  for (auto& s : p.sigma) s *= 0.5;
  const auto r = fit_scalar(p);
  EXPECT_GE(r.scalar, 1.9);
  EXPECT_LE(r.scalar, 2.1);
  EXPECT_LT(r.area_after, r.area_before);
}

TEST(FitScalar, MatchesGridScanMinimum) {
  auto p = calibrated(3000, 3);
  for (auto& s : p.sigma) s *= 3.0;
  const auto r = fit_scalar(p);
  const double t = oracle::grid_argmin(
      [&](double x) { return area_at(p, std::exp(x)); }, std::log(0.1), std::log(1.0), 1e-3);
  EXPECT_LE(r.area_after, area_at(p, std::exp(t)) + 1e-4);
  EXPECT_NEAR(r.area_after, area_at(p, r.scalar), 1e-15);
}

TEST(FitScalar, NeverWorseThanIdentity) {
  for (std::uint64_t seed = 10; seed < 30; ++seed) {
    const auto p = calibrated(50, seed);
    const auto r = fit_scalar(p);
    EXPECT_LE(r.area_after, r.area_before);
    EXPECT_GT(r.scalar, 0.0);
  }
}

TEST(FitScalar, AllSigmaZero) {
  auto p = calibrated(10, 4);
  for (auto& s : p.sigma) s = 0.0;
  try {
    fit_scalar(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AllSigmaZero);
  }
}

TEST(ApplyScalar, ScalesSigmaOnly) {
  const auto p = calibrated(200, 5);
  const auto q = apply_scalar(p, 2.5);
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_EQ(q.mu[i], p.mu[i]);
    EXPECT_EQ(q.y_true[i], p.y_true[i]);
    EXPECT_DOUBLE_EQ(q.sigma[i], 2.5 * p.sigma[i]);
  }
  const auto a = metrics::accuracy(p), b = metrics::accuracy(q);
  EXPECT_EQ(a.mae, b.mae);
  EXPECT_EQ(a.rmse, b.rmse);
  const auto da = metrics::dispersion(p), db = metrics::dispersion(q);
  EXPECT_NEAR(*db.cv, *da.cv, 1e-12);
  EXPECT_NEAR(db.iqr, 2.5 * da.iqr, 1e-12);
  EXPECT_NEAR(db.sharpness, 2.5 * da.sharpness, 1e-12);
}

TEST(ApplyScalar, RejectsNonPositive) {
  const auto p = calibrated(5, 6);
  for (double s : {0.0, -1.0, std::nan("")}) {
    try {
      apply_scalar(p, s);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::NonPositiveScalar);
    }
  }
}
