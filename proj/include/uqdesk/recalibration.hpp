#pragma once

#include <cstddef>

#include "uqdesk/calibration.hpp"
#include "uqdesk/data.hpp"
#include "uqdesk/numerics.hpp"

namespace uqdesk::recalibration {

struct RecalibrationResult {
  double scalar = 1.0;
  double area_before = 0.0;  // at scalar = 1
  double area_after = 0.0;
  numerics::BrentResult brent;  // search variable is ln(scalar)
  double bracket_lo = 1e-3;
  double bracket_hi = 1e3;
  std::size_t grid_size = calibration::kDefaultGridSize;
};

struct FitOptions {
  double bracket_lo = 1e-3;
  double bracket_hi = 1e3;
  std::size_t prescan_points = 25;
  double tol = numerics::kDefaultBrentTol;
  int max_iter = numerics::kDefaultBrentMaxIter;
  std::size_t grid_size = calibration::kDefaultGridSize;
};

/// Multiplies every sigma by s. Error(NonPositiveScalar) unless s > 0.
PredictionSet apply_scalar(const PredictionSet& p, double s);

/// Finds the sigma multiplier that minimizes the miscalibration area. The
/// search runs on t = ln s: a coarse log-uniform scan picks the best cell,
/// Brent refines inside it, and the best point evaluated overall is
/// returned. Error(AllSigmaZero) when no sigma is positive.
RecalibrationResult fit_scalar(const PredictionSet& p, const FitOptions& opts = {});

}  // namespace uqdesk::recalibration
