#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "uqdesk/data.hpp"
#include "uqdesk/rng.hpp"

namespace uqdesk::calibration {

inline constexpr std::size_t kDefaultGridSize = 99;

struct CalibrationCurve {
  std::vector<double> expected;  // interior grid j / (grid_size + 1)
  std::vector<double> observed;
  double miscalibration_area = 0.0;
  std::size_t n_used = 0;
  std::size_t n_excluded_zero_sigma = 0;
};

struct AdversarialCurve {
  std::vector<double> group_fractions;
  std::vector<std::size_t> group_sizes;
  std::vector<double> mean_worst_area;
  std::vector<double> std_error;
  std::size_t trials = 0;
  std::size_t subgroups_per_trial = 0;
};

/// z_i = (y_i - mu_i) / sigma_i. Entries with sigma_i == 0 are +Inf.
std::vector<double> normalized_residuals(const PredictionSet& p);

/// Quantile calibration curve: observed_j is the fraction of usable points
/// with Phi(z_i) <= expected_j. Points with sigma == 0 are excluded and
/// counted. Error(AllSigmaZero) if none are usable, InvalidArgument if only
/// one is.
CalibrationCurve calibration_curve(const PredictionSet& p,
                                   std::size_t grid_size = kDefaultGridSize);

/// Same curve from pre-computed Phi(z) values sorted ascending.
CalibrationCurve calibration_curve_from_sorted_cdf(
    std::span<const double> sorted_cdf, std::size_t grid_size = kDefaultGridSize);

/// Trapezoidal integral of |observed - expected| over [0, 1]. The endpoints
/// (0, 0) and (1, 1) are added when the grid does not already contain them.
double miscalibration_area(std::span<const double> expected,
                           std::span<const double> observed);
double miscalibration_area(const CalibrationCurve& c);

/// Worst-subgroup miscalibration area across subgroup sizes. For every
/// fraction f and each of `trials` trials, `subgroups` random subsets of size
/// round(f * n) are drawn (each without replacement; subsets may overlap one
/// another) and the largest area is kept. Reports the mean of those maxima
/// and their standard error. n counts only points with sigma > 0.
AdversarialCurve adversarial_group_calibration(
    const PredictionSet& p, std::span<const double> fractions,
    RngSeed seed, std::size_t trials = 100, std::size_t subgroups = 10,
    std::size_t grid_size = kDefaultGridSize);

}  // namespace uqdesk::calibration
