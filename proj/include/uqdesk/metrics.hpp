#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uqdesk/data.hpp"

namespace uqdesk::metrics {

struct AccuracyReport {
  double mae = 0.0;
  double rmse = 0.0;
  double mdae = 0.0;
  double marpd = 0.0;  // percent, in [0, 200]
  // Undefined (nullopt) when the targets, or for pearson_r the predictions,
  // have zero variance.
  std::optional<double> r2;
  std::optional<double> pearson_r;
  std::size_t n = 0;
  // MARPD terms with |y_pred| + |y_true| == 0; each contributes 0.
  std::size_t marpd_zero_denominators = 0;
  bool constant_target = false;
};

// Box-plot statistics of one sample.
struct BoxStats {
  double q1 = 0.0, q2 = 0.0, q3 = 0.0;
  double iqr = 0.0;
  // Fences at q1 - 1.5 IQR and q3 + 1.5 IQR.
  double whisker_lo = 0.0, whisker_hi = 0.0;
  // Most extreme observations still inside the fences (drawn whisker ends).
  double data_whisker_lo = 0.0, data_whisker_hi = 0.0;
  std::size_t outliers_below = 0, outliers_above = 0;
  std::size_t outlier_count = 0;
  double min = 0.0, max = 0.0;
  std::size_t n = 0;
};

struct DispersionReport : BoxStats {
  std::optional<double> cv;  // nullopt when mean sigma is zero
  double sharpness = 0.0;
};

struct DistributionSummary {
  BoxStats box;
  std::vector<double> grid;
  std::vector<double> density;
};

struct GroupMetrics {
  std::size_t n = 0;
  double mae = 0.0;
  double sharpness = 0.0;
  std::optional<AccuracyReport> accuracy;  // only for n >= 2
};

/// MAE, RMSE, MDAE, MARPD, R^2 and Pearson R of mu against y_true.
/// Requires n >= 2 (Error InvalidArgument otherwise).
AccuracyReport accuracy(const PredictionSet& p);

/// Root mean square of sigma.
double sharpness(const PredictionSet& p);
double sharpness(std::span<const double> sigma);

BoxStats box_stats(std::span<const double> values);

/// Quartiles, IQR, whiskers and outliers of sigma, plus Cv (Bessel) and
/// sharpness. Requires n >= 2.
DispersionReport dispersion(const PredictionSet& p);

/// Per-tag metrics in sorted tag order. Error(MissingGroups) without tags.
std::map<std::string, GroupMetrics> grouped_metrics(const PredictionSet& p);

/// Box statistics plus Scott's-rule KDE on `eval_grid`. Propagates
/// DegenerateSample from the KDE.
DistributionSummary distribution_summary(std::span<const double> values,
                                         std::span<const double> eval_grid);

/// Evenly spaced grid covering [min - 3h, max + 3h] for a sample, where h is
/// its Scott bandwidth. Used for violin tables.
std::vector<double> default_kde_grid(std::span<const double> values,
                                     std::size_t points = 200);

}  // namespace uqdesk::metrics
