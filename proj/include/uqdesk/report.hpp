#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "uqdesk/calibration.hpp"
#include "uqdesk/data.hpp"
#include "uqdesk/metrics.hpp"
#include "uqdesk/recalibration.hpp"
#include "uqdesk/screening.hpp"

namespace uqdesk::report {

inline constexpr int kSchemaVersion = 1;

struct CalibrationSummary {
  double miscalibration_area = 0.0;
  std::size_t grid_size = calibration::kDefaultGridSize;
  std::size_t n_used = 0;
  std::size_t n_excluded_zero_sigma = 0;
};

// Every metric family for one prediction set. A family that could not be
// computed is absent and its failure is listed in `errors`.
struct MetricsReport {
  int schema_version = kSchemaVersion;
  std::size_t n = 0;
  std::optional<metrics::AccuracyReport> accuracy;
  std::optional<double> sharpness;
  std::optional<metrics::DispersionReport> dispersion;
  std::optional<CalibrationSummary> calibration;
  std::optional<double> mean_interval_score;
  double honesty_multiplier = 3.0;
  std::optional<double> honesty_rate;
  std::optional<std::map<std::string, metrics::GroupMetrics>> groups;
  std::vector<std::string> errors;
};

struct Evaluation {
  MetricsReport report;
  std::optional<calibration::CalibrationCurve> curve;
  std::optional<metrics::DistributionSummary> sigma_distribution;
};

Evaluation evaluate(const PredictionSet& p,
                    std::size_t grid_size = calibration::kDefaultGridSize,
                    std::size_t kde_points = 200);

nlohmann::json to_json(const MetricsReport& r);
/// Strict reader: unknown keys or a different schema_version throw
/// Error(ParseError).
MetricsReport metrics_report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const recalibration::RecalibrationResult& r);
nlohmann::json to_json(const screening::ScreenReport& r,
                       const screening::ScreenCriteria& c);

std::string curve_csv(const calibration::CalibrationCurve& c);
std::string violin_csv(const metrics::DistributionSummary& s);
std::string adversarial_csv(const calibration::AdversarialCurve& a);

/// Pretty-printed JSON with a trailing newline; key order is sorted.
std::string dump(const nlohmann::json& j);

}  // namespace uqdesk::report
