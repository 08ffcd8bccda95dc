#pragma once

#include <string>
#include <vector>

#include "uqdesk/data.hpp"

namespace uqdesk::screening {

struct ScreenCriteria {
  double value_lo = -0.1;  // window on mu, inclusive
  double value_hi = 0.1;
  double sigma_max = 0.05;  // inclusive ceiling
  double honesty_multiplier = 3.0;
};

struct ScreenReport {
  std::vector<std::string> selected_ids;
  std::vector<std::string> honest_ids;
  std::vector<std::string> dishonest_ids;
};

/// Error(InvalidArgument) unless value_lo < value_hi, sigma_max > 0 and
/// honesty_multiplier > 0.
void validate(const ScreenCriteria& c);

/// Selects points with value_lo <= mu <= value_hi and sigma <= sigma_max, then
/// splits them by whether |y - mu| <= honesty_multiplier * sigma. All lists
/// keep input order.
ScreenReport screen(const PredictionSet& p, const ScreenCriteria& c);

/// Fraction of all points with |y - mu| <= multiplier * sigma.
double honesty_rate(const PredictionSet& p, double multiplier);

}  // namespace uqdesk::screening
