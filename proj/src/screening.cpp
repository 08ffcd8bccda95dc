#include "uqdesk/screening.hpp"

#include <cmath>

#include "uqdesk/error.hpp"

namespace uqdesk::screening {

void validate(const ScreenCriteria& c) {
  if (!(c.value_lo < c.value_hi)) {
    throw Error(ErrorCode::InvalidArgument, "screen window needs value_lo < value_hi");
  }
  if (!(c.sigma_max > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "sigma_max must be > 0");
  }
  if (!(c.honesty_multiplier > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "honesty_multiplier must be > 0");
  }
}

ScreenReport screen(const PredictionSet& p, const ScreenCriteria& c) {
  validate(c);
  ScreenReport r;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double mu = p.mu[i];
    if (mu < c.value_lo || mu > c.value_hi || p.sigma[i] > c.sigma_max) continue;
    r.selected_ids.push_back(p.ids[i]);
    if (std::abs(p.y_true[i] - mu) <= c.honesty_multiplier * p.sigma[i]) {
      r.honest_ids.push_back(p.ids[i]);
    } else {
      r.dishonest_ids.push_back(p.ids[i]);
    }
  }
  return r;
}

double honesty_rate(const PredictionSet& p, double multiplier) {
  if (p.empty()) throw Error(ErrorCode::EmptyInput, "honesty rate of empty set");
  if (multiplier < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "multiplier must be >= 0");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (std::abs(p.y_true[i] - p.mu[i]) <= multiplier * p.sigma[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(p.size());
}

}  // namespace uqdesk::screening
