#pragma once

#include <span>
#include <vector>

#include "uqdesk/data.hpp"

namespace uqdesk::scoring {

struct IntervalScoreReport {
  double mean_score = 0.0;
  std::vector<double> per_point_scores;
  std::vector<double> coverage_grid;
};

// Score of one central Gaussian interval, split into its two nonnegative parts.
struct IntervalScoreTerms {
  double width = 0.0;
  double penalty = 0.0;
  double total() const { return width + penalty; }
};

/// Coverage levels 0.01, 0.02, ..., 0.99.
std::vector<double> default_coverage_grid();

/// Negatively oriented interval score of mu +/- Phi^-1(1 - a/2) sigma at
/// coverage c = 1 - a for observation y. sigma == 0 collapses the interval
/// to mu.
IntervalScoreTerms interval_score_terms(double y, double mu, double sigma,
                                        double coverage);

/// Per point: mean score over the coverage grid. mean_score: mean over points.
IntervalScoreReport interval_score(const PredictionSet& p);
IntervalScoreReport interval_score(const PredictionSet& p,
                                   std::span<const double> coverage_grid);

}  // namespace uqdesk::scoring
