#include "uqdesk/scoring.hpp"

#include "uqdesk/error.hpp"
#include "uqdesk/numerics.hpp"

namespace uqdesk::scoring {

std::vector<double> default_coverage_grid() {
  std::vector<double> g(99);
  for (int i = 0; i < 99; ++i) g[i] = (i + 1) / 100.0;
  return g;
}

namespace {

IntervalScoreTerms terms_with_quantile(double y, double mu, double sigma,
                                       double miss, double z) {
  const double lo = mu - z * sigma;
  const double hi = mu + z * sigma;
  IntervalScoreTerms t;
  t.width = hi - lo;
  if (y < lo) t.penalty = (2.0 / miss) * (lo - y);
  if (y > hi) t.penalty = (2.0 / miss) * (y - hi);
  return t;
}

}  // namespace

IntervalScoreTerms interval_score_terms(double y, double mu, double sigma,
                                        double coverage) {
  if (!(coverage > 0.0 && coverage < 1.0)) {
    throw Error(ErrorCode::DomainError, "coverage must lie in (0, 1)");
  }
  const double miss = 1.0 - coverage;
  return terms_with_quantile(y, mu, sigma, miss,
                             numerics::std_normal_quantile(1.0 - miss / 2.0));
}

IntervalScoreReport interval_score(const PredictionSet& p,
                                   std::span<const double> coverage_grid) {
  if (p.empty()) throw Error(ErrorCode::EmptyInput, "interval score of empty set");
  if (coverage_grid.empty()) {
    throw Error(ErrorCode::InvalidArgument, "empty coverage grid");
  }
  std::vector<double> miss(coverage_grid.size()), z(coverage_grid.size());
  for (std::size_t k = 0; k < coverage_grid.size(); ++k) {
    const double c = coverage_grid[k];
    if (!(c > 0.0 && c < 1.0)) {
      throw Error(ErrorCode::DomainError, "coverage must lie in (0, 1)", k);
    }
    miss[k] = 1.0 - c;
    z[k] = numerics::std_normal_quantile(1.0 - miss[k] / 2.0);
  }

  IntervalScoreReport r;
  r.coverage_grid.assign(coverage_grid.begin(), coverage_grid.end());
  r.per_point_scores.resize(p.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
      acc += terms_with_quantile(p.y_true[i], p.mu[i], p.sigma[i], miss[k], z[k])
                 .total();
    }
    r.per_point_scores[i] = acc / static_cast<double>(z.size());
    total += r.per_point_scores[i];
  }
  r.mean_score = total / static_cast<double>(p.size());
  return r;
}

IntervalScoreReport interval_score(const PredictionSet& p) {
  return interval_score(p, default_coverage_grid());
}

}  // namespace uqdesk::scoring
