#include "uqdesk/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "uqdesk/error.hpp"
#include "uqdesk/numerics.hpp"

namespace uqdesk::metrics {

using numerics::quantile_sorted;

AccuracyReport accuracy(const PredictionSet& p) {
  const auto n = p.size();
  if (n < 2) {
    throw Error(ErrorCode::InvalidArgument, "accuracy needs at least 2 points");
  }
  AccuracyReport r;
  r.n = n;
  std::vector<double> abs_err(n);
  double sum_abs = 0.0, sum_sq = 0.0, sum_rpd = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = p.mu[i] - p.y_true[i];
    abs_err[i] = std::abs(e);
    sum_abs += abs_err[i];
    sum_sq += e * e;
    const double denom = std::abs(p.mu[i]) + std::abs(p.y_true[i]);
    if (denom > 0.0) {
      sum_rpd += 100.0 * abs_err[i] / denom;
    } else {
      ++r.marpd_zero_denominators;
    }
  }
  const auto dn = static_cast<double>(n);
  r.mae = sum_abs / dn;
  r.rmse = std::sqrt(sum_sq / dn);
  r.marpd = sum_rpd / dn;
  std::sort(abs_err.begin(), abs_err.end());
  r.mdae = quantile_sorted(abs_err, 0.5);

  const double y_mean = numerics::mean(p.y_true);
  const double mu_mean = numerics::mean(p.mu);
  double ss_tot = 0.0, ss_mu = 0.0, cross = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dy = p.y_true[i] - y_mean;
    const double dm = p.mu[i] - mu_mean;
    ss_tot += dy * dy;
    ss_mu += dm * dm;
    cross += dy * dm;
  }
  if (ss_tot > 0.0) {
    r.r2 = 1.0 - sum_sq / ss_tot;
    if (ss_mu > 0.0) {
      r.pearson_r = std::clamp(cross / std::sqrt(ss_tot * ss_mu), -1.0, 1.0);
    }
  } else {
    r.constant_target = true;
  }
  return r;
}

double sharpness(std::span<const double> sigma) {
  if (sigma.empty()) throw Error(ErrorCode::EmptyInput, "sharpness of empty set");
  double s = 0.0;
  for (double v : sigma) s += v * v;
  return std::sqrt(s / static_cast<double>(sigma.size()));
}

double sharpness(const PredictionSet& p) { return sharpness(p.sigma); }

BoxStats box_stats(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "box_stats of empty set");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  BoxStats b;
  b.n = sorted.size();
  b.q1 = quantile_sorted(sorted, 0.25);
  b.q2 = quantile_sorted(sorted, 0.5);
  b.q3 = quantile_sorted(sorted, 0.75);
  b.iqr = b.q3 - b.q1;
  b.whisker_lo = b.q1 - 1.5 * b.iqr;
  b.whisker_hi = b.q3 + 1.5 * b.iqr;
  b.min = sorted.front();
  b.max = sorted.back();
  b.data_whisker_lo = b.q1;
  b.data_whisker_hi = b.q3;
  for (double v : sorted) {
    if (v < b.whisker_lo) {
      ++b.outliers_below;
    } else if (v > b.whisker_hi) {
      ++b.outliers_above;
    } else {
      b.data_whisker_lo = std::min(b.data_whisker_lo, v);
      b.data_whisker_hi = std::max(b.data_whisker_hi, v);
    }
  }
  b.outlier_count = b.outliers_below + b.outliers_above;
  return b;
}

DispersionReport dispersion(const PredictionSet& p) {
  if (p.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "dispersion needs at least 2 points");
  }
  DispersionReport r;
  static_cast<BoxStats&>(r) = box_stats(p.sigma);
  const double m = numerics::mean(p.sigma);
  if (m > 0.0) r.cv = numerics::sample_std(p.sigma) / m;
  r.sharpness = sharpness(p.sigma);
  return r;
}

std::map<std::string, GroupMetrics> grouped_metrics(const PredictionSet& p) {
  if (!p.groups) {
    throw Error(ErrorCode::MissingGroups, "prediction set has no group tags");
  }
  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < p.size(); ++i) members[(*p.groups)[i]].push_back(i);

  std::map<std::string, GroupMetrics> out;
  for (const auto& [tag, rows] : members) {
    const auto sub = p.subset(rows);
    GroupMetrics g;
    g.n = rows.size();
    g.sharpness = sharpness(sub.sigma);
    if (g.n >= 2) {
      g.accuracy = accuracy(sub);
      g.mae = g.accuracy->mae;
    } else {
      g.mae = std::abs(sub.mu[0] - sub.y_true[0]);
    }
    out.emplace(tag, std::move(g));
  }
  return out;
}

DistributionSummary distribution_summary(std::span<const double> values,
                                         std::span<const double> eval_grid) {
  if (values.size() < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "distribution_summary needs at least 2 values");
  }
  DistributionSummary s;
  s.box = box_stats(values);
  s.grid.assign(eval_grid.begin(), eval_grid.end());
  s.density = numerics::kde_scott(values, eval_grid);
  return s;
}

std::vector<double> default_kde_grid(std::span<const double> values,
                                     std::size_t points) {
  if (points < 2) throw Error(ErrorCode::InvalidArgument, "grid needs >= 2 points");
  const double h = numerics::scott_bandwidth(values);
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it - 3.0 * h;
  const double hi = *hi_it + 3.0 * h;
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) /
                       static_cast<double>(points - 1);
  }
  return grid;
}

}  // namespace uqdesk::metrics
