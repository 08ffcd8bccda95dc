#include "uqdesk/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "uqdesk/error.hpp"
#include "uqdesk/numerics.hpp"

namespace uqdesk::calibration {

std::vector<double> normalized_residuals(const PredictionSet& p) {
  std::vector<double> z(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    z[i] = p.sigma[i] > 0.0 ? (p.y_true[i] - p.mu[i]) / p.sigma[i]
                            : std::numeric_limits<double>::infinity();
  }
  return z;
}

namespace {

std::vector<double> expected_grid(std::size_t grid_size) {
  std::vector<double> g(grid_size);
  for (std::size_t j = 0; j < grid_size; ++j) {
    g[j] = static_cast<double>(j + 1) / static_cast<double>(grid_size + 1);
  }
  return g;
}

// Phi(z) for every usable point, ascending.
std::vector<double> sorted_cdf_values(const PredictionSet& p,
                                      std::size_t& excluded) {
  const auto z = normalized_residuals(p);
  std::vector<double> cdf;
  cdf.reserve(z.size());
  excluded = 0;
  for (double v : z) {
    if (std::isinf(v)) {
      ++excluded;
    } else {
      cdf.push_back(numerics::std_normal_cdf(v));
    }
  }
  std::sort(cdf.begin(), cdf.end());
  return cdf;
}

}  // namespace

double miscalibration_area(std::span<const double> expected,
                           std::span<const double> observed) {
  if (expected.size() != observed.size()) {
    throw Error(ErrorCode::LengthMismatch, "curve expected/observed sizes differ");
  }
  double area = 0.0;
  double px = 0.0, pd = 0.0;  // implicit (0, 0)
  bool first = true;
  for (std::size_t j = 0; j < expected.size(); ++j) {
    const double x = expected[j];
    const double d = std::abs(observed[j] - expected[j]);
    if (first && x == 0.0) {
      pd = d;
    } else {
      area += 0.5 * (x - px) * (d + pd);
    }
    first = false;
    px = x;
    pd = d;
  }
  if (px < 1.0) area += 0.5 * (1.0 - px) * pd;  // implicit (1, 1)
  return area;
}

double miscalibration_area(const CalibrationCurve& c) {
  return miscalibration_area(c.expected, c.observed);
}

CalibrationCurve calibration_curve_from_sorted_cdf(
    std::span<const double> sorted_cdf, std::size_t grid_size) {
  if (grid_size == 0) {
    throw Error(ErrorCode::InvalidArgument, "grid_size must be >= 1");
  }
  if (sorted_cdf.empty()) {
    throw Error(ErrorCode::AllSigmaZero, "no points with sigma > 0");
  }
  if (sorted_cdf.size() < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "calibration curve needs at least 2 points with sigma > 0");
  }
  CalibrationCurve c;
  c.expected = expected_grid(grid_size);
  c.observed.resize(grid_size);
  c.n_used = sorted_cdf.size();
  const auto n = static_cast<double>(sorted_cdf.size());
  auto it = sorted_cdf.begin();
  for (std::size_t j = 0; j < grid_size; ++j) {
    it = std::upper_bound(it, sorted_cdf.end(), c.expected[j]);
    c.observed[j] = static_cast<double>(it - sorted_cdf.begin()) / n;
  }
  c.miscalibration_area = miscalibration_area(c);
  return c;
}

CalibrationCurve calibration_curve(const PredictionSet& p,
                                   std::size_t grid_size) {
  std::size_t excluded = 0;
  const auto cdf = sorted_cdf_values(p, excluded);
  auto c = calibration_curve_from_sorted_cdf(cdf, grid_size);
  c.n_excluded_zero_sigma = excluded;
  return c;
}

AdversarialCurve adversarial_group_calibration(
    const PredictionSet& p, std::span<const double> fractions, RngSeed seed,
    std::size_t trials, std::size_t subgroups, std::size_t grid_size) {
  if (trials == 0 || subgroups == 0) {
    throw Error(ErrorCode::InvalidArgument, "trials and subgroups must be >= 1");
  }
  std::size_t excluded = 0;
  // Phi(z) in input order for usable points.
  std::vector<double> cdf;
  {
    const auto z = normalized_residuals(p);
    for (double v : z) {
      if (std::isinf(v)) {
        ++excluded;
      } else {
        cdf.push_back(numerics::std_normal_cdf(v));
      }
    }
  }
  if (cdf.empty()) throw Error(ErrorCode::AllSigmaZero, "no points with sigma > 0");
  const std::size_t n = cdf.size();

  AdversarialCurve out;
  out.trials = trials;
  out.subgroups_per_trial = subgroups;

  std::vector<std::size_t> perm(n);
  std::vector<double> group(n);
  std::vector<double> worst(trials);
  for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
    const double f = fractions[fi];
    if (!(f > 0.0 && f <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument,
                  "group fraction must lie in (0, 1]", fi);
    }
    const auto m = static_cast<std::size_t>(std::llround(f * static_cast<double>(n)));
    if (m < 2) {
      throw Error(ErrorCode::FractionTooSmall,
                  "fraction " + std::to_string(f) + " gives fewer than 2 points",
                  fi);
    }
    for (std::size_t t = 0; t < trials; ++t) {
      CounterRng rng(seed.child(fi, t));
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      double trial_worst = 0.0;
      for (std::size_t s = 0; s < subgroups; ++s) {
        // Partial Fisher-Yates: perm[0, m) becomes a uniform m-subset.
        for (std::size_t i = 0; i < m; ++i) {
          const auto j = i + static_cast<std::size_t>(rng.below(n - i));
          std::swap(perm[i], perm[j]);
        }
        for (std::size_t i = 0; i < m; ++i) group[i] = cdf[perm[i]];
        std::sort(group.begin(), group.begin() + static_cast<std::ptrdiff_t>(m));
        const auto c = calibration_curve_from_sorted_cdf(
            std::span(group.data(), m), grid_size);
        trial_worst = std::max(trial_worst, c.miscalibration_area);
      }
      worst[t] = trial_worst;
    }
    out.group_fractions.push_back(f);
    out.group_sizes.push_back(m);
    const bool constant = std::all_of(worst.begin(), worst.end(),
                                      [&](double w) { return w == worst[0]; });
    if (constant) {
      // Exact for f = 1, where every subgroup is the full set.
      out.mean_worst_area.push_back(worst[0]);
      out.std_error.push_back(0.0);
    } else {
      out.mean_worst_area.push_back(numerics::mean(worst));
      out.std_error.push_back(numerics::sample_std(worst) /
                              std::sqrt(static_cast<double>(trials)));
    }
  }
  return out;
}

}  // namespace uqdesk::calibration
