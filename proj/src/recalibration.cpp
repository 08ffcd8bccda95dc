#include "uqdesk/recalibration.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "uqdesk/error.hpp"

namespace uqdesk::recalibration {

PredictionSet apply_scalar(const PredictionSet& p, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw Error(ErrorCode::NonPositiveScalar, "scalar must be finite and > 0");
  }
  PredictionSet out = p;
  for (double& v : out.sigma) v *= s;
  return out;
}

RecalibrationResult fit_scalar(const PredictionSet& p, const FitOptions& opts) {
  if (!(opts.bracket_lo > 0.0 && opts.bracket_lo < opts.bracket_hi)) {
    throw Error(ErrorCode::InvalidArgument,
                "recalibration bracket must satisfy 0 < lo < hi");
  }
  if (opts.prescan_points < 3) {
    throw Error(ErrorCode::InvalidArgument, "prescan needs at least 3 points");
  }
  if (std::none_of(p.sigma.begin(), p.sigma.end(),
                   [](double s) { return s > 0.0; })) {
    throw Error(ErrorCode::AllSigmaZero, "cannot rescale all-zero sigma");
  }

  auto area_at = [&](double t) {
    return calibration::calibration_curve(apply_scalar(p, std::exp(t)),
                                          opts.grid_size)
        .miscalibration_area;
  };

  RecalibrationResult r;
  r.bracket_lo = opts.bracket_lo;
  r.bracket_hi = opts.bracket_hi;
  r.grid_size = opts.grid_size;
  r.area_before = calibration::calibration_curve(p, opts.grid_size).miscalibration_area;

  const double t_lo = std::log(opts.bracket_lo);
  const double t_hi = std::log(opts.bracket_hi);
  const std::size_t m = opts.prescan_points;
  std::vector<double> ts(m), areas(m);
  for (std::size_t i = 0; i < m; ++i) {
    ts[i] = t_lo + (t_hi - t_lo) * static_cast<double>(i) / static_cast<double>(m - 1);
    areas[i] = area_at(ts[i]);
  }
  const auto best = static_cast<std::size_t>(
      std::min_element(areas.begin(), areas.end()) - areas.begin());
  const double cell_lo = ts[best == 0 ? 0 : best - 1];
  const double cell_hi = ts[best + 1 == m ? m - 1 : best + 1];

  r.brent = numerics::brent_minimize(area_at, cell_lo, cell_hi, opts.tol,
                                     opts.max_iter);

  double best_t = r.brent.argmin;
  double best_area = r.brent.value;
  if (areas[best] < best_area) {
    best_t = ts[best];
    best_area = areas[best];
  }
  // Never return something worse than leaving sigma alone.
  if (1.0 >= opts.bracket_lo && 1.0 <= opts.bracket_hi && r.area_before < best_area) {
    best_t = 0.0;
    best_area = r.area_before;
  }
  r.scalar = std::exp(best_t);
  r.area_after =
      calibration::calibration_curve(apply_scalar(p, r.scalar), opts.grid_size)
          .miscalibration_area;
  return r;
}

}  // namespace uqdesk::recalibration
