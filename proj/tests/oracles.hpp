#pragma once

// Independent reference implementations used only by tests. None of these
// share code paths with the library.

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

// erf via its Maclaurin series in long double; fine for |x| <= 3.
inline long double erf_series(long double x) {
  long double term = x, sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= -x * x / n;
    const long double add = term / (2 * n + 1);
    sum += add;
    if (std::fabs(add) < 1e-30L) break;
  }
  return sum * 2.0L / std::sqrt(3.14159265358979323846264338327950288L);
}

inline long double normal_cdf(long double x) {
  return 0.5L * (1.0L + erf_series(x / std::sqrt(2.0L)));
}

inline double bisect_quantile(double p) {
  double lo = -10, hi = 10;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// ln Gamma via the Stirling series at x + N >= 40, then downward recurrence.
inline long double log_gamma(long double x) {
  long double shift = 0.0L;
  while (x < 40.0L) {
    shift -= std::log(x);
    x += 1.0L;
  }
  const long double pi = 3.14159265358979323846264338327950288L;
  const long double inv = 1.0L / x, inv2 = inv * inv;
  const long double series =
      inv * (1.0L / 12 - inv2 * (1.0L / 360 - inv2 * (1.0L / 1260 - inv2 * (1.0L / 1680 -
                                                                          inv2 / 1188.0L))));
  return shift + (x - 0.5L) * std::log(x) - x + 0.5L * std::log(2 * pi) + series;
}

inline double central_difference(const std::function<double(double)>& f, double x,
                                 double h) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

inline double grid_argmin(const std::function<double(double)>& f, double lo, double hi,
                          double step) {
  double best_x = lo, best_f = f(lo);
  for (double x = lo; x <= hi; x += step) {
    const double v = f(x);
    if (v < best_f) {
      best_f = v;
      best_x = x;
    }
  }
  return best_x;
}

}  // namespace oracle
