#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace uqdesk::numerics {

/// Standard normal CDF, accurate to ~1e-16 absolute.
double std_normal_cdf(double x);

/// Standard normal density.
double std_normal_pdf(double x);

/// Inverse of std_normal_cdf. Throws Error(DomainError) unless 0 < p < 1.
double std_normal_quantile(double p);

/// ln Gamma(x) for x > 0 (Lanczos, g = 7). Throws Error(DomainError) for
/// x <= 0 or non-finite x.
double log_gamma(double x);

/// d/dx ln Gamma(x) for x > 0. Throws Error(DomainError) for x <= 0.
double digamma(double x);

struct BrentResult {
  double argmin = 0.0;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

inline constexpr double kDefaultBrentTol = 1e-6;
inline constexpr int kDefaultBrentMaxIter = 200;

/// Bounded Brent minimization (golden section with parabolic steps) of `f`
/// on [lo, hi]. `tol` is an absolute tolerance on the argument. If the
/// iteration limit is hit the best point seen is returned with
/// converged = false rather than throwing.
BrentResult brent_minimize(const std::function<double(double)>& f, double lo,
                           double hi, double tol = kDefaultBrentTol,
                           int max_iter = kDefaultBrentMaxIter);

/// Scott's-rule bandwidth: Bessel-corrected sample std times n^(-1/5).
/// Throws Error(DegenerateSample) when the samples have no spread and
/// Error(InvalidArgument) for fewer than two samples.
double scott_bandwidth(std::span<const double> samples);

/// Gaussian kernel density estimate with Scott's-rule bandwidth, evaluated at
/// each point of `eval_points`.
std::vector<double> kde_scott(std::span<const double> samples,
                              std::span<const double> eval_points);

// Small statistics helpers shared by the metric modules.
double mean(std::span<const double> v);
/// Sample standard deviation with Bessel's correction (n - 1).
double sample_std(std::span<const double> v);
/// Linear-interpolation quantile (the "type 7" rule) of an ascending range.
double quantile_sorted(std::span<const double> sorted, double q);

}  // namespace uqdesk::numerics
