#pragma once

#include <array>
#include <span>

namespace uqdesk::uq {

// Normal-Inverse-Gamma evidence parameters emitted by the 4-wide head.
struct EvidentialParams {
  double gamma = 0.0;
  double nu = 1.0;     // > 0
  double alpha = 2.0;  // > 1
  double beta = 1.0;   // > 0

  double omega() const { return 2.0 * beta * (1.0 + nu); }
};

struct EvidentialUncertainty {
  double aleatoric = 0.0;
  double epistemic = 0.0;
};

inline constexpr double kHeadEpsilon = 1e-6;

double softplus(double x);
double sigmoid(double x);

/// Maps raw head outputs to a valid parameter set:
/// gamma = o0, nu = softplus(o1) + eps, alpha = softplus(o2) + 1 + eps,
/// beta = softplus(o3) + eps.
EvidentialParams evidential_head(std::span<const double> raw);

/// Negative log-likelihood term of the evidential loss:
/// 0.5 ln(pi/nu) - alpha ln(Omega) + (alpha + 0.5) ln((y - gamma)^2 nu + Omega)
///   + ln Gamma(alpha) - ln Gamma(alpha + 0.5), with Omega = 2 beta (1 + nu).
double evidential_nll(const EvidentialParams& params, double y);

/// |y - gamma| * (2 nu + alpha).
double evidential_regularizer(const EvidentialParams& params, double y);

/// Aleatoric beta / (alpha - 1) and epistemic beta / (nu (alpha - 1)). These
/// are returned as printed; `take_sqrt` converts them from variance-like
/// quantities to standard deviations.
EvidentialUncertainty evidential_uncertainties(const EvidentialParams& params,
                                               bool take_sqrt = false);

struct HeadLoss {
  double value = 0.0;
  std::array<double, 4> grad{};  // d value / d raw output
};

/// nll + lambda * regularizer evaluated from raw head outputs, with its exact
/// gradient through the head mapping.
HeadLoss evidential_loss(std::span<const double> raw, double y, double lambda);

}  // namespace uqdesk::uq
