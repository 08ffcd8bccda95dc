#include "uqdesk/evidential.hpp"

#include <cmath>
#include <numbers>

#include "uqdesk/error.hpp"
#include "uqdesk/numerics.hpp"

namespace uqdesk::uq {

double softplus(double x) {
  return std::log1p(std::exp(-std::abs(x))) + std::max(x, 0.0);
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

EvidentialParams evidential_head(std::span<const double> raw) {
  if (raw.size() != 4) {
    throw Error(ErrorCode::WrongHeadWidth,
                "evidential head needs 4 outputs, got " + std::to_string(raw.size()));
  }
  return {raw[0], softplus(raw[1]) + kHeadEpsilon,
          softplus(raw[2]) + 1.0 + kHeadEpsilon, softplus(raw[3]) + kHeadEpsilon};
}

double evidential_nll(const EvidentialParams& q, double y) {
  const double omega = q.omega();
  const double r = y - q.gamma;
  return 0.5 * std::log(std::numbers::pi / q.nu) - q.alpha * std::log(omega) +
         (q.alpha + 0.5) * std::log(r * r * q.nu + omega) +
         numerics::log_gamma(q.alpha) - numerics::log_gamma(q.alpha + 0.5);
}

double evidential_regularizer(const EvidentialParams& q, double y) {
  return std::abs(y - q.gamma) * (2.0 * q.nu + q.alpha);
}

EvidentialUncertainty evidential_uncertainties(const EvidentialParams& q,
                                               bool take_sqrt) {
  if (!(q.alpha > 1.0) || !(q.nu > 0.0)) {
    throw Error(ErrorCode::DomainError, "uncertainties need alpha > 1 and nu > 0");
  }
  EvidentialUncertainty u;
  u.aleatoric = q.beta / (q.alpha - 1.0);
  u.epistemic = q.beta / (q.nu * (q.alpha - 1.0));
  if (take_sqrt) {
    u.aleatoric = std::sqrt(u.aleatoric);
    u.epistemic = std::sqrt(u.epistemic);
  }
  return u;
}

HeadLoss evidential_loss(std::span<const double> raw, double y, double lambda) {
  const auto q = evidential_head(raw);
  const double r = y - q.gamma;
  const double omega = q.omega();
  const double denom = r * r * q.nu + omega;
  const double a_half = q.alpha + 0.5;

  HeadLoss out;
  out.value = evidential_nll(q, y) + lambda * evidential_regularizer(q, y);

  // Partials with respect to (gamma, nu, alpha, beta).
  const double sgn = r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
  const double d_gamma = a_half * (-2.0 * r * q.nu) / denom -
                         lambda * sgn * (2.0 * q.nu + q.alpha);
  const double d_nu = -0.5 / q.nu - q.alpha * 2.0 * q.beta / omega +
                      a_half * (r * r + 2.0 * q.beta) / denom +
                      lambda * 2.0 * std::abs(r);
  const double d_alpha = -std::log(omega) + std::log(denom) +
                         numerics::digamma(q.alpha) -
                         numerics::digamma(a_half) + lambda * std::abs(r);
  const double d_beta =
      -q.alpha / q.beta + a_half * 2.0 * (1.0 + q.nu) / denom;

  out.grad[0] = d_gamma;
  out.grad[1] = d_nu * sigmoid(raw[1]);
  out.grad[2] = d_alpha * sigmoid(raw[2]);
  out.grad[3] = d_beta * sigmoid(raw[3]);
  return out;
}

}  // namespace uqdesk::uq
