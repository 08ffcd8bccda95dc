#pragma once

#include <cstddef>
#include <span>

#include "uqdesk/data.hpp"
#include "uqdesk/rng.hpp"

namespace uqdesk::synthetic {

struct GeneratorConfig {
  std::size_t n = 1000;
  std::size_t n_features = 4;
  std::size_t n_groups = 0;  // 0: no group column
  std::string id_prefix = "s";
};

/// Smooth target: sin(x0) + 0.5 x0 + sum_{j>=1} (0.3 x_j - 0.05 x_j^2) / j.
double target_function(std::span<const double> x);

/// Heteroscedastic noise std 0.05 + 0.2 |x0|.
double noise_std(std::span<const double> x);

/// x ~ U(-3, 3)^d, y = f(x) + s(x) * N(0, 1). Row i draws from the stream
/// seed.child(i), so a dataset is a prefix of any larger one with the same
/// seed. true_sigma holds s(x). Group tags, when requested, bin x1 (or x0
/// when d = 1) into n_groups equal-width bins named g0, g1, ...
LabeledDataset generate(const GeneratorConfig& cfg, RngSeed seed);

}  // namespace uqdesk::synthetic
