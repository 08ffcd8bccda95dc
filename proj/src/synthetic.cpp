#include "uqdesk/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uqdesk/error.hpp"

namespace uqdesk::synthetic {

double target_function(std::span<const double> x) {
  double f = std::sin(x[0]) + 0.5 * x[0];
  for (std::size_t j = 1; j < x.size(); ++j) {
    f += (0.3 * x[j] - 0.05 * x[j] * x[j]) / static_cast<double>(j);
  }
  return f;
}

double noise_std(std::span<const double> x) { return 0.05 + 0.2 * std::abs(x[0]); }

LabeledDataset generate(const GeneratorConfig& cfg, RngSeed seed) {
  if (cfg.n_features == 0) {
    throw Error(ErrorCode::InvalidArgument, "n_features must be >= 1");
  }
  LabeledDataset d;
  d.n_features = cfg.n_features;
  d.true_sigma.emplace();
  if (cfg.n_groups > 0) d.groups.emplace();
  d.ids.reserve(cfg.n);
  d.targets.reserve(cfg.n);
  d.features.reserve(cfg.n * cfg.n_features);
  std::vector<double> x(cfg.n_features);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    CounterRng rng(seed.child(i));
    for (auto& v : x) v = rng.uniform(-3.0, 3.0);
    const double s = noise_std(x);
    d.ids.push_back(cfg.id_prefix + std::to_string(i));
    d.features.insert(d.features.end(), x.begin(), x.end());
    d.targets.push_back(target_function(x) + s * rng.normal());
    d.true_sigma->push_back(s);
    if (cfg.n_groups > 0) {
      const double key = x[cfg.n_features > 1 ? 1 : 0];
      const auto bin = std::min<std::size_t>(
          cfg.n_groups - 1,
          static_cast<std::size_t>((key + 3.0) / 6.0 * static_cast<double>(cfg.n_groups)));
      d.groups->push_back("g" + std::to_string(bin));
    }
  }
  return d;
}

}  // namespace uqdesk::synthetic
