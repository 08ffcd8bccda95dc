#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uqdesk/rng.hpp"

namespace uqdesk {

// Feature matrix (row-major) plus scalar targets. Targets are nominally eV;
// nothing in the library depends on the unit.
struct LabeledDataset {
  std::vector<std::string> ids;
  std::vector<double> features;  // size() * n_features, row-major
  std::size_t n_features = 0;
  std::vector<double> targets;
  std::optional<std::vector<std::string>> groups;
  // Generator-side noise standard deviation, when known (synthetic data only).
  std::optional<std::vector<double>> true_sigma;

  std::size_t size() const noexcept { return targets.size(); }
  bool empty() const noexcept { return targets.empty(); }

  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * n_features, n_features};
  }

  LabeledDataset subset(std::span<const std::size_t> rows) const;
};

// The (y, mu, sigma) triple every metric consumes.
struct PredictionSet {
  std::vector<std::string> ids;
  std::vector<double> y_true;
  std::vector<double> mu;
  std::vector<double> sigma;
  std::optional<std::vector<std::string>> groups;

  std::size_t size() const noexcept { return mu.size(); }
  bool empty() const noexcept { return mu.empty(); }

  PredictionSet subset(std::span<const std::size_t> rows) const;
};

// Throws Error(LengthMismatch | NonFiniteValue | DuplicateId | EmptyInput |
// InvalidArgument). Returns a reference to its argument for chaining.
const LabeledDataset& validate_dataset(const LabeledDataset& d);

// Throws Error(LengthMismatch | NonFiniteValue | NegativeSigma | DuplicateId).
// sigma == 0 is accepted; see normalized_residuals for how it is handled.
const PredictionSet& validate_prediction_set(const PredictionSet& p);

// Seeded uniform partition into k folds whose sizes differ by at most one.
// Requires 2 <= k <= N (KTooLarge / InvalidArgument otherwise).
std::vector<LabeledDataset> split_k_folds(const LabeledDataset& d,
                                          std::size_t k, RngSeed seed);

// Index form of split_k_folds; fold_indices(...)[j] lists the rows of fold j.
std::vector<std::vector<std::size_t>> fold_indices(std::size_t n,
                                                   std::size_t k,
                                                   RngSeed seed);

}  // namespace uqdesk
