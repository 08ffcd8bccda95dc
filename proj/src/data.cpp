#include "uqdesk/data.hpp"

#include <cmath>
#include <numeric>
#include <unordered_set>

#include "uqdesk/error.hpp"

namespace uqdesk {

namespace {

template <typename T>
std::vector<T> gather(const std::vector<T>& src,
                      std::span<const std::size_t> rows) {
  std::vector<T> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(src.at(r));
  return out;
}

void check_length(std::size_t expected, std::size_t actual,
                  const char* field) {
  if (expected != actual) {
    throw Error(ErrorCode::LengthMismatch,
                std::string(field) + " has " + std::to_string(actual) +
                    " entries, expected " + std::to_string(expected));
  }
}

void check_finite(std::span<const double> v, const char* field) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw Error(ErrorCode::NonFiniteValue, field, i);
    }
  }
}

void check_unique(const std::vector<std::string>& ids) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!seen.insert(ids[i]).second) {
      throw Error(ErrorCode::DuplicateId, "id '" + ids[i] + "'", i);
    }
  }
}

}  // namespace

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> rows) const {
  LabeledDataset out;
  out.n_features = n_features;
  out.ids = gather(ids, rows);
  out.targets = gather(targets, rows);
  out.features.reserve(rows.size() * n_features);
  for (auto r : rows) {
    auto x = row(r);
    out.features.insert(out.features.end(), x.begin(), x.end());
  }
  if (groups) out.groups = gather(*groups, rows);
  if (true_sigma) out.true_sigma = gather(*true_sigma, rows);
  return out;
}

PredictionSet PredictionSet::subset(std::span<const std::size_t> rows) const {
  PredictionSet out;
  out.ids = gather(ids, rows);
  out.y_true = gather(y_true, rows);
  out.mu = gather(mu, rows);
  out.sigma = gather(sigma, rows);
  if (groups) out.groups = gather(*groups, rows);
  return out;
}

const LabeledDataset& validate_dataset(const LabeledDataset& d) {
  const auto n = d.targets.size();
  if (n == 0) throw Error(ErrorCode::EmptyInput, "dataset has no rows");
  if (d.n_features == 0) {
    throw Error(ErrorCode::InvalidArgument, "feature dimension must be >= 1");
  }
  check_length(n, d.ids.size(), "ids");
  check_length(n * d.n_features, d.features.size(), "features");
  if (d.groups) check_length(n, d.groups->size(), "groups");
  if (d.true_sigma) check_length(n, d.true_sigma->size(), "true_sigma");
  for (std::size_t i = 0; i < n; ++i) {
    for (double v : d.row(i)) {
      if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, "features", i);
    }
  }
  check_finite(d.targets, "targets");
  check_unique(d.ids);
  return d;
}

const PredictionSet& validate_prediction_set(const PredictionSet& p) {
  const auto n = p.y_true.size();
  check_length(n, p.mu.size(), "mu");
  check_length(n, p.sigma.size(), "sigma");
  check_length(n, p.ids.size(), "ids");
  if (p.groups) check_length(n, p.groups->size(), "groups");
  check_finite(p.y_true, "y_true");
  check_finite(p.mu, "mu");
  check_finite(p.sigma, "sigma");
  for (std::size_t i = 0; i < n; ++i) {
    if (p.sigma[i] < 0.0) throw Error(ErrorCode::NegativeSigma, "", i);
  }
  check_unique(p.ids);
  return p;
}

std::vector<std::vector<std::size_t>> fold_indices(std::size_t n,
                                                   std::size_t k,
                                                   RngSeed seed) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "k must be >= 2");
  if (k > n) {
    throw Error(ErrorCode::KTooLarge, "k = " + std::to_string(k) +
                                          " exceeds N = " + std::to_string(n));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  CounterRng rng(seed);
  shuffle(std::span(order), rng);

  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t i = 0; i < n; ++i) folds[i % k].push_back(order[i]);
  return folds;
}

std::vector<LabeledDataset> split_k_folds(const LabeledDataset& d,
                                          std::size_t k, RngSeed seed) {
  std::vector<LabeledDataset> out;
  for (const auto& rows : fold_indices(d.size(), k, seed)) {
    out.push_back(d.subset(rows));
  }
  return out;
}

}  // namespace uqdesk
