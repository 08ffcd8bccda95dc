#include "uqdesk/uq_methods.hpp"

#include <cmath>
#include <string>

#include "uqdesk/error.hpp"
#include "uqdesk/numerics.hpp"

namespace uqdesk::uq {

namespace {

PredictionSet frame_for(const LabeledDataset& test) {
  PredictionSet p;
  p.ids = test.ids;
  p.y_true = test.targets;
  p.groups = test.groups;
  p.mu.resize(test.size());
  p.sigma.resize(test.size());
  return p;
}

// Mean and Bessel-corrected std of one sample set.
void mean_std(std::span<const double> v, double& mean, double& std) {
  mean = numerics::mean(v);
  std = numerics::sample_std(v);
}

}  // namespace

void aggregate_members(const std::vector<std::vector<double>>& preds,
                       std::vector<double>& mu, std::vector<double>& sigma) {
  if (preds.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "need at least 2 members");
  }
  const auto n = preds.front().size();
  for (std::size_t j = 0; j < preds.size(); ++j) {
    if (preds[j].size() != n) throw Error(ErrorCode::LengthMismatch, "member", j);
  }
  mu.resize(n);
  sigma.resize(n);
  std::vector<double> column(preds.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < preds.size(); ++j) column[j] = preds[j][i];
    mean_std(column, mu[i], sigma[i]);
  }
}

Ensemble train_ensemble(const LabeledDataset& train, const EnsembleSpec& spec) {
  if (spec.k < 2) throw Error(ErrorCode::InvalidArgument, "ensemble k must be >= 2");
  const auto folds = fold_indices(train.size(), spec.k, spec.fold_seed);

  Ensemble e;
  for (std::size_t j = 0; j < spec.k; ++j) {
    std::vector<std::size_t> rows;
    if (spec.member_training == MemberTraining::one_fold_each) {
      rows = folds[j];
    } else {
      for (std::size_t f = 0; f < spec.k; ++f) {
        if (f != j) rows.insert(rows.end(), folds[f].begin(), folds[f].end());
      }
    }
    if (rows.size() < 2) {
      throw Error(ErrorCode::InvalidArgument,
                  "ensemble member would train on fewer than 2 samples", j);
    }
    auto mlp = spec.mlp;
    mlp.seed = spec.mlp.seed.child(j);
    auto tc = spec.train;
    tc.seed = spec.train.seed.child(j);
    try {
      auto result = neural::train(neural::MlpModel::initialize(mlp),
                                  train.subset(rows), tc);
      e.members.push_back(std::move(result.model));
    } catch (const Error& err) {
      throw Error(err.code(), "ensemble member failed: " + std::string(err.what()), j);
    }
  }
  return e;
}

PredictionSet ensemble_predict(const Ensemble& e, const LabeledDataset& test) {
  std::vector<std::vector<double>> preds(e.members.size());
  for (std::size_t j = 0; j < e.members.size(); ++j) {
    const auto& m = e.members[j];
    if (m.output_width() != 1) {
      throw Error(ErrorCode::ShapeMismatch, "ensemble members need a 1-wide head", j);
    }
    preds[j].resize(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
      preds[j][i] = m.forward(test.row(i))[0];
    }
  }
  auto p = frame_for(test);
  if (!test.empty()) aggregate_members(preds, p.mu, p.sigma);
  return p;
}

PredictionSet kfold_ensemble_predict(const LabeledDataset& train,
                                     const LabeledDataset& test,
                                     const EnsembleSpec& spec) {
  return ensemble_predict(train_ensemble(train, spec), test);
}

PredictionSet mc_dropout_predict(const neural::MlpModel& m,
                                 const LabeledDataset& test,
                                 const DropoutSpec& spec) {
  if (spec.samples < 2) {
    throw Error(ErrorCode::InvalidArgument, "MC dropout needs at least 2 samples");
  }
  if (m.output_width() != 1) {
    throw Error(ErrorCode::ShapeMismatch, "MC dropout needs a 1-wide head");
  }
  const double rate = spec.rate.value_or(m.config().dropout_rate);
  auto p = frame_for(test);
  std::vector<double> draws(spec.samples);
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto x = test.row(i);
    for (std::size_t s = 0; s < spec.samples; ++s) {
      draws[s] = m.forward_with_rate(x, rate, spec.seed.child(i, s))[0];
    }
    mean_std(draws, p.mu[i], p.sigma[i]);
  }
  return p;
}

std::vector<EvidentialParams> evidential_parameters(const neural::MlpModel& m,
                                                    const LabeledDataset& test) {
  if (m.output_width() != 4) {
    throw Error(ErrorCode::WrongHeadWidth, "evidential prediction needs a 4-wide head");
  }
  std::vector<EvidentialParams> out;
  out.reserve(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    out.push_back(evidential_head(m.forward(test.row(i))));
  }
  return out;
}

PredictionSet evidential_predict(const neural::MlpModel& m,
                                 const LabeledDataset& test,
                                 const EvidentialSpec& spec) {
  const auto params = evidential_parameters(m, test);
  auto p = frame_for(test);
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto u = evidential_uncertainties(params[i], spec.take_sqrt);
    p.mu[i] = params[i].gamma;
    p.sigma[i] = spec.channel == EvidentialChannel::epistemic ? u.epistemic
                                                              : u.aleatoric;
  }
  return p;
}

}  // namespace uqdesk::uq
