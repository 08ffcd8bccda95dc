#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "uqdesk/data.hpp"
#include "uqdesk/evidential.hpp"
#include "uqdesk/neural.hpp"
#include "uqdesk/rng.hpp"

namespace uqdesk::uq {

enum class MemberTraining {
  one_fold_each,       // member j trains on fold j only
  leave_one_fold_out,  // member j trains on every fold except j
};

struct EnsembleSpec {
  std::size_t k = 5;
  MemberTraining member_training = MemberTraining::one_fold_each;
  neural::MlpConfig mlp;      // seed is re-derived per member
  neural::TrainConfig train;  // seed is re-derived per member
  RngSeed fold_seed{};
};

struct Ensemble {
  std::vector<neural::MlpModel> members;
};

struct DropoutSpec {
  std::size_t samples = 1000;
  // Overrides the model's configured rate at prediction time when set.
  std::optional<double> rate;
  RngSeed seed{};
};

enum class EvidentialChannel { epistemic, aleatoric };

struct EvidentialSpec {
  EvidentialChannel channel = EvidentialChannel::epistemic;
  bool take_sqrt = false;
};

/// Per-point mean and Bessel-corrected std across members.
/// member_predictions[j][i] is member j's prediction for point i.
void aggregate_members(const std::vector<std::vector<double>>& member_predictions,
                       std::vector<double>& mu, std::vector<double>& sigma);

/// Trains k members on the folds of `train` according to the spec. Member j
/// uses seeds derived from (mlp.seed, j) and (train.seed, j). A member whose
/// training set has fewer than 2 rows is rejected with Error(InvalidArgument,
/// index = member); a member that fails to train rethrows with its index.
Ensemble train_ensemble(const LabeledDataset& train, const EnsembleSpec& spec);

PredictionSet ensemble_predict(const Ensemble& e, const LabeledDataset& test);

PredictionSet kfold_ensemble_predict(const LabeledDataset& train,
                                     const LabeledDataset& test,
                                     const EnsembleSpec& spec);

/// S stochastic forward passes per point with dropout active. Point i,
/// sample s uses the mask stream spec.seed.child(i, s).
PredictionSet mc_dropout_predict(const neural::MlpModel& m,
                                 const LabeledDataset& test,
                                 const DropoutSpec& spec);

/// One forward pass per point; mu = gamma, sigma = the chosen channel.
/// Error(WrongHeadWidth) unless the model has a 4-wide head.
PredictionSet evidential_predict(const neural::MlpModel& m,
                                 const LabeledDataset& test,
                                 const EvidentialSpec& spec = {});

/// Evidential parameters for every test point (diagnostics).
std::vector<EvidentialParams> evidential_parameters(const neural::MlpModel& m,
                                                    const LabeledDataset& test);

}  // namespace uqdesk::uq
