#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uqdesk/data.hpp"
#include "uqdesk/rng.hpp"

namespace uqdesk::neural {

// `linear` exists for analytic checks on dropout expectations.
enum class Activation { relu, tanh, softplus, linear };

enum class Optimizer { sgd };

struct MlpConfig {
  // Input width, one or more hidden widths, then the output width
  // (1 for plain regression, 4 for the evidential head).
  std::vector<std::size_t> layer_widths;
  Activation activation = Activation::relu;
  double dropout_rate = 0.0;  // hidden layers only, in [0, 0.5]
  RngSeed seed{};             // initialization
};

struct LossSpec {
  enum class Kind { squared_error, evidential };
  Kind kind = Kind::squared_error;
  double lambda = 0.0;  // evidential regularizer weight

  static LossSpec squared_error() { return {Kind::squared_error, 0.0}; }
  static LossSpec evidential(double lambda) { return {Kind::evidential, lambda}; }
};

struct TrainConfig {
  std::size_t epochs = 100;
  std::size_t batch_size = 32;
  double learning_rate = 0.01;
  LossSpec loss{};
  Optimizer optimizer = Optimizer::sgd;
  RngSeed seed{};  // batch order and training-time dropout masks
};

struct Layer {
  std::size_t in = 0, out = 0;
  std::vector<double> weights;  // out x in, row-major
  std::vector<double> bias;     // out
};

class MlpModel {
 public:
  MlpModel() = default;

  /// Validates the config and draws Kaiming-style uniform weights
  /// (bound sqrt(6 / fan_in) for ReLU, sqrt(3 / fan_in) otherwise); biases 0.
  static MlpModel initialize(const MlpConfig& config);

  /// Rebuilds a model from stored parameters (checkpoint loading).
  static MlpModel from_layers(const MlpConfig& config, std::vector<Layer> layers);

  const MlpConfig& config() const { return config_; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Layer>& mutable_layers() { return layers_; }

  std::size_t input_width() const { return config_.layer_widths.front(); }
  std::size_t output_width() const { return config_.layer_widths.back(); }
  std::size_t parameter_count() const;

  /// Deterministic forward pass.
  std::vector<double> forward(std::span<const double> x) const;

  /// Forward pass with inverted dropout on every hidden layer at the model's
  /// configured rate when `dropout_active`. The mask is a pure function of
  /// `mask_seed`.
  std::vector<double> forward(std::span<const double> x, bool dropout_active,
                              RngSeed mask_seed) const;

  /// As above with an explicit dropout rate in [0, 1).
  std::vector<double> forward_with_rate(std::span<const double> x, double rate,
                                        RngSeed mask_seed) const;

  bool all_finite() const;

 private:
  MlpConfig config_;
  std::vector<Layer> layers_;
};

// Gradient storage mirrors the layer shapes.
using Gradients = std::vector<Layer>;

struct LossAndGradient {
  double loss = 0.0;
  Gradients grad;
};

// Optional per-sample dropout during gradient evaluation.
struct DropoutMasks {
  double rate = 0.0;
  RngSeed seed{};  // sample i uses seed.child(rows[i])
};

/// Mean loss over `rows` of `batch` and its exact gradient. Throws
/// Error(NonFiniteLoss) naming the offending sample id.
LossAndGradient loss_and_gradient(const MlpModel& m, const LabeledDataset& batch,
                                  std::span<const std::size_t> rows,
                                  const LossSpec& loss,
                                  std::optional<DropoutMasks> dropout = std::nullopt);

/// Convenience overload over every row of `batch`.
LossAndGradient loss_and_gradient(const MlpModel& m, const LabeledDataset& batch,
                                  const LossSpec& loss);

/// Per-sample loss from raw network outputs (shared with the training path).
double sample_loss(std::span<const double> output, double y, const LossSpec& loss);

struct TrainResult {
  MlpModel model;
  std::vector<double> loss_history;  // mean training loss per epoch
  std::vector<std::string> warnings;
};

/// Plain mini-batch SGD with a seeded shuffle per epoch. Dropout is active
/// during training whenever the model's dropout_rate is positive. Throws
/// Error(Divergence) if a parameter becomes non-finite.
TrainResult train(MlpModel m, const LabeledDataset& data, const TrainConfig& cfg);

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

}  // namespace uqdesk::neural
