#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "uqdesk/error.hpp"
#include "uqdesk/evidential.hpp"
#include "uqdesk/neural.hpp"
#include "uqdesk/rng.hpp"

using namespace uqdesk;
using namespace uqdesk::neural;

namespace {

LabeledDataset noise_data(std::size_t n, std::size_t d, std::uint64_t seed) {
  CounterRng r({seed, 3});
  LabeledDataset ds;
  ds.n_features = d;
  for (std::size_t i = 0; i < n; ++i) {
    ds.ids.push_back("r" + std::to_string(i));
    for (std::size_t j = 0; j < d; ++j) ds.features.push_back(r.uniform(-1, 1));
    ds.targets.push_back(r.normal());
  }
  return ds;
}

// Relative error with a floor so that near-zero gradients compare absolutely.
double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-3});
}

void check_gradients(Activation act, const LossSpec& loss, std::uint64_t seed,
                     std::optional<DropoutMasks> dropout = std::nullopt) {
  const std::size_t out = loss.kind == LossSpec::Kind::evidential ? 4 : 1;
  auto m = MlpModel::initialize({{3, 5, 4, out}, act, dropout ? dropout->rate : 0.0, {seed, 1}});
  const auto data = noise_data(6, 3, seed);
  std::vector<std::size_t> rows{0, 1, 2, 3, 4, 5};
  const auto g = loss_and_gradient(m, data, rows, loss, dropout);
  double worst = 0.0;
  for (std::size_t l = 0; l < m.layers().size(); ++l) {
    for (std::size_t k = 0; k < m.layers()[l].weights.size(); ++k) {
      const double orig = m.layers()[l].weights[k];
      const double fd = oracle::central_difference(
          [&](double w) {
            m.mutable_layers()[l].weights[k] = w;
            const double v = loss_and_gradient(m, data, rows, loss, dropout).loss;
            m.mutable_layers()[l].weights[k] = orig;
            return v;
          },
          orig, 1e-6);
      worst = std::max(worst, rel_err(g.grad[l].weights[k], fd));
    }
    for (std::size_t k = 0; k < m.layers()[l].bias.size(); ++k) {
      const double orig = m.layers()[l].bias[k];
      const double fd = oracle::central_difference(
          [&](double b) {
            m.mutable_layers()[l].bias[k] = b;
            const double v = loss_and_gradient(m, data, rows, loss, dropout).loss;
            m.mutable_layers()[l].bias[k] = orig;
            return v;
          },
          orig, 1e-6);
      worst = std::max(worst, rel_err(g.grad[l].bias[k], fd));
    }
  }
  EXPECT_LT(worst, 1e-4) << to_string(act) << " seed " << seed;
}

}  // namespace

TEST(Forward, ZeroWeightsGiveZeroOutput) {
  auto m = MlpModel::initialize({{3, 8, 8, 1}, Activation::relu, 0.0, {1, 0}});
  for (auto& l : m.mutable_layers()) {
    std::fill(l.weights.begin(), l.weights.end(), 0.0);
  }
  const std::vector<double> x{0.5, -1.0, 2.0};
  EXPECT_EQ(m.forward(x)[0], 0.0);
}

TEST(Forward, LinearNetworkMatchesMatrixProduct) {
  MlpConfig cfg{{2, 2, 1}, Activation::linear, 0.0, {}};
  std::vector<Layer> layers{{2, 2, {1, 2, 3, 4}, {0.5, -0.5}}, {2, 1, {1, -1}, {2}}};
  const auto m = MlpModel::from_layers(cfg, layers);
  const std::vector<double> x{1, 1};
  // hidden = (3.5, 6.5); out = 3.5 - 6.5 + 2
  EXPECT_DOUBLE_EQ(m.forward(x)[0], -1.0);
}

TEST(Forward, DropoutRateZeroIsDeterministicForward) {
  const auto m = MlpModel::initialize({{4, 16, 16, 1}, Activation::relu, 0.0, {2, 0}});
  const std::vector<double> x{0.1, 0.2, -0.3, 0.4};
  const double ref = m.forward(x)[0];
  for (std::uint64_t s = 0; s < 20; ++s) {
    EXPECT_EQ(m.forward_with_rate(x, 0.0, {s, 1})[0], ref);
    EXPECT_EQ(m.forward(x, true, {s, 1})[0], ref);
  }
}

TEST(Forward, DropoutMaskIsPureFunctionOfSeed) {
  const auto m = MlpModel::initialize({{4, 16, 16, 1}, Activation::relu, 0.3, {3, 0}});
  const std::vector<double> x{0.1, 0.2, -0.3, 0.4};
  EXPECT_EQ(m.forward(x, true, {9, 9})[0], m.forward(x, true, {9, 9})[0]);
  EXPECT_NE(m.forward(x, true, {9, 9})[0], m.forward(x, true, {9, 10})[0]);
  EXPECT_EQ(m.forward(x, false, {9, 9})[0], m.forward(x)[0]);
}

TEST(Forward, InvertedDropoutPreservesLinearExpectation) {
  const auto m = MlpModel::initialize({{2, 32, 1}, Activation::linear, 0.0, {4, 0}});
  const std::vector<double> x{0.7, -0.4};
  const double ref = m.forward(x)[0];
  double sum = 0.0;
  const int n = 200000;
  for (int s = 0; s < n; ++s) sum += m.forward_with_rate(x, 0.2, {5, static_cast<std::uint64_t>(s)})[0];
  EXPECT_NEAR(sum / n, ref, 0.01 * std::max(1.0, std::abs(ref)));
}

TEST(Forward, ShapeMismatch) {
  const auto m = MlpModel::initialize({{3, 4, 1}, Activation::relu, 0.0, {}});
  const std::vector<double> x{1.0, 2.0};
  try {
    m.forward(x);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
}

TEST(Gradient, SquaredErrorMatchesFiniteDifferences) {
  for (auto act : {Activation::relu, Activation::tanh, Activation::softplus}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      check_gradients(act, LossSpec::squared_error(), seed);
    }
  }
}

TEST(Gradient, EvidentialMatchesFiniteDifferences) {
  for (double lambda : {0.0, 0.05, 0.2}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      check_gradients(Activation::tanh, LossSpec::evidential(lambda), seed);
      check_gradients(Activation::softplus, LossSpec::evidential(lambda), seed + 100);
    }
  }
}

TEST(Gradient, WithFixedDropoutMasks) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    check_gradients(Activation::tanh, LossSpec::squared_error(), seed,
                    DropoutMasks{0.3, {seed, 77}});
  }
}

TEST(Loss, SampleLossMatchesHeadLoss) {
  CounterRng r({12, 0});
  for (int i = 0; i < 100; ++i) {
    const std::vector<double> raw{r.normal(), r.normal(), r.normal(), r.normal()};
    const double y = r.normal();
    const double lambda = r.uniform(0, 0.3);
    EXPECT_NEAR(sample_loss(raw, y, LossSpec::evidential(lambda)),
                uq::evidential_loss(raw, y, lambda).value, 1e-12);
  }
  const std::vector<double> out{1.5};
  EXPECT_DOUBLE_EQ(sample_loss(out, 0.5, LossSpec::squared_error()), 1.0);
}

TEST(Train, FitsLinearFunction) {
  LabeledDataset ds;
  ds.n_features = 1;
  CounterRng r({13, 0});
  for (int i = 0; i < 256; ++i) {
    const double x = r.uniform(-1, 1);
    ds.ids.push_back(std::to_string(i));
    ds.features.push_back(x);
    ds.targets.push_back(2 * x + 1);
  }
  const auto m = MlpModel::initialize({{1, 16, 1}, Activation::tanh, 0.0, {14, 0}});
  TrainConfig cfg;
  cfg.epochs = 300;
  cfg.batch_size = 16;
  cfg.learning_rate = 0.05;
  cfg.seed = {15, 0};
  const auto res = train(m, ds, cfg);
  EXPECT_LT(res.loss_history.back(), 1e-3);
  EXPECT_LT(loss_and_gradient(res.model, ds, LossSpec::squared_error()).loss, 1e-3);
}

TEST(Train, ZeroEpochsReturnsInitialModel) {
  const auto ds = noise_data(20, 2, 16);
  const auto m = MlpModel::initialize({{2, 4, 1}, Activation::relu, 0.0, {17, 0}});
  TrainConfig cfg;
  cfg.epochs = 0;
  const auto res = train(m, ds, cfg);
  EXPECT_TRUE(res.loss_history.empty());
  EXPECT_EQ(res.model.layers()[0].weights, m.layers()[0].weights);
}

TEST(Train, DeterministicAndMonotoneOnFullBatch) {
  const auto ds = noise_data(64, 3, 18);
  const auto m = MlpModel::initialize({{3, 8, 1}, Activation::tanh, 0.0, {19, 0}});
  TrainConfig cfg;
  cfg.epochs = 50;
  cfg.batch_size = 64;
  cfg.learning_rate = 0.01;
  cfg.seed = {20, 0};
  const auto a = train(m, ds, cfg);
  const auto b = train(m, ds, cfg);
  EXPECT_EQ(a.loss_history, b.loss_history);
  EXPECT_EQ(a.model.layers()[1].weights, b.model.layers()[1].weights);
  for (std::size_t e = 1; e < a.loss_history.size(); ++e) {
    EXPECT_LE(a.loss_history[e], a.loss_history[e - 1]);
  }
}

TEST(Train, DivergenceIsReported) {
  auto ds = noise_data(32, 2, 21);
  for (auto& y : ds.targets) y *= 1e200;
  const auto m = MlpModel::initialize({{2, 8, 1}, Activation::relu, 0.0, {22, 0}});
  TrainConfig cfg;
  cfg.epochs = 20;
  cfg.learning_rate = 10.0;
  try {
    train(m, ds, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.code() == ErrorCode::Divergence || e.code() == ErrorCode::NonFiniteLoss);
  }
}

TEST(Config, InvalidConfigurations) {
  EXPECT_THROW(MlpModel::initialize({{3}, Activation::relu, 0.0, {}}), Error);
  EXPECT_THROW(MlpModel::initialize({{3, 0, 1}, Activation::relu, 0.0, {}}), Error);
  EXPECT_THROW(MlpModel::initialize({{3, 4, 1}, Activation::relu, 0.6, {}}), Error);
  EXPECT_EQ(activation_from_string(to_string(Activation::softplus)), Activation::softplus);
  EXPECT_THROW(activation_from_string("sigmoidish"), Error);
}
