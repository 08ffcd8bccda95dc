#include "uqdesk/neural.hpp"

#include <cmath>
#include <numeric>

#include "uqdesk/error.hpp"
#include "uqdesk/evidential.hpp"

namespace uqdesk::neural {

namespace {

double activate(Activation a, double v) {
  switch (a) {
    case Activation::relu: return v > 0.0 ? v : 0.0;
    case Activation::tanh: return std::tanh(v);
    case Activation::softplus: return uq::softplus(v);
    case Activation::linear: return v;
  }
  return v;
}

double activate_grad(Activation a, double pre) {
  switch (a) {
    case Activation::relu: return pre > 0.0 ? 1.0 : 0.0;
    case Activation::tanh: {
      const double t = std::tanh(pre);
      return 1.0 - t * t;
    }
    case Activation::softplus: return uq::sigmoid(pre);
    case Activation::linear: return 1.0;
  }
  return 1.0;
}

void validate_config(const MlpConfig& c) {
  if (c.layer_widths.size() < 3) {
    throw Error(ErrorCode::InvalidArgument,
                "MLP needs an input width, >= 1 hidden width and an output width");
  }
  for (std::size_t i = 0; i < c.layer_widths.size(); ++i) {
    if (c.layer_widths[i] == 0) {
      throw Error(ErrorCode::InvalidArgument, "layer width must be positive", i);
    }
  }
  const auto out = c.layer_widths.back();
  if (out != 1 && out != 4) {
    throw Error(ErrorCode::InvalidArgument, "output width must be 1 or 4");
  }
  if (!(c.dropout_rate >= 0.0 && c.dropout_rate <= 0.5)) {
    throw Error(ErrorCode::InvalidArgument, "dropout_rate must lie in [0, 0.5]");
  }
}

// Per-sample activations kept for the backward pass.
struct Trace {
  std::vector<std::vector<double>> pre;   // per layer, pre-activation
  std::vector<std::vector<double>> post;  // post[0] = input; post[l+1] = layer l out
  std::vector<std::vector<double>> mask;  // per hidden layer
};

void run(const MlpModel& m, std::span<const double> x, double rate,
         RngSeed mask_seed, Trace& t) {
  const auto& layers = m.layers();
  if (x.size() != m.input_width()) {
    throw Error(ErrorCode::ShapeMismatch,
                "input has " + std::to_string(x.size()) + " features, model expects " +
                    std::to_string(m.input_width()));
  }
  const auto act = m.config().activation;
  const std::size_t L = layers.size();
  t.pre.resize(L);
  t.post.resize(L + 1);
  t.mask.resize(L - 1);
  t.post[0].assign(x.begin(), x.end());

  const bool drop = rate > 0.0;
  std::optional<CounterRng> rng;
  if (drop) rng.emplace(mask_seed);
  const double keep_scale = drop ? 1.0 / (1.0 - rate) : 1.0;

  for (std::size_t l = 0; l < L; ++l) {
    const auto& layer = layers[l];
    const auto& in = t.post[l];
    auto& pre = t.pre[l];
    pre.resize(layer.out);
    for (std::size_t o = 0; o < layer.out; ++o) {
      const double* w = layer.weights.data() + o * layer.in;
      double acc = layer.bias[o];
      for (std::size_t i = 0; i < layer.in; ++i) acc += w[i] * in[i];
      pre[o] = acc;
    }
    auto& post = t.post[l + 1];
    if (l + 1 == L) {
      post = pre;
      break;
    }
    post.resize(layer.out);
    auto& mask = t.mask[l];
    mask.assign(layer.out, 1.0);
    for (std::size_t o = 0; o < layer.out; ++o) {
      if (drop) mask[o] = rng->uniform() < rate ? 0.0 : keep_scale;
      post[o] = activate(act, pre[o]) * mask[o];
    }
  }
}

// Accumulates d loss / d params for one traced sample into `g`, given
// d loss / d output.
void backward(const MlpModel& m, const Trace& t, std::vector<double> delta,
              Gradients& g) {
  const auto& layers = m.layers();
  const auto act = m.config().activation;
  for (std::size_t l = layers.size(); l-- > 0;) {
    const auto& layer = layers[l];
    const auto& in = t.post[l];
    auto& gl = g[l];
    for (std::size_t o = 0; o < layer.out; ++o) {
      const double d = delta[o];
      gl.bias[o] += d;
      if (d == 0.0) continue;
      double* gw = gl.weights.data() + o * layer.in;
      for (std::size_t i = 0; i < layer.in; ++i) gw[i] += d * in[i];
    }
    if (l == 0) break;
    std::vector<double> prev(layer.in, 0.0);
    for (std::size_t o = 0; o < layer.out; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      const double* w = layer.weights.data() + o * layer.in;
      for (std::size_t i = 0; i < layer.in; ++i) prev[i] += w[i] * d;
    }
    const auto& pre = t.pre[l - 1];
    const auto& mask = t.mask[l - 1];
    for (std::size_t i = 0; i < layer.in; ++i) {
      if (mask[i] == 0.0) {
        prev[i] = 0.0;
        continue;
      }
      prev[i] *= mask[i] * activate_grad(act, pre[i]);
    }
    delta = std::move(prev);
  }
}

Gradients zero_like(const std::vector<Layer>& layers) {
  Gradients g;
  g.reserve(layers.size());
  for (const auto& l : layers) {
    g.push_back({l.in, l.out, std::vector<double>(l.weights.size(), 0.0),
                 std::vector<double>(l.bias.size(), 0.0)});
  }
  return g;
}

// d loss / d output for one sample.
double loss_with_output_grad(std::span<const double> out, double y,
                             const LossSpec& loss, std::vector<double>& grad) {
  grad.assign(out.size(), 0.0);
  if (loss.kind == LossSpec::Kind::squared_error) {
    if (out.size() != 1) {
      throw Error(ErrorCode::ShapeMismatch, "squared error needs a 1-wide output");
    }
    const double e = out[0] - y;
    grad[0] = 2.0 * e;
    return e * e;
  }
  const auto h = uq::evidential_loss(out, y, loss.lambda);
  for (std::size_t k = 0; k < 4; ++k) grad[k] = h.grad[k];
  return h.value;
}

}  // namespace

std::string to_string(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::softplus: return "softplus";
    case Activation::linear: return "linear";
  }
  return "relu";
}

Activation activation_from_string(const std::string& s) {
  if (s == "relu") return Activation::relu;
  if (s == "tanh") return Activation::tanh;
  if (s == "softplus") return Activation::softplus;
  if (s == "linear") return Activation::linear;
  throw Error(ErrorCode::InvalidArgument, "unknown activation '" + s + "'");
}

MlpModel MlpModel::initialize(const MlpConfig& config) {
  validate_config(config);
  MlpModel m;
  m.config_ = config;
  CounterRng rng(config.seed);
  const auto& w = config.layer_widths;
  for (std::size_t l = 0; l + 1 < w.size(); ++l) {
    Layer layer{w[l], w[l + 1], std::vector<double>(w[l] * w[l + 1]),
                std::vector<double>(w[l + 1], 0.0)};
    const bool hidden_relu =
        config.activation == Activation::relu && l + 2 < w.size();
    const double bound =
        std::sqrt((hidden_relu ? 6.0 : 3.0) / static_cast<double>(w[l]));
    for (auto& v : layer.weights) v = rng.uniform(-bound, bound);
    m.layers_.push_back(std::move(layer));
  }
  return m;
}

MlpModel MlpModel::from_layers(const MlpConfig& config, std::vector<Layer> layers) {
  validate_config(config);
  const auto& w = config.layer_widths;
  if (layers.size() + 1 != w.size()) {
    throw Error(ErrorCode::ShapeMismatch, "layer count does not match widths");
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    if (layer.in != w[l] || layer.out != w[l + 1] ||
        layer.weights.size() != layer.in * layer.out ||
        layer.bias.size() != layer.out) {
      throw Error(ErrorCode::ShapeMismatch, "layer shape mismatch", l);
    }
  }
  MlpModel m;
  m.config_ = config;
  m.layers_ = std::move(layers);
  if (!m.all_finite()) {
    throw Error(ErrorCode::NonFiniteValue, "model parameters are not finite");
  }
  return m;
}

std::size_t MlpModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.weights.size() + l.bias.size();
  return n;
}

std::vector<double> MlpModel::forward(std::span<const double> x) const {
  Trace t;
  run(*this, x, 0.0, {}, t);
  return std::move(t.post.back());
}

std::vector<double> MlpModel::forward(std::span<const double> x,
                                      bool dropout_active,
                                      RngSeed mask_seed) const {
  Trace t;
  run(*this, x, dropout_active ? config_.dropout_rate : 0.0, mask_seed, t);
  return std::move(t.post.back());
}

std::vector<double> MlpModel::forward_with_rate(std::span<const double> x,
                                                double rate,
                                                RngSeed mask_seed) const {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "dropout rate must lie in [0, 1)");
  }
  Trace t;
  run(*this, x, rate, mask_seed, t);
  return std::move(t.post.back());
}

bool MlpModel::all_finite() const {
  for (const auto& l : layers_) {
    for (double v : l.weights) if (!std::isfinite(v)) return false;
    for (double v : l.bias) if (!std::isfinite(v)) return false;
  }
  return true;
}

double sample_loss(std::span<const double> output, double y, const LossSpec& loss) {
  std::vector<double> unused;
  return loss_with_output_grad(output, y, loss, unused);
}

LossAndGradient loss_and_gradient(const MlpModel& m, const LabeledDataset& batch,
                                  std::span<const std::size_t> rows,
                                  const LossSpec& loss,
                                  std::optional<DropoutMasks> dropout) {
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "empty batch");
  LossAndGradient out{0.0, zero_like(m.layers())};
  Trace t;
  std::vector<double> out_grad;
  for (auto r : rows) {
    const double rate = dropout ? dropout->rate : 0.0;
    const RngSeed mask_seed = dropout ? dropout->seed.child(r) : RngSeed{};
    run(m, batch.row(r), rate, mask_seed, t);
    const double l = loss_with_output_grad(t.post.back(), batch.targets[r], loss,
                                           out_grad);
    if (!std::isfinite(l)) {
      throw Error(ErrorCode::NonFiniteLoss, "sample id '" + batch.ids[r] + "'", r);
    }
    out.loss += l;
    backward(m, t, out_grad, out.grad);
  }
  const double scale = 1.0 / static_cast<double>(rows.size());
  out.loss *= scale;
  for (auto& g : out.grad) {
    for (auto& v : g.weights) v *= scale;
    for (auto& v : g.bias) v *= scale;
  }
  return out;
}

LossAndGradient loss_and_gradient(const MlpModel& m, const LabeledDataset& batch,
                                  const LossSpec& loss) {
  std::vector<std::size_t> rows(batch.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return loss_and_gradient(m, batch, rows, loss);
}

TrainResult train(MlpModel m, const LabeledDataset& data, const TrainConfig& cfg) {
  if (data.empty()) throw Error(ErrorCode::EmptyInput, "training set is empty");
  if (cfg.batch_size == 0) throw Error(ErrorCode::InvalidArgument, "batch_size must be > 0");
  if (!(cfg.learning_rate > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "learning_rate must be > 0");
  }
  if (cfg.loss.kind == LossSpec::Kind::evidential && m.output_width() != 4) {
    throw Error(ErrorCode::WrongHeadWidth, "evidential loss needs a 4-wide head");
  }
  if (cfg.loss.kind == LossSpec::Kind::squared_error && m.output_width() != 1) {
    throw Error(ErrorCode::ShapeMismatch, "squared error needs a 1-wide head");
  }
  if (cfg.loss.lambda < 0.0) throw Error(ErrorCode::InvalidArgument, "lambda must be >= 0");

  TrainResult res;
  if (cfg.loss.kind == LossSpec::Kind::evidential && cfg.loss.lambda > 0.2) {
    res.warnings.push_back("lambda > 0.2 is known to cause convergence problems");
  }
  std::vector<std::size_t> order(data.size());
  const double rate = m.config().dropout_rate;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    CounterRng rng(cfg.seed.child(epoch));
    shuffle(std::span(order), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const auto len = std::min(cfg.batch_size, order.size() - start);
      std::span<const std::size_t> rows(order.data() + start, len);
      std::optional<DropoutMasks> masks;
      if (rate > 0.0) masks = DropoutMasks{rate, cfg.seed.child(epoch, 0x6d61736bULL)};
      auto lg = loss_and_gradient(m, data, rows, cfg.loss, masks);
      epoch_loss += lg.loss * static_cast<double>(len);
      auto& layers = m.mutable_layers();
      for (std::size_t l = 0; l < layers.size(); ++l) {
        for (std::size_t i = 0; i < layers[l].weights.size(); ++i) {
          layers[l].weights[i] -= cfg.learning_rate * lg.grad[l].weights[i];
        }
        for (std::size_t i = 0; i < layers[l].bias.size(); ++i) {
          layers[l].bias[i] -= cfg.learning_rate * lg.grad[l].bias[i];
        }
      }
      if (!m.all_finite()) {
        throw Error(ErrorCode::Divergence, "non-finite parameters after SGD step",
                    epoch);
      }
    }
    res.loss_history.push_back(epoch_loss / static_cast<double>(data.size()));
  }
  res.model = std::move(m);
  return res;
}

}  // namespace uqdesk::neural
