#include "uqdesk/checkpoint.hpp"

#include "uqdesk/error.hpp"

namespace uqdesk::checkpoint {

using nlohmann::json;

std::string to_string(Method m) {
  switch (m) {
    case Method::ensemble: return "ensemble";
    case Method::dropout: return "dropout";
    case Method::evidential: return "evidential";
  }
  return "ensemble";
}

Method method_from_string(const std::string& s) {
  if (s == "ensemble") return Method::ensemble;
  if (s == "dropout") return Method::dropout;
  if (s == "evidential") return Method::evidential;
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + s + "'");
}

json to_json(const Checkpoint& c) {
  json members = json::array();
  for (const auto& m : c.members) {
    const auto& cfg = m.config();
    json layers = json::array();
    for (const auto& l : m.layers()) {
      layers.push_back({{"in", l.in}, {"out", l.out}, {"weights", l.weights},
                        {"bias", l.bias}});
    }
    members.push_back({{"layer_widths", cfg.layer_widths},
                       {"activation", neural::to_string(cfg.activation)},
                       {"dropout_rate", cfg.dropout_rate},
                       {"init_seed", {cfg.seed.seed, cfg.seed.stream_id}},
                       {"layers", layers}});
  }
  return {{"format", "uqdesk-checkpoint"},
          {"version", kFormatVersion},
          {"method", to_string(c.method)},
          {"training", c.training},
          {"members", members}};
}

Checkpoint from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != "uqdesk-checkpoint") {
      throw Error(ErrorCode::ParseError, "not a uqdesk checkpoint");
    }
    if (j.at("version").get<int>() != kFormatVersion) {
      throw Error(ErrorCode::ParseError, "unsupported checkpoint version");
    }
    Checkpoint c;
    c.method = method_from_string(j.at("method").get<std::string>());
    c.training = j.at("training");
    for (const auto& mj : j.at("members")) {
      neural::MlpConfig cfg;
      cfg.layer_widths = mj.at("layer_widths").get<std::vector<std::size_t>>();
      cfg.activation = neural::activation_from_string(mj.at("activation").get<std::string>());
      cfg.dropout_rate = mj.at("dropout_rate").get<double>();
      const auto seed = mj.at("init_seed").get<std::vector<std::uint64_t>>();
      if (seed.size() != 2) throw Error(ErrorCode::ParseError, "init_seed needs 2 values");
      cfg.seed = {seed[0], seed[1]};
      std::vector<neural::Layer> layers;
      for (const auto& lj : mj.at("layers")) {
        layers.push_back({lj.at("in").get<std::size_t>(), lj.at("out").get<std::size_t>(),
                          lj.at("weights").get<std::vector<double>>(),
                          lj.at("bias").get<std::vector<double>>()});
      }
      c.members.push_back(neural::MlpModel::from_layers(cfg, std::move(layers)));
    }
    if (c.members.empty()) throw Error(ErrorCode::ParseError, "checkpoint has no models");
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("checkpoint: ") + e.what());
  }
}

}  // namespace uqdesk::checkpoint
