#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "uqdesk/neural.hpp"

namespace uqdesk::checkpoint {

inline constexpr int kFormatVersion = 1;

enum class Method { ensemble, dropout, evidential };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

// One or more trained networks plus the settings that produced them.
struct Checkpoint {
  Method method = Method::ensemble;
  std::vector<neural::MlpModel> members;
  nlohmann::json training = nlohmann::json::object();
};

nlohmann::json to_json(const Checkpoint& c);
/// Throws Error(ParseError) on unknown format/version or malformed layers.
Checkpoint from_json(const nlohmann::json& j);

}  // namespace uqdesk::checkpoint
