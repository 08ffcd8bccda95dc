#include "uqdesk/error.hpp"

namespace uqdesk {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NegativeSigma: return "NegativeSigma";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::ConstantTarget: return "ConstantTarget";
    case ErrorCode::ZeroMeanSigma: return "ZeroMeanSigma";
    case ErrorCode::MissingGroups: return "MissingGroups";
    case ErrorCode::AllSigmaZero: return "AllSigmaZero";
    case ErrorCode::FractionTooSmall: return "FractionTooSmall";
    case ErrorCode::NonPositiveScalar: return "NonPositiveScalar";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::Divergence: return "Divergence";
    case ErrorCode::WrongHeadWidth: return "WrongHeadWidth";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {
std::string decorate(ErrorCode code, const std::string& message,
                     std::optional<std::size_t> index) {
  std::string out(to_string(code));
  if (index) out += " at index " + std::to_string(*index);
  if (!message.empty()) out += ": " + message;
  return out;
}
}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> index)
    : std::runtime_error(decorate(code, message, index)),
      code_(code),
      index_(index) {}

}  // namespace uqdesk
