#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace uqdesk {

enum class ErrorCode {
  LengthMismatch,
  NonFiniteValue,
  NegativeSigma,
  DuplicateId,
  EmptyInput,
  KTooLarge,
  InvalidArgument,
  DomainError,
  DegenerateSample,
  ConstantTarget,
  ZeroMeanSigma,
  MissingGroups,
  AllSigmaZero,
  FractionTooSmall,
  NonPositiveScalar,
  ShapeMismatch,
  NonFiniteLoss,
  Divergence,
  WrongHeadWidth,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure in the library is reported through this type. `index` names
// the offending element (row, sample, ensemble member, line) when one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> index = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
};

}  // namespace uqdesk
