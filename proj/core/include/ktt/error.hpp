#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ktt {

enum class ErrorCode {
  InvalidInput,
  InfeasibleMoments,
  UndefinedVariance,
  NumericFailure,
  FitFailure,
  OutOfRange,
  ExtractionFailure,
  GenerationFailure,
  Parse,
  UnsupportedVersion,
  UnsupportedKind,
  DegenerateSample,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-checkable category next to the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ktt
