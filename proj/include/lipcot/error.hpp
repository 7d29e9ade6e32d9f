#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lipcot {

enum class ErrorCode {
  DegenerateInput,
  InvalidOrder,
  InvalidLambda,
  FrequencyOutOfRange,
  NonConvergence,
  UnstableModel,
  ZeroNoisePower,
  InsufficientCoefficients,
  DimensionMismatch,
  NonRealizable,
  InvalidArgument,
  TooFewVectors,
  InvalidToken,
  InvalidWindow,
  EmptyCorpus,
  ConfigMismatch,
  LayoutUnsupported,
  Io,
  Parse,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure in the library surfaces as this exception; code() names the
// condition so callers (and tests) can branch on it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lipcot
