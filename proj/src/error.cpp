#include "lipcot/error.hpp"

namespace lipcot {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::InvalidOrder: return "InvalidOrder";
    case ErrorCode::InvalidLambda: return "InvalidLambda";
    case ErrorCode::FrequencyOutOfRange: return "FrequencyOutOfRange";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::UnstableModel: return "UnstableModel";
    case ErrorCode::ZeroNoisePower: return "ZeroNoisePower";
    case ErrorCode::InsufficientCoefficients: return "InsufficientCoefficients";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonRealizable: return "NonRealizable";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::TooFewVectors: return "TooFewVectors";
    case ErrorCode::InvalidToken: return "InvalidToken";
    case ErrorCode::InvalidWindow: return "InvalidWindow";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::ConfigMismatch: return "ConfigMismatch";
    case ErrorCode::LayoutUnsupported: return "LayoutUnsupported";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace lipcot
