#include "cyccon/error.hpp"

namespace cyccon {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidMoment: return "InvalidMoment";
    case ErrorCode::MissingMoment: return "MissingMoment";
    case ErrorCode::ContextArity: return "ContextArity";
    case ErrorCode::PropertyDegree: return "PropertyDegree";
    case ErrorCode::UnknownProperty: return "UnknownProperty";
    case ErrorCode::DuplicateProperty: return "DuplicateProperty";
    case ErrorCode::MultipleCycles: return "MultipleCycles";
    case ErrorCode::RankTooSmall: return "RankTooSmall";
    case ErrorCode::InfeasibleContext: return "InfeasibleContext";
    case ErrorCode::InfeasiblePair: return "InfeasiblePair";
    case ErrorCode::InfeasibleTriple: return "InfeasibleTriple";
    case ErrorCode::MarginalMismatch: return "MarginalMismatch";
    case ErrorCode::TooManyVariables: return "TooManyVariables";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ConservativeModeInapplicable: return "ConservativeModeInapplicable";
    case ErrorCode::NonPositiveSpacing: return "NonPositiveSpacing";
    case ErrorCode::GridTooLarge: return "GridTooLarge";
    case ErrorCode::NotConsistentlyConnected: return "NotConsistentlyConnected";
    case ErrorCode::OverlapViolation: return "OverlapViolation";
    case ErrorCode::NotZeroOverlap: return "NotZeroOverlap";
    case ErrorCode::RankTooLarge: return "RankTooLarge";
    case ErrorCode::TooFewReplications: return "TooFewReplications";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
  }
  return "Unknown";
}

bool is_precondition(ErrorCode code) {
  switch (code) {
    case ErrorCode::MultipleCycles:
    case ErrorCode::NotConsistentlyConnected:
    case ErrorCode::OverlapViolation:
    case ErrorCode::NotZeroOverlap:
    case ErrorCode::RankTooLarge:
    case ErrorCode::ConservativeModeInapplicable:
    case ErrorCode::NonPositiveSpacing:
    case ErrorCode::GridTooLarge:
    case ErrorCode::TooManyVariables:
    case ErrorCode::ZeroVariance:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> index)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      index_(index) {}

}  // namespace cyccon
