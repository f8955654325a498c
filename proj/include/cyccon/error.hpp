#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cyccon {

enum class ErrorCode {
  // input / parsing
  ParseError,
  InvalidMoment,
  MissingMoment,
  // layout
  ContextArity,
  PropertyDegree,
  UnknownProperty,
  DuplicateProperty,
  MultipleCycles,
  RankTooSmall,
  // realizability
  InfeasibleContext,
  InfeasiblePair,
  InfeasibleTriple,
  MarginalMismatch,
  TooManyVariables,
  // s-function / boxes
  EmptyInput,
  ConservativeModeInapplicable,
  NonPositiveSpacing,
  GridTooLarge,
  // criteria
  NotConsistentlyConnected,
  OverlapViolation,
  NotZeroOverlap,
  // oracle
  RankTooLarge,
  // statistics
  TooFewReplications,
  DomainError,
  ZeroVariance,
};

std::string_view to_string(ErrorCode code);

/// Whether an error is a violated precondition of an otherwise well-formed
/// request (as opposed to malformed or unrealizable input).
bool is_precondition(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> index = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  /// Zero-based context/property/term index the error refers to, if any.
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
};

/// Raised when a construction step that is guaranteed to succeed by the
/// underlying theory fails anyway. Always a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace cyccon
