#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace novikit {

enum class ErrorCode {
  Syntax,
  UndeclaredGenerator,
  MalformedRelation,
  InconsistentPresentation,
  CollectionBudget,
  CharacterInconsistent,
  ZeroCharacter,
  MismatchedPresentation,
  MismatchedCharacter,
  ZeroElement,
  PrecisionTooLow,
  ZeroBelowPrecision,
  NotAUnit,
  NotUPositive,
  ShapeMismatch,
  DSquaredNonzero,
  RelatorNotTrivial,
  NotUnimodular,
  NotAManifold,
  RepresentationInconsistent,
  PreconditionFailed,
  PrecisionExhausted,
  InvalidArgument,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace novikit
