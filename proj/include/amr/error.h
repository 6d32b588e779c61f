#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace amr {

enum class ErrorCode {
  // Penman input.
  kUnbalancedParens,
  kDuplicateVariableDefinition,
  kUndefinedVariableReference,
  kEmptyConcept,
  kUnexpectedToken,
  // Graph construction.
  kMalformedGraph,
  // Preprocessing.
  kMalformedDateEntity,
  kOverlappingSpans,
  kSpanOutOfRange,
  // Linearization.
  kEmptyInventory,
  // Corpus and metrics.
  kEmptyCorpus,
  kLengthMismatch,
  kInvalidArgument,
  // File formats.
  kFormat,
  kIo,
  // Model boundary.
  kProtocolViolation,
  kTimeout,
};

std::string_view ErrorCodeName(ErrorCode code);

// True for failures that originate on the far side of the model interface.
inline bool IsModelError(ErrorCode code) {
  return code == ErrorCode::kProtocolViolation || code == ErrorCode::kTimeout;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Penman syntax error with the byte offset of the offending input.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t offset, const std::string &message);

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace amr
