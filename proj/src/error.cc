#include "amr/error.h"

namespace amr {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnbalancedParens: return "UnbalancedParens";
    case ErrorCode::kDuplicateVariableDefinition:
      return "DuplicateVariableDefinition";
    case ErrorCode::kUndefinedVariableReference:
      return "UndefinedVariableReference";
    case ErrorCode::kEmptyConcept: return "EmptyConcept";
    case ErrorCode::kUnexpectedToken: return "UnexpectedToken";
    case ErrorCode::kMalformedGraph: return "MalformedGraph";
    case ErrorCode::kMalformedDateEntity: return "MalformedDateEntity";
    case ErrorCode::kOverlappingSpans: return "OverlappingSpans";
    case ErrorCode::kSpanOutOfRange: return "SpanOutOfRange";
    case ErrorCode::kEmptyInventory: return "EmptyInventory";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kFormat: return "Format";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kProtocolViolation: return "ProtocolViolation";
    case ErrorCode::kTimeout: return "Timeout";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

ParseError::ParseError(ErrorCode code, std::size_t offset,
                       const std::string &message)
    : Error(code, message + " at byte " + std::to_string(offset)),
      offset_(offset) {}

}  // namespace amr
