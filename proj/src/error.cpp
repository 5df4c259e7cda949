#include "shapebias/error.hpp"

namespace shapebias {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Integrity: return "integrity error";
    case ErrorKind::Vocabulary: return "vocabulary error";
    case ErrorKind::Format: return "format error";
    case ErrorKind::Length: return "length error";
    case ErrorKind::Data: return "data error";
    case ErrorKind::Range: return "range error";
    case ErrorKind::Input: return "input error";
    case ErrorKind::UndefinedBias: return "undefined bias";
    case ErrorKind::InsufficientPairs: return "insufficient pairs";
    case ErrorKind::DegenerateActivations: return "degenerate activations";
    case ErrorKind::DegenerateSeries: return "degenerate series";
    case ErrorKind::Dimension: return "dimension error";
    case ErrorKind::Capacity: return "capacity error";
    case ErrorKind::Io: return "I/O error";
  }
  return "error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace shapebias
