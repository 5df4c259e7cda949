#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shapebias {

enum class ErrorKind {
  Parse,
  Integrity,
  Vocabulary,
  Format,
  Length,
  Data,
  Range,
  Input,
  UndefinedBias,
  InsufficientPairs,
  DegenerateActivations,
  DegenerateSeries,
  Dimension,
  Capacity,
  Io,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the engine; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  bool is_io() const noexcept { return kind_ == ErrorKind::Io; }

 private:
  ErrorKind kind_;
};

}  // namespace shapebias
