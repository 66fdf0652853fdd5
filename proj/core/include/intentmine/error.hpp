#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace intentmine {

enum class ErrorCode {
  EmptyDataset,
  DimensionMismatch,
  NonFiniteValue,
  DuplicateId,
  ZeroNormVector,
  IndexOutOfRange,
  EmptyActiveSet,
  InvalidParams,
  KTooLarge,
  LengthMismatch,
  EmptyInput,
  TooFewClasses,
  ParseError,
  IoError,
  LabelsMissing,
};

std::string_view to_string(ErrorCode code) noexcept;

// Single exception type for every library failure. `code()` identifies the
// failure class; the message carries record ids, line numbers, etc.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);
  /// For validation failures tied to one input record (0-based position).
  Error(ErrorCode code, const std::string& detail, std::size_t record);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> record() const noexcept { return record_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> record_;
};

}  // namespace intentmine
