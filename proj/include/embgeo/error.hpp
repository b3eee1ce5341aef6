#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace embgeo {

enum class ErrorCode {
  DimensionMismatch,
  PairCountMismatch,
  NonFiniteValue,
  ZeroNormRow,
  DuplicateId,
  FileNotFound,
  IoError,
  FormatError,
  ParseError,
  DuplicateKey,
  EmptyLine,
  Utf8Error,
  KTooLarge,
  InvalidParameter,
  RankDeficient,
  TooFewRows,
  DegenerateProfile,
  NegativeEntry,
  ZeroMean,
  TooShort,
  LengthMismatch,
  ConstantInput,
  NonSquare,
  IndexOutOfRange,
  InvalidSpec,
  JoinError,
  TooFewSamples,
};

std::string_view to_string(ErrorCode code);

// Every typed failure in the library is reported through this one exception.
// Row/column are filled for errors that point at a matrix cell or file line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> row = std::nullopt,
        std::optional<std::size_t> col = std::nullopt)
      : std::runtime_error(message), code_(code), row_(row), col_(col) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> row() const noexcept { return row_; }
  std::optional<std::size_t> col() const noexcept { return col_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> row_;
  std::optional<std::size_t> col_;
};

}  // namespace embgeo
