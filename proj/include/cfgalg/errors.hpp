#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cfgalg {

enum class ErrorCode {
  division_by_zero,
  unknown_value,
  length_mismatch,
  kind_mismatch,
  not_invertible,
  dimension_mismatch,
  schedule_error,
  empty_history,
  index_out_of_range,
  schema_mismatch,
  format_error,
  io_error,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::division_by_zero:
    return "DIVISION_BY_ZERO";
  case ErrorCode::unknown_value:
    return "UNKNOWN_VALUE";
  case ErrorCode::length_mismatch:
    return "LENGTH_MISMATCH";
  case ErrorCode::kind_mismatch:
    return "KIND_MISMATCH";
  case ErrorCode::not_invertible:
    return "NOT_INVERTIBLE";
  case ErrorCode::dimension_mismatch:
    return "DIMENSION_MISMATCH";
  case ErrorCode::schedule_error:
    return "SCHEDULE_ERROR";
  case ErrorCode::empty_history:
    return "EMPTY_HISTORY";
  case ErrorCode::index_out_of_range:
    return "INDEX_OUT_OF_RANGE";
  case ErrorCode::schema_mismatch:
    return "SCHEMA_MISMATCH";
  case ErrorCode::format_error:
    return "FORMAT_ERROR";
  case ErrorCode::io_error:
    return "IO_ERROR";
  }
  return "UNKNOWN";
}

/// Base of every library error. `code()` is the stable machine-readable
/// identity; the message is for humans.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

struct DivisionByZero : Error {
  explicit DivisionByZero(const std::string& m = "strict inverse of zero is undefined")
      : Error(ErrorCode::division_by_zero, m) {}
};

struct UnknownValue : Error {
  explicit UnknownValue(const std::string& m) : Error(ErrorCode::unknown_value, m) {}
};

struct LengthMismatch : Error {
  explicit LengthMismatch(const std::string& m) : Error(ErrorCode::length_mismatch, m) {}
};

struct KindMismatch : Error {
  explicit KindMismatch(const std::string& m) : Error(ErrorCode::kind_mismatch, m) {}
};

/// Raised by strict inversion of an absorbing operator. For multi-component
/// operators `components()` lists every failing slot.
class NotInvertible : public Error {
public:
  explicit NotInvertible(const std::string& m, std::vector<std::size_t> components = {})
      : Error(ErrorCode::not_invertible, m), components_(std::move(components)) {}

  const std::vector<std::size_t>& components() const noexcept { return components_; }

private:
  std::vector<std::size_t> components_;
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& m) : Error(ErrorCode::dimension_mismatch, m) {}
};

struct ScheduleError : Error {
  explicit ScheduleError(const std::string& m) : Error(ErrorCode::schedule_error, m) {}
};

struct EmptyHistory : Error {
  explicit EmptyHistory(const std::string& m = "restore on an empty snapshot stack")
      : Error(ErrorCode::empty_history, m) {}
};

struct IndexOutOfRange : Error {
  explicit IndexOutOfRange(const std::string& m) : Error(ErrorCode::index_out_of_range, m) {}
};

struct SchemaMismatch : Error {
  explicit SchemaMismatch(const std::string& m) : Error(ErrorCode::schema_mismatch, m) {}
};

struct FormatError : Error {
  explicit FormatError(const std::string& m) : Error(ErrorCode::format_error, m) {}
};

struct IoError : Error {
  explicit IoError(const std::string& m) : Error(ErrorCode::io_error, m) {}
};

} // namespace cfgalg
