#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace partisan {

/// Coarse classification of failures. The CLI prints the kind as the first
/// field of its one-line error report.
enum class ErrorKind {
  invalid_argument,
  parse,
  io,
  dimension,
  archive,
  config,
  data,
};

std::string_view error_kind_name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace partisan
