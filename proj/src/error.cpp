#include "partisan/error.hpp"

namespace partisan {

std::string_view error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::parse: return "parse";
    case ErrorKind::io: return "io";
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::archive: return "archive";
    case ErrorKind::config: return "config";
    case ErrorKind::data: return "data";
  }
  return "unknown";
}

}  // namespace partisan
