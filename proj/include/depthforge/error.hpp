#pragma once

#include <stdexcept>
#include <string>

namespace depthforge {

enum class ErrorKind {
  invalid_argument,
  dimension_mismatch,
  malformed_data,
  numerical,
  rank_deficient,
  io,
};

/// Exception type for every failure raised by the library. The kind lets
/// callers (the CLI in particular) map failures onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace depthforge
