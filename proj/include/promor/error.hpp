#pragma once

#include <stdexcept>
#include <string>

namespace promor {

// Two error classes, matching the CLI exit-code contract:
// BadInput -> exit 2, Internal -> exit 1.
enum class ErrorKind { BadInput, Internal };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_input(const std::string& msg) {
  throw Error(ErrorKind::BadInput, msg);
}

[[noreturn]] inline void fail_internal(const std::string& msg) {
  throw Error(ErrorKind::Internal, msg);
}

}  // namespace promor
