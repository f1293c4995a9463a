// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace hypc {

enum class ErrorKind {
  Domain,        // argument outside the operation's domain
  Precondition,  // input violates a stated precondition
  Parse,         // malformed input text
  Io,            // file system failure
  Integrity,     // data contradicts the declared schema
  Capacity,      // configured cap exceeded
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

}  // namespace hypc
