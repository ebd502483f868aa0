#pragma once

#include <stdexcept>
#include <string>

namespace cuspfield {

enum class ErrorCode {
  InvalidArgument = 1,  // precondition on user-supplied data violated
  Parse = 2,            // malformed text input
  Domain = 3,           // mathematically undefined (division by zero, non-unit, ...)
  NotModular = 4,       // input expansion is not in the declared space
  Unsupported = 5,      // outside the implemented scope (weight 1 expansion, ...)
  Io = 6,
  Internal = 7,         // invariant breach; indicates a bug
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace cuspfield
