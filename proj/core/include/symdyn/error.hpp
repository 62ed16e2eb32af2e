#pragma once

#include <stdexcept>
#include <string>

namespace symdyn {

enum class ErrorCode {
  kInvalidArgument,  // caller broke a documented precondition
  kUnknownGroup,
  kWindowTooSmall,
  kDomainEscape,
  kAlphabetMismatch,
  kMissingTable,
  kPrecondition,     // a lemma precondition (degree bound, f-index clash, ...)
  kInternal,         // an invariant the library itself should guarantee broke
  kParse,
};

/// Error type thrown by every symdyn operation. The code lets the CLI map
/// failures onto exit statuses without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace symdyn
