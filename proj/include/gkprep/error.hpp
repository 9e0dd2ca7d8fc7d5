// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace gkpr {

enum class ErrorCode {
  kInvalidArgument = 1,
  kZeroSuccessProbability = 2,
  kSeriesDivergence = 3,
  kNumericFailure = 4,
};

/// Exception carried out of every core routine. The code maps one to one onto
/// the status values of the C interface.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace gkpr

// Argument check; the message is only built when the condition fails.
#define GKPR_REQUIRE(condition, message)                                  \
  do {                                                                    \
    if (!(condition)) ::gkpr::fail(::gkpr::ErrorCode::kInvalidArgument, message); \
  } while (false)
