#pragma once

#include <stdexcept>
#include <string>

namespace ahe {

enum class ErrorCode {
  kOutsideDomain,
  kNotPositiveDefinite,
  kNonFinite,
  kDegeneratePlane,
  kInvalidParameter,
  kNotConformallyCompact,
  kNoConvergence,
  kIllConditioned,
  kOutOfRange,
  kMissingIndex,
  kUsage,
};

const char* to_string(ErrorCode code);

/// Single exception type for the library; `code()` distinguishes the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ahe
