#pragma once

#include <stdexcept>
#include <string>

namespace nearsing {

enum class ErrorCode {
  kInvalidArgument = 1,
  kDegenerateElement = 2,
  kSingularEvaluation = 3,
  kNoConvergence = 4,
  kIo = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nearsing
