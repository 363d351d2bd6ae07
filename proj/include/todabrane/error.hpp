#pragma once

#include <stdexcept>
#include <string>

namespace tb {

/// Error categories shared by the C++ core and the C API.
enum class ErrorCode {
  invalid_argument,
  parse_error,
  arity_mismatch,
  singular_matrix,
  zero_diagonal,
  singular_scalar_metric,
  no_integer_solution,
  inconsistent_target,
  non_positive_modulus,
  step_failure,
  positivity_loss,
  internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace tb
