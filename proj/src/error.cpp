#include "todabrane/error.hpp"

namespace tb {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::arity_mismatch: return "ArityMismatch";
    case ErrorCode::singular_matrix: return "SingularMatrix";
    case ErrorCode::zero_diagonal: return "ZeroDiagonal";
    case ErrorCode::singular_scalar_metric: return "SingularScalarMetric";
    case ErrorCode::no_integer_solution: return "NoIntegerSolution";
    case ErrorCode::inconsistent_target: return "Inconsistent";
    case ErrorCode::non_positive_modulus: return "NonPositiveModulus";
    case ErrorCode::step_failure: return "StepFailure";
    case ErrorCode::positivity_loss: return "PositivityLoss";
    case ErrorCode::internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace tb
