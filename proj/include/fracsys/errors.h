#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fracsys {

enum class ErrorCode {
  kInvalidArgument,
  kNonSquare,
  kDimensionMismatch,
  kNonFinite,
  kNumericalRankAmbiguous,
  kCoefficientResidual,
  kHorizonExceeded,
  kSeriesDivergence,
  kQuadratureNonConvergence,
  kEigenSolverFailure,
  kGramianSingular,
  kTestDisagreement,
  kRankDeficient,
  kSingularCoefficientMatrix,
  kAllCandidatesSingular,
  kParseError,
};

std::string_view to_string(ErrorCode code);

/// Process exit status used by the command-line front end: 2 for input
/// errors, 3 for numerical failures, 4 for internal disagreement.
int exit_status(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace fracsys
