#include "fracsys/errors.h"

namespace fracsys {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonSquare: return "NonSquare";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kNumericalRankAmbiguous: return "NumericalRankAmbiguous";
    case ErrorCode::kCoefficientResidual: return "CoefficientResidual";
    case ErrorCode::kHorizonExceeded: return "HorizonExceeded";
    case ErrorCode::kSeriesDivergence: return "SeriesDivergence";
    case ErrorCode::kQuadratureNonConvergence: return "QuadratureNonConvergence";
    case ErrorCode::kEigenSolverFailure: return "EigenSolverFailure";
    case ErrorCode::kGramianSingular: return "GramianSingular";
    case ErrorCode::kTestDisagreement: return "TestDisagreement";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kSingularCoefficientMatrix: return "SingularCoefficientMatrix";
    case ErrorCode::kAllCandidatesSingular: return "AllCandidatesSingular";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kNonSquare:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kNonFinite:
    case ErrorCode::kParseError:
    case ErrorCode::kHorizonExceeded:
      return 2;
    case ErrorCode::kTestDisagreement:
      return 4;
    default:
      return 3;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace fracsys
