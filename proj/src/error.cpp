#include "commons/error.hpp"

namespace commons {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kNonSquare: return "NonSquare";
    case ErrorCode::kNegativeWeight: return "NegativeWeight";
    case ErrorCode::kNonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorCode::kZeroOutDegreeRow: return "ZeroOutDegreeRow";
    case ErrorCode::kRowSumMismatch: return "RowSumMismatch";
    case ErrorCode::kTooFewAgents: return "TooFewAgents";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kNonPositiveResource: return "NonPositiveResource";
    case ErrorCode::kInfeasibleEquilibrium: return "InfeasibleEquilibrium";
    case ErrorCode::kNonFiniteState: return "NonFiniteState";
    case ErrorCode::kInvalidStep: return "InvalidStep";
    case ErrorCode::kNonSymmetric: return "NonSymmetric";
    case ErrorCode::kInvalidBox: return "InvalidBox";
    case ErrorCode::kInitialStateOutsideBox: return "InitialStateOutsideBox";
    case ErrorCode::kWindowInfeasible: return "WindowInfeasible";
    case ErrorCode::kHorizonNotCovered: return "HorizonNotCovered";
    case ErrorCode::kNonPositiveTheta: return "NonPositiveTheta";
    case ErrorCode::kNonPositiveDelta: return "NonPositiveDelta";
    case ErrorCode::kTooFewEdges: return "TooFewEdges";
    case ErrorCode::kTooManyEdges: return "TooManyEdges";
    case ErrorCode::kConnectivityResampleExhausted: return "ConnectivityResampleExhausted";
    case ErrorCode::kAssumptionThreeViolated: return "AssumptionThreeViolated";
    case ErrorCode::kParameterResampleExhausted: return "ParameterResampleExhausted";
    case ErrorCode::kSchema: return "Schema";
  }
  return "Unknown";
}

}  // namespace commons
