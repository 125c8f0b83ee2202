#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace commons {

enum class ErrorCode {
  kNonSquare,
  kNegativeWeight,
  kNonzeroDiagonal,
  kZeroOutDegreeRow,
  kRowSumMismatch,
  kTooFewAgents,
  kDimensionMismatch,
  kInvalidParams,
  kNonPositiveResource,
  kInfeasibleEquilibrium,
  kNonFiniteState,
  kInvalidStep,
  kNonSymmetric,
  kInvalidBox,
  kInitialStateOutsideBox,
  kWindowInfeasible,
  kHorizonNotCovered,
  kNonPositiveTheta,
  kNonPositiveDelta,
  kTooFewEdges,
  kTooManyEdges,
  kConnectivityResampleExhausted,
  kAssumptionThreeViolated,
  kParameterResampleExhausted,
  kSchema,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every recoverable failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace commons
