#pragma once

#include <stdexcept>
#include <string>

namespace qvor {

enum class ErrorCode {
  kNotSquare,
  kNotHermitian,
  kTraceNotOne,
  kNotPSD,
  kConvergenceFailure,
  kSingularState,
  kSingularSecondArgument,
  kDimensionMismatch,
  kOutsideBall,
  kRadiusOutOfRange,
  kNotUnit,
  kSectionDimension,
  kNotConstrained,
  kDegenerateR,
  kPureRho,
  kIdenticalSites,
  kEmptySites,
  kImpureSite,
  kPointSetMismatch,
  kNonConvergence,
  kGridTooCoarse,
  kImageOutsideBall,
  kInvalidArgument,
  kParseError,
  kIo,
};

const char* to_string(ErrorCode code);

// Every library failure is reported through this type. `magnitude` carries
// the size of the violation when one exists (e.g. the trace defect).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, double magnitude = 0.0)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        magnitude_(magnitude) {}

  ErrorCode code() const noexcept { return code_; }
  double magnitude() const noexcept { return magnitude_; }

 private:
  ErrorCode code_;
  double magnitude_;
};

}  // namespace qvor
