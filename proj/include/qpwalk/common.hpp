#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace qpwalk {

// Absolute tolerance for probability bookkeeping (stochasticity, zero tests).
inline constexpr double kProbabilityTol = 1e-12;
// Relative tolerance under which two coordinates count as shared.
inline constexpr double kCouplingTol = 1e-9;

enum class ErrorCode {
  kInvalidWalk,
  kInvalidRouting,
  kSingularWalk,
  kComplexRoots,
  kEmptyComponent,
  kUnboundedComponent,
  kInconsistentSingularity,
  kOffCurve,
  kMixedGroup,
  kDegenerateT,
  kNotEligible,
  kStalledAtBranchPoint,
  kDiverged,
  kIllConditioned,
  kNotConverged,
  kTooLarge,
  kInvalidInput,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

template <typename Scalar>
struct Point2 {
  Scalar x{};
  Scalar y{};

  friend bool operator==(const Point2&, const Point2&) = default;
};

using Point = Point2<double>;

// |a - b| <= tol * max(|a|, |b|); exact zeros compare equal only to zero.
inline bool nearly_equal(double a, double b, double rel_tol = kCouplingTol) {
  return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
}

inline bool in_open_unit_square(const Point& p) {
  return p.x > 0.0 && p.x < 1.0 && p.y > 0.0 && p.y < 1.0;
}

}  // namespace qpwalk
