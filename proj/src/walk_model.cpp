#include "qpwalk/walk_model.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace qpwalk {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidWalk: return "InvalidWalk";
    case ErrorCode::kInvalidRouting: return "InvalidRouting";
    case ErrorCode::kSingularWalk: return "SingularWalk";
    case ErrorCode::kComplexRoots: return "ComplexRoots";
    case ErrorCode::kEmptyComponent: return "EmptyComponent";
    case ErrorCode::kUnboundedComponent: return "UnboundedComponent";
    case ErrorCode::kInconsistentSingularity: return "InconsistentSingularity";
    case ErrorCode::kOffCurve: return "OffCurve";
    case ErrorCode::kMixedGroup: return "MixedGroup";
    case ErrorCode::kDegenerateT: return "DegenerateT";
    case ErrorCode::kNotEligible: return "NotEligible";
    case ErrorCode::kStalledAtBranchPoint: return "StalledAtBranchPoint";
    case ErrorCode::kDiverged: return "Diverged";
    case ErrorCode::kIllConditioned: return "IllConditioned";
    case ErrorCode::kNotConverged: return "NotConverged";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kInvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

WalkSpec WalkSpec::transposed() const {
  WalkSpec out;
  out.interior = interior.transpose();
  out.horizontal = vertical;
  out.vertical = horizontal;
  return out;
}

std::string ValidationIssue::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case IssueKind::kNonStochastic:
      os << "NonStochastic(" << region << ", residual " << residual << ")";
      break;
    case IssueKind::kNegativeProbability:
      os << "NegativeProbability(" << region << "[" << index0 << "][" << index1 << "] = " << residual
         << ")";
      break;
    case IssueKind::kDegenerate:
      os << "Degenerate(p00 = 1)";
      break;
  }
  return os.str();
}

ValidationResult validate(const WalkSpec& spec) {
  ValidationResult result;
  auto check_entry = [&](const char* region, double value, int i0, int i1) {
    if (!(value >= 0.0 && value <= 1.0)) {
      result.issues.push_back({IssueKind::kNegativeProbability, region, value, i0, i1});
    }
  };
  for (int s = -1; s <= 1; ++s) {
    for (int t = -1; t <= 1; ++t) check_entry("interior", spec.p(s, t), s, t);
    check_entry("horizontal", spec.h(s), s, 0);
    check_entry("vertical", spec.v(s), s, 0);
  }

  const double interior_sum = spec.interior.sum();
  const double up_flux = spec.p(-1, 1) + spec.p(0, 1) + spec.p(1, 1);
  const double right_flux = spec.p(1, -1) + spec.p(1, 0) + spec.p(1, 1);
  const double horizontal_sum = spec.horizontal.sum() + up_flux;
  const double vertical_sum = spec.vertical.sum() + right_flux;
  auto check_sum = [&](const char* region, double sum) {
    if (!(std::abs(sum - 1.0) <= kProbabilityTol)) {
      result.issues.push_back({IssueKind::kNonStochastic, region, std::abs(sum - 1.0), 0, 0});
    }
  };
  check_sum("interior", interior_sum);
  check_sum("horizontal", horizontal_sum);
  check_sum("vertical", vertical_sum);

  if (spec.p(0, 0) >= 1.0 - kProbabilityTol) {
    result.issues.push_back({IssueKind::kDegenerate, "interior", spec.p(0, 0), 0, 0});
  }
  if (result.issues.empty()) result.walk = Walk(spec);
  return result;
}

Walk Walk::from(const WalkSpec& spec) {
  auto result = validate(spec);
  if (!result.ok()) {
    std::string message;
    for (const auto& issue : result.issues) {
      if (!message.empty()) message += "; ";
      message += issue.describe();
    }
    throw Error(ErrorCode::kInvalidWalk, message);
  }
  return *result.walk;
}

Drift drift(const Walk& walk) {
  const auto& p = walk.spec().interior;
  // Rows are s = -1, 0, 1; columns are t = -1, 0, 1.
  return {p.row(2).sum() - p.row(0).sum(), p.col(2).sum() - p.col(0).sum()};
}

char pattern_letter(SingularPattern pattern) {
  return static_cast<char>('a' + static_cast<int>(pattern));
}

namespace {

using Mask = std::array<std::array<bool, 3>, 3>;

// Step sets (s,t) allowed by each singular pattern, p00 excluded.
Mask mask_of(std::initializer_list<std::pair<int, int>> steps) {
  Mask m{};
  for (auto [s, t] : steps) m[s + 1][t + 1] = true;
  return m;
}

bool support_within(const Walk& walk, const Mask& allowed) {
  for (int s = -1; s <= 1; ++s) {
    for (int t = -1; t <= 1; ++t) {
      if (s == 0 && t == 0) continue;
      if (walk.p(s, t) > kProbabilityTol && !allowed[s + 1][t + 1]) return false;
    }
  }
  return true;
}

}  // namespace

SingularClass singular_class(const Walk& walk) {
  // Degree test: Q has x^2 terms only from s = -1, y^2 terms only from t = -1.
  const auto& p = walk.spec().interior;
  const bool x_degree_drops = (p.row(0).array() <= kProbabilityTol).all();
  const bool y_degree_drops = (p.col(0).array() <= kProbabilityTol).all();

  static const std::array<std::pair<SingularPattern, Mask>, 6> kPatterns = {{
      {SingularPattern::kA, mask_of({{1, 1}, {-1, -1}})},
      {SingularPattern::kB, mask_of({{0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}})},
      {SingularPattern::kC, mask_of({{0, -1}, {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}})},
      {SingularPattern::kD, mask_of({{-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}})},
      {SingularPattern::kE, mask_of({{-1, 0}, {-1, -1}, {0, -1}, {1, -1}, {1, 0}})},
      {SingularPattern::kF, mask_of({{1, -1}, {-1, 1}})},
  }};
  for (const auto& [pattern, mask] : kPatterns) {
    if (support_within(walk, mask)) return {pattern};
  }
  if (x_degree_drops) return {SingularPattern::kB};
  if (y_degree_drops) return {SingularPattern::kD};
  return {};
}

WalkSpec from_switch(const SwitchParameters& c) {
  auto positive_prob = [](double x) { return x > 0.0 && x <= 1.0; };
  if (!positive_prob(c.r1) || !positive_prob(c.r2)) {
    throw Error(ErrorCode::kInvalidRouting, "arrival rates must lie in (0, 1]");
  }
  if (!(c.t11 > 0.0 && c.t12 > 0.0 && c.t21 > 0.0 && c.t22 > 0.0)) {
    throw Error(ErrorCode::kInvalidRouting, "routing probabilities must be positive");
  }
  if (std::abs(c.t11 + c.t12 - 1.0) > kProbabilityTol ||
      std::abs(c.t21 + c.t22 - 1.0) > kProbabilityTol) {
    throw Error(ErrorCode::kInvalidRouting, "routing rows must sum to 1");
  }

  WalkSpec w;
  const double both = c.r1 * c.r2;
  // Both jobs routed to server 1 (resp. 2): one is served, one waits.
  w.p(1, -1) = both * c.t11 * c.t21;
  w.p(-1, 1) = both * c.t12 * c.t22;
  w.p(0, 0) = both * (c.t11 * c.t22 + c.t12 * c.t21);
  w.p(0, -1) = c.r1 * (1.0 - c.r2) * c.t11 + c.r2 * (1.0 - c.r1) * c.t21;
  w.p(-1, 0) = c.r1 * (1.0 - c.r2) * c.t12 + c.r2 * (1.0 - c.r1) * c.t22;
  w.p(-1, -1) = (1.0 - c.r1) * (1.0 - c.r2);

  // Idle server: its departure step collapses onto the axis.
  w.h(-1) = w.p(-1, 0) + w.p(-1, -1);
  w.h(1) = w.p(1, -1);
  w.h(0) = 1.0 - w.h(-1) - w.h(1) - (w.p(-1, 1) + w.p(0, 1) + w.p(1, 1));
  w.v(-1) = w.p(0, -1) + w.p(-1, -1);
  w.v(1) = w.p(-1, 1);
  w.v(0) = 1.0 - w.v(-1) - w.v(1) - (w.p(1, -1) + w.p(1, 0) + w.p(1, 1));
  return w;
}

bool has_no_north_east_steps(const Walk& walk) {
  return walk.p(1, 0) <= kProbabilityTol && walk.p(1, 1) <= kProbabilityTol &&
         walk.p(0, 1) <= kProbabilityTol;
}

}  // namespace qpwalk
