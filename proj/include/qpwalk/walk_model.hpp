#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

#include "qpwalk/common.hpp"

namespace qpwalk {

// Transition law of a homogeneous nearest-neighbour walk on N0^2.
//
// interior(s+1, t+1) is the probability of step (s,t) from a state (i,j), i,j > 0.
// horizontal(s+1) = h_s is the along-axis step from (i,0), i > 0; the upward
// steps from the horizontal axis reuse interior(s+1, 2). vertical(t+1) = v_t
// is the along-axis step from (0,j), j > 0, with rightward steps interior(2, t+1).
// The origin moves to (1,0) w.p. h_1, to (0,1) w.p. v_1, to (1,1) w.p. p_{1,1}.
struct WalkSpec {
  Eigen::Matrix3d interior = Eigen::Matrix3d::Zero();
  Eigen::Vector3d horizontal = Eigen::Vector3d::Zero();
  Eigen::Vector3d vertical = Eigen::Vector3d::Zero();

  double p(int s, int t) const { return interior(s + 1, t + 1); }
  double& p(int s, int t) { return interior(s + 1, t + 1); }
  double h(int s) const { return horizontal(s + 1); }
  double& h(int s) { return horizontal(s + 1); }
  double v(int t) const { return vertical(t + 1); }
  double& v(int t) { return vertical(t + 1); }

  // Mirror image (i,j) -> (j,i).
  WalkSpec transposed() const;
};

enum class IssueKind { kNonStochastic, kNegativeProbability, kDegenerate };

struct ValidationIssue {
  IssueKind kind;
  // "interior", "horizontal", "vertical" for kNonStochastic; the array name
  // for kNegativeProbability.
  std::string region;
  double residual = 0.0;
  int index0 = 0;
  int index1 = 0;

  std::string describe() const;
};

struct ValidationResult;
ValidationResult validate(const WalkSpec& spec);

// A WalkSpec that passed validation. Immutable.
class Walk {
 public:
  const WalkSpec& spec() const noexcept { return spec_; }
  double p(int s, int t) const { return spec_.p(s, t); }
  double h(int s) const { return spec_.h(s); }
  double v(int t) const { return spec_.v(t); }

  // Throws Error(kInvalidWalk) listing every violated invariant.
  static Walk from(const WalkSpec& spec);

  Walk transposed() const { return Walk(spec_.transposed()); }

 private:
  explicit Walk(WalkSpec spec) : spec_(std::move(spec)) {}
  friend ValidationResult validate(const WalkSpec& spec);

  WalkSpec spec_;
};

struct ValidationResult {
  std::optional<Walk> walk;
  std::vector<ValidationIssue> issues;

  bool ok() const { return walk.has_value(); }
};

ValidationResult validate(const WalkSpec& spec);

struct Drift {
  double mx = 0.0;
  double my = 0.0;
};

Drift drift(const Walk& walk);

// Whether the interior law admits an ergodic walk by the drift criterion
// (at least one of mx, my negative). Not a full ergodicity decision.
inline bool drift_allows_ergodicity(const Drift& d) { return d.mx < 0.0 || d.my < 0.0; }

// Patterns a-e are the five classical supports; pattern f (support inside the
// anti-diagonal) makes Q a homogeneous quadratic, which always factors.
enum class SingularPattern { kA, kB, kC, kD, kE, kF };

struct SingularClass {
  std::optional<SingularPattern> pattern;

  bool singular() const { return pattern.has_value(); }
};

char pattern_letter(SingularPattern pattern);

SingularClass singular_class(const Walk& walk);

struct SwitchParameters {
  double r1 = 0.0;
  double r2 = 0.0;
  double t11 = 0.0;
  double t12 = 0.0;
  double t21 = 0.0;
  double t22 = 0.0;
};

// 2x2 clocked switch with Bernoulli arrivals and probabilistic routing.
// Throws Error(kInvalidRouting) on bad routing rows or rates.
WalkSpec from_switch(const SwitchParameters& params);

// Walks with no north, northeast or east interior steps.
bool has_no_north_east_steps(const Walk& walk);

}  // namespace qpwalk
