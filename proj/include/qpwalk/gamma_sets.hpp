#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qpwalk/common.hpp"
#include "qpwalk/walk_model.hpp"

namespace qpwalk {

// alpha * rho^i * sigma^j
struct WeightedTerm {
  double rho = 0.0;
  double sigma = 0.0;
  double alpha = 1.0;

  Point point() const { return {rho, sigma}; }
};

// A finite set of weighted geometric terms. When `origin` is set it replaces
// the value at (0,0), where sum(alpha) need not converge.
struct GammaSet {
  std::vector<WeightedTerm> terms;
  double tol = kCouplingTol;
  std::optional<double> origin;

  std::size_t size() const { return terms.size(); }
  // sum |alpha| / ((1 - rho)(1 - sigma))
  double norm() const;
  // Total mass over N0^2.
  double mass() const;
  double value(int i, int j) const;
};

// Violated GammaSet invariants (coordinates in (0,1), alpha != 0, no
// duplicated pair); empty when valid.
std::vector<std::string> gamma_set_issues(const GammaSet& g);

using IndexGroups = std::vector<std::vector<int>>;

struct PartitionResult {
  IndexGroups h_groups;  // shared rho
  IndexGroups v_groups;  // shared sigma
  IndexGroups g_groups;  // shared rho or sigma

  int h_count() const { return static_cast<int>(h_groups.size()); }
  int v_count() const { return static_cast<int>(v_groups.size()); }
  int g_count() const { return static_cast<int>(g_groups.size()); }

  friend bool operator==(const PartitionResult&, const PartitionResult&) = default;
};

// Groups sorted ascending, ordered by smallest member.
PartitionResult maximal_partitions(const GammaSet& g);

// Sum over the group of alpha * boundary_h(rho, sigma). Throws
// Error(kMixedGroup) when the rho values differ beyond `tol`.
double bh_sum(const std::vector<WeightedTerm>& group, const Walk& walk, double tol = kCouplingTol);
double bv_sum(const std::vector<WeightedTerm>& group, const Walk& walk, double tol = kCouplingTol);

struct TermResidual {
  double residual = 0.0;  // |Q| / scale
  bool outside_u = false;
};

struct CurveCheck {
  std::vector<TermResidual> terms;
  bool pass = true;
};

CurveCheck check_on_curve(const GammaSet& g, const Walk& walk, double tol = 1e-12);

// Smallest (w, v) in lexicographic order with 1 <= w, v <= bound such that
// rho_i^w sigma_i^v differs from every other term's value (relative 1e-9).
std::optional<std::pair<int, int>> separating_exponent(const GammaSet& g, int i, int bound = 64);

enum class Verdict { kPass, kFail, kNotApplicable };
const char* to_string(Verdict v);

enum class Extension {
  kConsistentWithInfinite,  // some companion of a member lies in U, outside the group
  kFiniteClosed,            // every companion is in the group or leaves U
  kUnknown,                 // a member is off the curve
};
const char* to_string(Extension e);

struct GroupStatus {
  std::vector<int> members;
  Extension extension = Extension::kUnknown;
};

struct ConditionReport {
  // Every term on Q inside U.
  Verdict on_curve = Verdict::kPass;
  CurveCheck curve;
  int worst_term = -1;
  double worst_residual = 0.0;

  // Union of finitely many pairwise-coupled sets, each extendable.
  Verdict coupled = Verdict::kNotApplicable;
  std::vector<GroupStatus> groups;

  // No N/NE/E steps and terms accumulating at the origin.
  Verdict origin = Verdict::kNotApplicable;
  bool walk_condition = false;
  bool trends_to_origin = false;
  // Largest ratio of max(rho, sigma) between the last and first member of a
  // coupled group.
  double worst_contraction = 0.0;

  // Some alpha negative.
  Verdict negative_alpha = Verdict::kNotApplicable;
  int min_alpha_index = -1;
  double min_alpha = 0.0;

  double curve_tol = 1e-12;
  double coupling_tol = kCouplingTol;

  bool all_pass() const;
};

ConditionReport necessary_conditions(const Walk& walk, const GammaSet& g, bool claims_infinite,
                                     double curve_tol = 1e-12);

}  // namespace qpwalk
