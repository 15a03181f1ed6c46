#include "qpwalk/gamma_sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "qpwalk/compensation.hpp"
#include "qpwalk/kernel.hpp"

namespace qpwalk {

double GammaSet::norm() const {
  double acc = 0.0;
  for (const auto& t : terms) acc += std::abs(t.alpha) / ((1.0 - t.rho) * (1.0 - t.sigma));
  return acc;
}

double GammaSet::mass() const {
  if (!origin) {
    double acc = 0.0;
    for (const auto& t : terms) acc += t.alpha / ((1.0 - t.rho) * (1.0 - t.sigma));
    return acc;
  }
  double acc = *origin;
  for (const auto& t : terms) acc += t.alpha * (1.0 / ((1.0 - t.rho) * (1.0 - t.sigma)) - 1.0);
  return acc;
}

double GammaSet::value(int i, int j) const {
  if (i == 0 && j == 0 && origin) return *origin;
  double acc = 0.0;
  for (const auto& t : terms) acc += t.alpha * std::pow(t.rho, i) * std::pow(t.sigma, j);
  return acc;
}

std::vector<std::string> gamma_set_issues(const GammaSet& g) {
  std::vector<std::string> issues;
  for (std::size_t k = 0; k < g.terms.size(); ++k) {
    const auto& t = g.terms[k];
    std::ostringstream os;
    os.precision(17);
    if (!(t.rho > 0.0 && t.rho < 1.0) || !(t.sigma > 0.0 && t.sigma < 1.0)) {
      os << "term " << k << ": (" << t.rho << ", " << t.sigma << ") outside the open unit square";
      issues.push_back(os.str());
    } else if (!(t.alpha != 0.0) || !std::isfinite(t.alpha)) {
      os << "term " << k << ": alpha must be a nonzero finite number";
      issues.push_back(os.str());
    }
    for (std::size_t l = 0; l < k; ++l) {
      const auto& u = g.terms[l];
      if (nearly_equal(t.rho, u.rho, g.tol) && nearly_equal(t.sigma, u.sigma, g.tol)) {
        issues.push_back("terms " + std::to_string(l) + " and " + std::to_string(k) +
                         " have the same coordinates");
      }
    }
  }
  return issues;
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  int find(int a) {
    while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
    return a;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

  IndexGroups groups() {
    const int n = static_cast<int>(parent_.size());
    IndexGroups out;
    std::vector<int> slot(n, -1);
    for (int i = 0; i < n; ++i) {
      const int r = find(i);
      if (slot[r] < 0) {
        slot[r] = static_cast<int>(out.size());
        out.emplace_back();
      }
      out[slot[r]].push_back(i);
    }
    return out;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace

PartitionResult maximal_partitions(const GammaSet& g) {
  const int n = static_cast<int>(g.terms.size());
  DisjointSets hs(n), vs(n), gs(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool same_rho = nearly_equal(g.terms[i].rho, g.terms[j].rho, g.tol);
      const bool same_sigma = nearly_equal(g.terms[i].sigma, g.terms[j].sigma, g.tol);
      if (same_rho) hs.unite(i, j);
      if (same_sigma) vs.unite(i, j);
      if (same_rho || same_sigma) gs.unite(i, j);
    }
  }
  return {hs.groups(), vs.groups(), gs.groups()};
}

double bh_sum(const std::vector<WeightedTerm>& group, const Walk& walk, double tol) {
  double acc = 0.0;
  for (const auto& t : group) {
    if (!nearly_equal(t.rho, group.front().rho, tol)) {
      throw Error(ErrorCode::kMixedGroup, "horizontal group mixes rho values");
    }
    acc += t.alpha * boundary_h(walk, t.rho, t.sigma);
  }
  return acc;
}

double bv_sum(const std::vector<WeightedTerm>& group, const Walk& walk, double tol) {
  double acc = 0.0;
  for (const auto& t : group) {
    if (!nearly_equal(t.sigma, group.front().sigma, tol)) {
      throw Error(ErrorCode::kMixedGroup, "vertical group mixes sigma values");
    }
    acc += t.alpha * boundary_v(walk, t.rho, t.sigma);
  }
  return acc;
}

CurveCheck check_on_curve(const GammaSet& g, const Walk& walk, double tol) {
  const auto k = kernel(walk);
  CurveCheck out;
  for (const auto& t : g.terms) {
    TermResidual r;
    const double scale = k.scale(t.rho, t.sigma);
    r.residual = scale > 0.0 ? std::abs(k(t.rho, t.sigma)) / scale : 0.0;
    r.outside_u = !in_open_unit_square(t.point());
    if (r.residual > tol || r.outside_u) out.pass = false;
    out.terms.push_back(r);
  }
  return out;
}

std::optional<std::pair<int, int>> separating_exponent(const GammaSet& g, int i, int bound) {
  // Compared in logs: rho^w sigma^v underflows long before w, v reach 64.
  const auto& ti = g.terms.at(i);
  for (int w = 1; w <= bound; ++w) {
    for (int v = 1; v <= bound; ++v) {
      const double li = w * std::log(ti.rho) + v * std::log(ti.sigma);
      bool separated = true;
      for (std::size_t j = 0; j < g.terms.size() && separated; ++j) {
        if (static_cast<int>(j) == i) continue;
        const double lj = w * std::log(g.terms[j].rho) + v * std::log(g.terms[j].sigma);
        if (std::abs(li - lj) <= 1e-9) separated = false;
      }
      if (separated) return std::pair{w, v};
    }
  }
  return std::nullopt;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "pass";
    case Verdict::kFail: return "fail";
    case Verdict::kNotApplicable: return "not_applicable";
  }
  return "?";
}

const char* to_string(Extension e) {
  switch (e) {
    case Extension::kConsistentWithInfinite: return "consistent_with_infinite";
    case Extension::kFiniteClosed: return "finite_closed";
    case Extension::kUnknown: return "unknown";
  }
  return "?";
}

bool ConditionReport::all_pass() const {
  for (Verdict v : {on_curve, coupled, origin, negative_alpha}) {
    if (v == Verdict::kFail) return false;
  }
  return true;
}

namespace {

Extension extension_status(const Walk& walk, const GammaSet& g, const std::vector<int>& members) {
  auto in_group = [&](Point p) {
    for (int m : members) {
      if (nearly_equal(p.x, g.terms[m].rho, g.tol) && nearly_equal(p.y, g.terms[m].sigma, g.tol)) {
        return true;
      }
    }
    return false;
  };
  for (int m : members) {
    const Point p = g.terms[m].point();
    try {
      for (const auto& c : {companion_h(walk, p), companion_v(walk, p)}) {
        if (c.point && !in_group(*c.point)) return Extension::kConsistentWithInfinite;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kOffCurve) throw;
      return Extension::kUnknown;
    }
  }
  return Extension::kFiniteClosed;
}

}  // namespace

ConditionReport necessary_conditions(const Walk& walk, const GammaSet& g, bool claims_infinite,
                                     double curve_tol) {
  ConditionReport r;
  r.curve_tol = curve_tol;
  r.coupling_tol = g.tol;

  r.curve = check_on_curve(g, walk, curve_tol);
  r.on_curve = r.curve.pass ? Verdict::kPass : Verdict::kFail;
  for (std::size_t k = 0; k < r.curve.terms.size(); ++k) {
    const auto& t = r.curve.terms[k];
    const double score = t.outside_u ? std::numeric_limits<double>::infinity() : t.residual;
    if (r.worst_term < 0 || score > r.worst_residual) {
      r.worst_term = static_cast<int>(k);
      r.worst_residual = score;
    }
  }

  const auto parts = maximal_partitions(g);
  bool every_group_extends = true;
  for (const auto& members : parts.g_groups) {
    GroupStatus s{members, extension_status(walk, g, members)};
    if (s.extension != Extension::kConsistentWithInfinite) every_group_extends = false;
    r.groups.push_back(std::move(s));
  }

  r.walk_condition = has_no_north_east_steps(walk);
  // In index order inside each coupled group: coordinates two steps apart
  // shrink (after a grace of four steps) and the last term is nearer the origin
  // than the first.
  auto max_coord = [](const WeightedTerm& t) { return std::max(t.rho, t.sigma); };
  r.trends_to_origin = !parts.g_groups.empty();
  for (const auto& members : parts.g_groups) {
    const auto& first = g.terms[members.front()];
    const auto& last = g.terms[members.back()];
    const double contraction = max_coord(last) / max_coord(first);
    r.worst_contraction = std::max(r.worst_contraction, contraction);
    bool monotone = members.size() >= 2 && contraction < 1.0;
    for (std::size_t k = 6; k < members.size(); ++k) {
      const auto& a = g.terms[members[k - 2]];
      const auto& b = g.terms[members[k]];
      if (b.rho > a.rho * (1.0 + g.tol) || b.sigma > a.sigma * (1.0 + g.tol)) monotone = false;
    }
    if (!monotone) r.trends_to_origin = false;
  }

  for (std::size_t k = 0; k < g.terms.size(); ++k) {
    if (r.min_alpha_index < 0 || g.terms[k].alpha < r.min_alpha) {
      r.min_alpha_index = static_cast<int>(k);
      r.min_alpha = g.terms[k].alpha;
    }
  }

  if (claims_infinite) {
    r.coupled = every_group_extends && !parts.g_groups.empty() ? Verdict::kPass : Verdict::kFail;
    r.origin = r.walk_condition && r.trends_to_origin ? Verdict::kPass : Verdict::kFail;
    r.negative_alpha = r.min_alpha < 0.0 ? Verdict::kPass : Verdict::kFail;
  }
  return r;
}

}  // namespace qpwalk
