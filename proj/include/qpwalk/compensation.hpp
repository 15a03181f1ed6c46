#pragma once

#include <optional>
#include <vector>

#include "qpwalk/common.hpp"
#include "qpwalk/gamma_sets.hpp"
#include "qpwalk/kernel.hpp"
#include "qpwalk/walk_model.hpp"

namespace qpwalk {

// T(rho, sigma) = (1 - 1/rho) h_1 + (1 - rho) h_{-1} + sum_s p_{s,1}
//                 - sigma sum_s rho^{-s} p_{s,-1};  boundary_h = -rho T.
double t_value(const Walk& walk, Point term);
// Vertical analogue; boundary_v = -sigma T_v.
double t_value_v(const Walk& walk, Point term);

enum class CompanionStatus { kOk, kDoubleRoot, kNotPositive, kExitsU };
const char* to_string(CompanionStatus s);

struct CompanionResult {
  CompanionStatus status = CompanionStatus::kOk;
  Point candidate;             // the other root, whatever its status
  std::optional<Point> point;  // set only when status == kOk
};

// Residual above which a term is rejected as off the curve.
inline constexpr double kOnCurveTol = 1e-10;

// Other root of Q(rho, .) (same rho, new sigma). Throws Error(kOffCurve).
CompanionResult companion_v(const Walk& walk, Point term);
// Other root of Q(., sigma) (same sigma, new rho).
CompanionResult companion_h(const Walk& walk, Point term);

// alpha_2 / alpha_1 = -T_1 / T_2 for a pair sharing rho; zeroes bh_sum of the
// weighted pair. Throws kMixedGroup, kOffCurve or kDegenerateT.
double coefficient_ratio_h(const Walk& walk, Point first, Point second);
double coefficient_ratio_v(const Walk& walk, Point first, Point second);

struct SeriesSeed {
  Point point;
  Boundary annihilates = Boundary::kV;
};

// Points of Q inside U that zero one boundary polynomial.
std::vector<SeriesSeed> find_seeds(const Walk& walk, int n_points = kDefaultTracePoints);

struct SeriesOptions {
  double tol = 1e-12;
  int max_terms = 200;
};

struct CompensationSeries {
  std::vector<WeightedTerm> terms;
  // links[k] couples terms k and k+1: kH for a shared rho (balances B^h),
  // kV for a shared sigma.
  std::vector<Boundary> links;
  // Bound on the mass off the origin of every discarded term, counting the
  // last three built terms.
  double tail_bound = 0.0;
  SeriesSeed seed;
  bool reached_max_terms = false;
};

// |alpha| (1 / ((1 - rho)(1 - sigma)) - 1): mass of a term off the origin.
double term_norm(const WeightedTerm& t);

// Throws kNotEligible, kStalledAtBranchPoint, kDiverged, kOffCurve.
CompensationSeries build_series(const Walk& walk, const SeriesSeed& seed,
                                const SeriesOptions& options = {});

struct AssembledMeasure {
  GammaSet set;
  std::vector<double> weights;           // per input series
  std::vector<std::size_t> series_start;  // first index of each series in set.terms
  double condition_number = 0.0;
  double lsq_residual = 0.0;    // smallest singular value / largest
  double max_balance_residual = 0.0;
  int window = 12;
};

// Weights and origin mass from least squares on the balance equations at
// (0,0), (1,0), (0,1), (1,1), then unit total mass. Throws kIllConditioned.
AssembledMeasure assemble_measure(const std::vector<CompensationSeries>& series, const Walk& walk,
                                  int window = 12);

}  // namespace qpwalk
