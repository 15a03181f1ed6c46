#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <vector>

#include "qpwalk/gamma_sets.hpp"
#include "qpwalk/walk_model.hpp"

namespace qpwalk {

// Stationary distribution of the walk restricted to {0..n}^2.
struct LatticeWindow {
  int n = 0;
  Eigen::MatrixXd values;  // values(i, j), (n+1) x (n+1)
  int iterations = 0;      // power iteration only
};

enum class SolveMethod { kAuto, kDirect, kPower };

inline constexpr int kDirectSolveLimit = 120;

struct PowerOptions {
  double residual_tol = 1e-15;  // L1 norm of pi P - pi
  int max_iterations = 200000;
};

// Moves that would leave {0..n}^2 become self-loops. kAuto uses the direct
// sparse solve for n <= 120. Throws kNotConverged, kInvalidInput (n < 8).
LatticeWindow truncated_stationary(const Walk& walk, int n, SolveMethod method = SolveMethod::kAuto,
                                   const PowerOptions& power = {});

// Sum of |pi P - pi| for the truncated chain.
double stationarity_residual(const Walk& walk, const LatticeWindow& w);

using Measure = std::function<double(int, int)>;

// m(i,j) minus the inflow into (i,j) given by the balance equation of its
// region.
double balance_residual_at(const Walk& walk, const Measure& m, int i, int j);

struct VerificationReport {
  double max_residual_interior = 0.0;
  double max_residual_h = 0.0;
  double max_residual_v = 0.0;
  double max_residual_origin = 0.0;
  double sup_rel_error = -1.0;  // negative when no oracle was compared
  int window = 0;

  double max_residual() const;
};

// Balance residuals of the induced measure on {0..n}^2, each divided by |m(i,j)|.
VerificationReport balance_residuals(const Walk& walk, const GammaSet& g, int n);

// max |m - pi| / pi over {0..core}^2 after normalising both to unit mass on the
// core; cells with pi < 1e-13 are skipped. Requires core + 10 <= oracle.n.
double compare(const GammaSet& g, const LatticeWindow& oracle, int core);

// Exhaustive search over set partitions; throws kTooLarge above 10 terms.
PartitionResult brute_force_partition(const GammaSet& g);

struct ConvexityViolation {
  double u1, v1, u2, v2;
  double e_mid;
};

struct ConvexityResult {
  int tested = 0;
  std::vector<ConvexityViolation> violations;

  bool pass() const { return violations.empty(); }
};

// Midpoint test of {E < 0}, E(u,v) = Q(e^u, e^v), on the corner bounding box
// intersected with u, v <= 0; lower bounds clamped at log(1e-6).
ConvexityResult convexity_check(const Walk& walk, int samples, std::uint64_t seed = 1);

}  // namespace qpwalk
