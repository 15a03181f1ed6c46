#pragma once

#include <Eigen/Core>

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "qpwalk/common.hpp"
#include "qpwalk/polynomial.hpp"
#include "qpwalk/walk_model.hpp"

namespace qpwalk {

// Q(x,y) = xy (sum_{s,t} x^{-s} y^{-t} p_{s,t} - 1) = sum_{a,b} c(a,b) x^a y^b,
// with c(1-s, 1-t) = p_{s,t} except c(1,1) = p_{0,0} - 1.
template <typename Scalar>
struct KernelPoly {
  Eigen::Matrix<Scalar, 3, 3> c = Eigen::Matrix<Scalar, 3, 3>::Zero();

  Scalar operator()(Scalar x, Scalar y) const {
    const Scalar xs[3] = {Scalar(1), x, x * x};
    const Scalar ys[3] = {Scalar(1), y, y * y};
    Scalar acc(0);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) acc += c(a, b) * xs[a] * ys[b];
    return acc;
  }

  // Sum of |c(a,b)| |x|^a |y|^b: the natural magnitude of an evaluation.
  Scalar scale(Scalar x, Scalar y) const {
    using std::abs;
    const Scalar xs[3] = {Scalar(1), abs(x), x * x};
    const Scalar ys[3] = {Scalar(1), abs(y), y * y};
    Scalar acc(0);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) acc += abs(c(a, b)) * xs[a] * ys[b];
    return acc;
  }

  Scalar dx(Scalar x, Scalar y) const {
    const Scalar ys[3] = {Scalar(1), y, y * y};
    Scalar acc(0);
    for (int b = 0; b < 3; ++b) acc += (c(1, b) + Scalar(2) * c(2, b) * x) * ys[b];
    return acc;
  }

  Scalar dy(Scalar x, Scalar y) const {
    const Scalar xs[3] = {Scalar(1), x, x * x};
    Scalar acc(0);
    for (int a = 0; a < 3; ++a) acc += (c(a, 1) + Scalar(2) * c(a, 2) * y) * xs[a];
    return acc;
  }

  // [Q_xx Q_xy; Q_xy Q_yy]
  Eigen::Matrix<Scalar, 2, 2> hessian(Scalar x, Scalar y) const {
    Eigen::Matrix<Scalar, 2, 2> hm;
    const Scalar two(2);
    hm(0, 0) = two * (c(2, 0) + c(2, 1) * y + c(2, 2) * y * y);
    hm(1, 1) = two * (c(0, 2) + c(1, 2) * x + c(2, 2) * x * x);
    hm(0, 1) = hm(1, 0) = c(1, 1) + two * c(2, 1) * x + two * c(1, 2) * y +
                          Scalar(4) * c(2, 2) * x * y;
    return hm;
  }

  KernelPoly transposed() const { return {c.transpose()}; }
};

// Coefficients without the singularity check; any scalar type.
template <typename Scalar>
KernelPoly<Scalar> kernel_coefficients(const WalkSpec& spec) {
  KernelPoly<Scalar> k;
  for (int s = -1; s <= 1; ++s)
    for (int t = -1; t <= 1; ++t) k.c(1 - s, 1 - t) = Scalar(spec.p(s, t));
  k.c(1, 1) -= Scalar(1);
  return k;
}

// Throws Error(kSingularWalk) for singular walks.
KernelPoly<double> kernel(const Walk& walk);

// a z^2 + b z + c
template <typename Scalar>
struct Quadratic {
  Scalar a{};
  Scalar b{};
  Scalar c{};
};

// Q(x, .) as a quadratic in y.
template <typename Scalar>
Quadratic<Scalar> y_quadratic(const KernelPoly<Scalar>& k, Scalar x) {
  auto row = [&](int b) { return k.c(0, b) + k.c(1, b) * x + k.c(2, b) * x * x; };
  return {row(2), row(1), row(0)};
}

// Q(., y) as a quadratic in x.
template <typename Scalar>
Quadratic<Scalar> x_quadratic(const KernelPoly<Scalar>& k, Scalar y) {
  auto col = [&](int a) { return k.c(a, 0) + k.c(a, 1) * y + k.c(a, 2) * y * y; };
  return {col(2), col(1), col(0)};
}

// Real roots (low, high) of a quadratic with a >= 0; nullopt when the
// discriminant is negative beyond rounding. Handles a == 0 (single root
// reported twice).
std::optional<std::pair<double, double>> quadratic_roots(const Quadratic<double>& q);

// Discriminant of the y-quadratic as a polynomial in x (degree <= 4), and
// of the x-quadratic as a polynomial in y.
Poly<double> discriminant_y(const KernelPoly<double>& k);
Poly<double> discriminant_x(const KernelPoly<double>& k);

enum class RootLocation { kInside, kOnCircle, kOutside };
enum class RootSign { kNegative, kZero, kPositive, kInfinite };

// Sub-cases of the branch-point sign classification for a pair of roots:
// (a) both positive, (b) boundary (a root at 0 or infinity), (c) opposite signs.
enum class PairCase { kBothPositive, kBoundary, kOppositeSigns };

struct BranchRoot {
  double value = 0.0;  // +inf allowed
  RootLocation location = RootLocation::kInside;
  RootSign sign = RootSign::kPositive;
};

struct BranchPointReport {
  std::array<BranchRoot, 4> roots_x;  // roots of the y-discriminant, ascending
  std::array<BranchRoot, 4> roots_y;  // roots of the x-discriminant, ascending
  // Predicted from the transition probabilities alone.
  PairCase inner_x_case = PairCase::kBothPositive;
  PairCase outer_x_case = PairCase::kBothPositive;
  PairCase inner_y_case = PairCase::kBothPositive;
  PairCase outer_y_case = PairCase::kBothPositive;
  // Corner points of Q+: extreme abscissas (left, right) and ordinates (bottom, top).
  Point left;
  Point right;
  Point bottom;
  Point top;
};

const char* to_string(RootLocation loc);
const char* to_string(RootSign sign);
const char* to_string(PairCase c);

// Throws Error(kComplexRoots) when a discriminant has non-real roots.
BranchPointReport branch_points(const Walk& walk);

// Sign case of a root pair predicted from the coefficients: compares `middle`
// with 2 sqrt(left * right).
PairCase classify_pair(double middle, double left, double right, double tol = 1e-12);

enum class Arc { kQ00, kQ01, kQ10, kQ11 };
const char* to_string(Arc arc);

struct TracePoint {
  double x = 0.0;
  double y = 0.0;
  Arc arc = Arc::kQ00;
};

// Closed loop: lower branch left to right (Q00 then Q10), upper branch right
// to left (Q11 then Q01). Starts at the left corner.
struct QPlusTrace {
  std::vector<TracePoint> points;
  BranchPointReport corners;
};

inline constexpr int kDefaultTracePoints = 2048;

// Throws Error(kEmptyComponent) when nothing real is found and
// Error(kUnboundedComponent) when the right corner is at infinity.
QPlusTrace trace_qplus(const Walk& walk, int n_points = kDefaultTracePoints);

// (0,0) when the walk has no N, NE, E interior steps; verified against the
// numeric derivatives and the crunode (negative Hessian determinant) test.
// Throws Error(kInconsistentSingularity) when the two routes disagree.
std::optional<Point> detect_singularity(const Walk& walk);

// Horizontal-axis balance of a single geometric term (x,y):
//   sum_s (x^{1-s} h_s + x^{1-s} y p_{s,-1}) - x.
double boundary_h(const Walk& walk, double x, double y);
// Vertical-axis balance: sum_t (y^{1-t} v_t + x y^{1-t} p_{-1,t}) - y.
double boundary_v(const Walk& walk, double x, double y);

enum class Boundary { kH, kV };

struct BoundaryIntersection {
  Point point;
  Boundary which = Boundary::kH;
};

// Points of Q+ inside the open unit square where boundary_h (resp. boundary_v)
// vanishes, located by sign changes along the trace and bisection.
std::vector<BoundaryIntersection> curve_boundary_intersections(const Walk& walk,
                                                               int n_points = kDefaultTracePoints);

}  // namespace qpwalk
