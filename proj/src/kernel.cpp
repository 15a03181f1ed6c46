#include "qpwalk/kernel.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qpwalk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kUnitRootTol = 1e-8;
constexpr double kEdgeMargin = 1e-9;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// The maximal interval around 1 on which the discriminant is non-negative,
// bounded by its branch points.
Interval component_interval(const std::vector<double>& roots, const Poly<double>& disc) {
  double lower = 0.0;
  double upper = kInf;
  bool unit_root = false;
  for (double r : roots) {
    if (!std::isfinite(r) || r < 0.0) continue;
    if (std::abs(r - 1.0) <= kUnitRootTol) {
      unit_root = true;
    } else if (r < 1.0) {
      lower = std::max(lower, r);
    } else {
      upper = std::min(upper, r);
    }
  }
  if (!unit_root) return {lower, upper};
  // A branch point at 1: the component lies on whichever side the
  // discriminant is positive.
  if (poly_eval(disc, 0.5 * (lower + 1.0)) > 0.0) return {lower, 1.0};
  return {1.0, upper};
}

BranchRoot classify_root(double r) {
  BranchRoot out;
  out.value = r;
  if (!std::isfinite(r)) {
    out.location = RootLocation::kOutside;
    out.sign = RootSign::kInfinite;
    return out;
  }
  const double m = std::abs(r);
  if (std::abs(m - 1.0) <= kUnitRootTol) {
    out.location = RootLocation::kOnCircle;
  } else {
    out.location = m < 1.0 ? RootLocation::kInside : RootLocation::kOutside;
  }
  if (m <= kProbabilityTol) {
    out.sign = RootSign::kZero;
  } else {
    out.sign = r > 0.0 ? RootSign::kPositive : RootSign::kNegative;
  }
  return out;
}

std::array<BranchRoot, 4> solve_branch_roots(const Poly<double>& disc, const char* which) {
  const auto solved = real_roots(disc);
  if (solved.complex_count > 0 || solved.real_roots.size() != 4) {
    throw Error(ErrorCode::kComplexRoots,
                std::string(which) + " discriminant has " + std::to_string(solved.complex_count) +
                    " non-real roots");
  }
  std::array<BranchRoot, 4> out;
  for (int i = 0; i < 4; ++i) out[i] = classify_root(solved.real_roots[i]);
  return out;
}

double double_root(const Quadratic<double>& q) {
  if (q.a == 0.0) return q.b == 0.0 ? 0.0 : -q.c / q.b;
  return -q.b / (2.0 * q.a);
}

// Sample abscissas on [lo, hi], clustered at both ends where the two branches
// meet, plus the extra points requested.
std::vector<double> sample_abscissas(double lo, double hi, int n, std::initializer_list<double> extra) {
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(n) + extra.size());
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (int k = 0; k < n; ++k) {
    const double theta = std::numbers::pi * static_cast<double>(k) / static_cast<double>(n - 1);
    xs.push_back(mid - half * std::cos(theta));
  }
  xs.front() = lo;
  xs.back() = hi;
  for (double e : extra) {
    if (e > lo && e < hi) xs.push_back(e);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

// (lower, upper) ordinates of Q at abscissa x inside the component.
std::pair<double, double> branch_ordinates(const KernelPoly<double>& k, double x) {
  const auto q = y_quadratic(k, x);
  if (auto roots = quadratic_roots(q)) return *roots;
  const double y = double_root(q);
  return {y, y};
}

}  // namespace

KernelPoly<double> kernel(const Walk& walk) {
  if (singular_class(walk).singular()) {
    throw Error(ErrorCode::kSingularWalk, "kernel requires a non-singular walk");
  }
  return kernel_coefficients<double>(walk.spec());
}

std::optional<std::pair<double, double>> quadratic_roots(const Quadratic<double>& q) {
  if (q.a == 0.0) {
    if (q.b == 0.0) return std::nullopt;
    const double r = -q.c / q.b;
    return std::pair{r, r};
  }
  double disc = q.b * q.b - 4.0 * q.a * q.c;
  const double scale = q.b * q.b + 4.0 * std::abs(q.a * q.c);
  if (disc < 0.0) {
    if (disc < -1e-14 * scale) return std::nullopt;
    disc = 0.0;
  }
  const double sq = std::sqrt(disc);
  const double half = -0.5 * (q.b + std::copysign(sq, q.b));
  const double r1 = half / q.a;
  const double r2 = half != 0.0 ? q.c / half : r1;
  return std::pair{std::min(r1, r2), std::max(r1, r2)};
}

Poly<double> discriminant_y(const KernelPoly<double>& k) {
  Poly<double> a(3), b(3), c(3);
  for (int i = 0; i < 3; ++i) {
    a(i) = k.c(i, 2);
    b(i) = k.c(i, 1);
    c(i) = k.c(i, 0);
  }
  return poly_sub<double>(poly_mul<double>(b, b), 4.0 * poly_mul<double>(a, c));
}

Poly<double> discriminant_x(const KernelPoly<double>& k) { return discriminant_y(k.transposed()); }

const char* to_string(RootLocation loc) {
  switch (loc) {
    case RootLocation::kInside: return "inside";
    case RootLocation::kOnCircle: return "on_circle";
    case RootLocation::kOutside: return "outside";
  }
  return "?";
}

const char* to_string(RootSign sign) {
  switch (sign) {
    case RootSign::kNegative: return "negative";
    case RootSign::kZero: return "zero";
    case RootSign::kPositive: return "positive";
    case RootSign::kInfinite: return "infinite";
  }
  return "?";
}

const char* to_string(PairCase c) {
  switch (c) {
    case PairCase::kBothPositive: return "both_positive";
    case PairCase::kBoundary: return "boundary";
    case PairCase::kOppositeSigns: return "opposite_signs";
  }
  return "?";
}

const char* to_string(Arc arc) {
  switch (arc) {
    case Arc::kQ00: return "Q00";
    case Arc::kQ01: return "Q01";
    case Arc::kQ10: return "Q10";
    case Arc::kQ11: return "Q11";
  }
  return "?";
}

PairCase classify_pair(double middle, double left, double right, double tol) {
  const double d = middle - 2.0 * std::sqrt(left * right);
  if (std::abs(d) <= tol) return PairCase::kBoundary;
  return d > 0.0 ? PairCase::kBothPositive : PairCase::kOppositeSigns;
}

BranchPointReport branch_points(const Walk& walk) {
  const auto k = kernel(walk);
  const Poly<double> dy = discriminant_y(k);
  const Poly<double> dx = discriminant_x(k);

  BranchPointReport report;
  report.roots_x = solve_branch_roots(dy, "y");
  report.roots_y = solve_branch_roots(dx, "x");
  report.inner_x_case = classify_pair(walk.p(1, 0), walk.p(1, -1), walk.p(1, 1));
  report.outer_x_case = classify_pair(walk.p(-1, 0), walk.p(-1, -1), walk.p(-1, 1));
  report.inner_y_case = classify_pair(walk.p(0, 1), walk.p(-1, 1), walk.p(1, 1));
  report.outer_y_case = classify_pair(walk.p(0, -1), walk.p(-1, -1), walk.p(1, -1));

  auto values = [](const std::array<BranchRoot, 4>& roots) {
    std::vector<double> v;
    for (const auto& r : roots) v.push_back(r.value);
    return v;
  };
  const Interval xr = component_interval(values(report.roots_x), dy);
  const Interval yr = component_interval(values(report.roots_y), dx);

  // Q+ meets the axes only at the origin, so a corner on an axis is (0,0).
  auto corner_x = [&](double x) -> Point {
    if (x == 0.0) return {0.0, 0.0};
    if (!std::isfinite(x)) return {kInf, kInf};
    return {x, double_root(y_quadratic(k, x))};
  };
  auto corner_y = [&](double y) -> Point {
    if (y == 0.0) return {0.0, 0.0};
    if (!std::isfinite(y)) return {kInf, kInf};
    return {double_root(x_quadratic(k, y)), y};
  };
  report.left = corner_x(xr.lo);
  report.right = corner_x(xr.hi);
  report.bottom = corner_y(yr.lo);
  report.top = corner_y(yr.hi);
  return report;
}

QPlusTrace trace_qplus(const Walk& walk, int n_points) {
  const auto k = kernel(walk);
  QPlusTrace trace;
  trace.corners = branch_points(walk);
  const auto& bp = trace.corners;
  if (!std::isfinite(bp.right.x)) {
    throw Error(ErrorCode::kUnboundedComponent, "right branch point of Q+ is at infinity");
  }
  const double xl = bp.left.x;
  const double xr = bp.right.x;
  if (!(xl <= xr) || n_points < 2) {
    throw Error(ErrorCode::kEmptyComponent, "no real points on Q+");
  }
  const auto xs = sample_abscissas(xl, xr, n_points, {bp.bottom.x, bp.top.x, 1.0});

  auto& pts = trace.points;
  pts.reserve(2 * xs.size());
  for (double x : xs) {
    double y = x == xl ? bp.left.y : x == xr ? bp.right.y : branch_ordinates(k, x).first;
    pts.push_back({x, y, x < bp.bottom.x ? Arc::kQ00 : Arc::kQ10});
  }
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) {
    const double x = *it;
    if (x == xl || x == xr) continue;
    pts.push_back({x, branch_ordinates(k, x).second, x > bp.top.x ? Arc::kQ11 : Arc::kQ01});
  }
  if (pts.empty()) throw Error(ErrorCode::kEmptyComponent, "no real points on Q+");
  return trace;
}

std::optional<Point> detect_singularity(const Walk& walk) {
  const auto k = kernel(walk);
  const bool symbolic = has_no_north_east_steps(walk);

  const bool numeric = std::abs(k(0.0, 0.0)) <= kProbabilityTol &&
                       std::abs(k.dx(0.0, 0.0)) <= kProbabilityTol &&
                       std::abs(k.dy(0.0, 0.0)) <= kProbabilityTol;
  if (symbolic != numeric) {
    throw Error(ErrorCode::kInconsistentSingularity,
                "transition-pattern test and derivative test disagree at the origin");
  }
  if (!symbolic) return std::nullopt;
  const double det = k.hessian(0.0, 0.0).determinant();
  if (!(det < -kProbabilityTol)) {
    throw Error(ErrorCode::kInconsistentSingularity,
                "singular point at the origin is not a crunode (Hessian determinant " +
                    std::to_string(det) + ")");
  }
  return Point{0.0, 0.0};
}

double boundary_h(const Walk& walk, double x, double y) {
  double acc = -x;
  for (int s = -1; s <= 1; ++s) {
    const double xp = std::pow(x, 1 - s);
    acc += xp * walk.h(s) + xp * y * walk.p(s, -1);
  }
  return acc;
}

double boundary_v(const Walk& walk, double x, double y) {
  double acc = -y;
  for (int t = -1; t <= 1; ++t) {
    const double yp = std::pow(y, 1 - t);
    acc += yp * walk.v(t) + x * yp * walk.p(-1, t);
  }
  return acc;
}

std::vector<BoundaryIntersection> curve_boundary_intersections(const Walk& walk, int n_points) {
  const auto k = kernel(walk);
  const auto bp = branch_points(walk);
  std::vector<BoundaryIntersection> out;
  if (!std::isfinite(bp.left.x)) return out;
  // Only the part of the component with x < 1 can meet U.
  const double lo = bp.left.x;
  const double hi = std::min(bp.right.x, 1.0);
  if (!(lo < hi)) return out;
  const auto xs = sample_abscissas(lo, hi, n_points, {bp.bottom.x, bp.top.x});

  for (Boundary which : {Boundary::kH, Boundary::kV}) {
    for (int branch = 0; branch < 2; ++branch) {
      auto y_of = [&](double x) {
        const auto ys = branch_ordinates(k, x);
        return branch == 0 ? ys.first : ys.second;
      };
      auto residual = [&](double x) {
        const double y = y_of(x);
        return which == Boundary::kH ? boundary_h(walk, x, y) : boundary_v(walk, x, y);
      };
      double fa = residual(xs[0]);
      for (std::size_t i = 1; i < xs.size(); ++i) {
        double a = xs[i - 1];
        double b = xs[i];
        const double fb = residual(b);
        if (fb == 0.0 || (fa < 0.0) != (fb < 0.0)) {
          double fl = fa;
          for (int it = 0; it < 200; ++it) {
            const double m = 0.5 * (a + b);
            if (m <= a || m >= b) break;
            const double fm = residual(m);
            if (fm == 0.0) {
              a = b = m;
              break;
            }
            if ((fl < 0.0) != (fm < 0.0)) {
              b = m;
            } else {
              a = m;
              fl = fm;
            }
          }
          const double x = fb == 0.0 && a != b ? xs[i] : 0.5 * (a + b);
          const Point p{x, y_of(x)};
          // Q and H (or V) also meet on the edges x = 1 and y = 1; rounding
          // can leave such points a few ulps inside U.
          if (in_open_unit_square(p) && p.x < 1.0 - kEdgeMargin && p.y < 1.0 - kEdgeMargin) {
            out.push_back({p, which});
          }
        }
        fa = fb;
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) {
    if (l.which != r.which) return l.which < r.which;
    return l.point.x < r.point.x || (l.point.x == r.point.x && l.point.y < r.point.y);
  });
  return out;
}

}  // namespace qpwalk
