#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qpwalk/kernel.hpp"
#include "support.hpp"

namespace qpwalk {
namespace {

using testing::kernel_by_definition;

double scaled_residual(const KernelPoly<double>& k, double x, double y) {
  const double s = k.scale(x, y);
  return s > 0.0 ? std::abs(k(x, y)) / s : 0.0;
}

TEST(Kernel, DiagonalPresetCoefficients) {
  const auto k = kernel(testing::walk_d());
  Eigen::Matrix3d expected = Eigen::Matrix3d::Zero();
  expected(2, 0) = 0.25;  // x^2
  expected(0, 2) = 0.25;  // y^2
  expected(2, 2) = 0.5;   // x^2 y^2
  expected(1, 1) = -1.0;  // xy
  EXPECT_LE((k.c - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Kernel, CornerPresetCoefficients) {
  const auto k = kernel(testing::walk_a());
  Eigen::Matrix3d expected = Eigen::Matrix3d::Zero();
  expected(2, 2) = 0.6;
  expected(0, 1) = 0.2;
  expected(1, 0) = 0.2;
  expected(1, 1) = -1.0;
  EXPECT_LE((k.c - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Kernel, MatchesDefinitionOnRandomWalks) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.05, 2.0);
  for (int n = 0; n < 200; ++n) {
    const Walk w = testing::random_nonsingular_walk(rng);
    const auto k = kernel(w);
    EXPECT_LE(std::abs(k(1.0, 1.0)), 1e-14);
    for (int m = 0; m < 5; ++m) {
      const double x = u(rng), y = u(rng);
      EXPECT_NEAR(k(x, y), kernel_by_definition(w, x, y), 1e-12 * (1 + k.scale(x, y)));
    }
  }
}

TEST(Kernel, RejectsSingularWalk) {
  const Walk w = Walk::from(testing::blocked_axis_walk({{1, 1, 0.4}, {-1, -1, 0.6}}));
  try {
    kernel(w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingularWalk);
  }
}

TEST(Kernel, TransposeSwapsArguments) {
  std::mt19937_64 rng(8);
  for (int n = 0; n < 50; ++n) {
    const Walk w = testing::random_nonsingular_walk(rng);
    const auto k = kernel(w);
    const auto kt = kernel(w.transposed());
    for (double x : {0.1, 0.6, 1.4})
      for (double y : {0.2, 0.9}) EXPECT_NEAR(k(x, y), kt(y, x), 1e-14);
  }
}

TEST(Quadratic, DiagonalPresetAtOne) {
  const auto q = y_quadratic(kernel(testing::walk_d()), 1.0);
  EXPECT_DOUBLE_EQ(q.a, 0.75);
  EXPECT_DOUBLE_EQ(q.b, -1.0);
  EXPECT_DOUBLE_EQ(q.c, 0.25);
  const auto r = quadratic_roots(q);
  ASSERT_TRUE(r);
  EXPECT_NEAR(r->first, 1.0 / 3, 1e-15);
  EXPECT_NEAR(r->second, 1.0, 1e-15);
}

TEST(Quadratic, CornerPresetAtZero) {
  const auto q = y_quadratic(kernel(testing::walk_a()), 0.0);
  EXPECT_EQ(q.a, 0.0);
  EXPECT_DOUBLE_EQ(q.b, 0.2);
  EXPECT_EQ(q.c, 0.0);
  const auto r = quadratic_roots(q);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->first, 0.0);
  EXPECT_EQ(r->second, 0.0);
}

TEST(Quadratic, OneIsAlwaysARootAtOne) {
  std::mt19937_64 rng(4);
  for (int n = 0; n < 200; ++n) {
    const auto k = kernel(testing::random_nonsingular_walk(rng));
    for (const auto& q : {y_quadratic(k, 1.0), x_quadratic(k, 1.0)}) {
      const auto r = quadratic_roots(q);
      ASSERT_TRUE(r);
      EXPECT_LE(std::min(std::abs(r->first - 1.0), std::abs(r->second - 1.0)), 1e-12);
    }
  }
}

TEST(Quadratic, NegativeDiscriminant) {
  EXPECT_FALSE(quadratic_roots({1.0, 0.0, 1.0}));
}

TEST(Discriminant, DiagonalPreset) {
  const Poly<double> d = discriminant_y(kernel(testing::walk_d()));
  ASSERT_EQ(d.size(), 5);
  const double expected[] = {0.0, 0.0, 0.75, 0.0, -0.5};
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(d(i), expected[i], 1e-15);
}

TEST(Discriminant, CrossedPresetBiquadratic) {
  const Poly<double> d = discriminant_y(kernel(testing::walk_c()));
  const double f = -20.0 / 961;
  const double expected[] = {f, 0.0, -27.0 * f, 0.0, 21.0 * f};
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(d(i), expected[i], 1e-15);
}

TEST(Discriminant, UnitValueIsSquaredDrift) {
  std::mt19937_64 rng(14);
  for (int n = 0; n < 200; ++n) {
    const Walk w = testing::random_nonsingular_walk(rng);
    const auto k = kernel(w);
    EXPECT_NEAR(poly_eval(discriminant_y(k), 1.0), drift(w).my * drift(w).my, 1e-14);
    EXPECT_NEAR(poly_eval(discriminant_x(k), 1.0), drift(w).mx * drift(w).mx, 1e-14);
  }
}

TEST(BranchPoints, CrossedPresetClosedForm) {
  const auto bp = branch_points(testing::walk_c());
  const double xl = std::sqrt((27.0 - std::sqrt(645.0)) / 42.0);
  const double xr = std::sqrt((27.0 + std::sqrt(645.0)) / 42.0);
  EXPECT_NEAR(bp.left.x, xl, 1e-12);
  EXPECT_NEAR(bp.right.x, xr, 1e-12);
  EXPECT_NEAR(bp.roots_x[0].value, -xr, 1e-12);
  EXPECT_NEAR(bp.roots_x[1].value, -xl, 1e-12);
  // By symmetry of the walk the y roots are the same.
  EXPECT_NEAR(bp.bottom.y, xl, 1e-12);
  EXPECT_NEAR(bp.top.y, xr, 1e-12);
  // Corner ordinates are the double roots of the y-quadratic.
  const auto k = kernel(testing::walk_c());
  EXPECT_LE(scaled_residual(k, bp.left.x, bp.left.y), 1e-12);
  EXPECT_LE(std::abs(k.dy(bp.left.x, bp.left.y)), 1e-9);
}

TEST(BranchPoints, DiagonalPresetDoubleRootAtZero) {
  const auto bp = branch_points(testing::walk_d());
  const double r = std::sqrt(1.5);
  EXPECT_NEAR(bp.roots_x[0].value, -r, 1e-12);
  EXPECT_NEAR(bp.roots_x[1].value, 0.0, 1e-12);
  EXPECT_NEAR(bp.roots_x[2].value, 0.0, 1e-12);
  EXPECT_NEAR(bp.roots_x[3].value, r, 1e-12);
  EXPECT_EQ(bp.roots_x[1].sign, RootSign::kZero);
  EXPECT_EQ(bp.left, (Point{0.0, 0.0}));
  EXPECT_NEAR(bp.right.x, r, 1e-12);
}

TEST(BranchPoints, ZeroDriftPutsRootOnCircle) {
  const auto bp = branch_points(testing::walk_b());
  int on_circle = 0;
  for (const auto& r : bp.roots_x) on_circle += r.location == RootLocation::kOnCircle;
  EXPECT_GE(on_circle, 1);
}

TEST(BranchPoints, DegreeDropGivesInfiniteRoot) {
  const auto bp = branch_points(testing::walk_a());
  EXPECT_TRUE(std::isinf(bp.roots_x[3].value));
  EXPECT_EQ(bp.roots_x[3].sign, RootSign::kInfinite);
  EXPECT_EQ(bp.outer_x_case, PairCase::kBoundary);
  // The component around 1 is still bounded.
  EXPECT_TRUE(std::isfinite(bp.right.x));
  EXPECT_GT(bp.right.x, 1.0);
}

TEST(BranchPoints, TransposeSwapsRootLists) {
  std::mt19937_64 rng(17);
  int compared = 0;
  for (int n = 0; n < 200; ++n) {
    const Walk w = testing::random_nonsingular_walk(rng);
    const auto d = drift(w);
    if (std::abs(d.mx) < 1e-3 || std::abs(d.my) < 1e-3) continue;
    const auto a = branch_points(w);
    const auto b = branch_points(w.transposed());
    for (int i = 0; i < 4; ++i) {
      const double u = a.roots_x[i].value, v = b.roots_y[i].value;
      if (std::isinf(u)) {
        EXPECT_TRUE(std::isinf(v));
      } else {
        EXPECT_NEAR(u, v, 1e-10 * (1 + std::abs(u)));
      }
    }
    ++compared;
  }
  EXPECT_GT(compared, 150);
}

TEST(BranchPoints, RootsZeroTheDiscriminant) {
  std::mt19937_64 rng(19);
  for (int n = 0; n < 200; ++n) {
    const Walk w = testing::random_nonsingular_walk(rng);
    if (std::abs(drift(w).my) < 1e-3) continue;
    const auto k = kernel(w);
    const Poly<double> d = discriminant_y(k);
    const double scale = d.cwiseAbs().maxCoeff();
    const auto bp = branch_points(w);
    for (int i = 0; i < 4; ++i) {
      const double x = bp.roots_x[i].value;
      if (std::isinf(x)) continue;
      EXPECT_LE(std::abs(poly_eval(d, x)), 1e-9 * scale * std::pow(1 + std::abs(x), 4));
      if (i > 0 && std::abs(x - bp.roots_x[i - 1].value) < 1e-6) {
        // Repeated roots only at 0 or on the unit circle.
        const double m = std::abs(x);
        EXPECT_TRUE(m < 1e-8 || std::abs(m - 1.0) < 1e-4) << x;
      }
    }
  }
}

TEST(ClassifyPair, Cases) {
  EXPECT_EQ(classify_pair(0.5, 0.01, 0.01), PairCase::kBothPositive);
  EXPECT_EQ(classify_pair(0.2, 0.01, 0.01), PairCase::kBothPositive);
  EXPECT_EQ(classify_pair(0.1, 0.04, 0.09), PairCase::kOppositeSigns);
  EXPECT_EQ(classify_pair(0.12, 0.04, 0.09), PairCase::kBoundary);
  EXPECT_EQ(classify_pair(0.0, 0.0, 0.3), PairCase::kBoundary);
}

void expect_lattice_geometry(const Walk& w) {
  const auto k = kernel(w);
  const QPlusTrace t = trace_qplus(w, 2048);
  ASSERT_GT(t.points.size(), 100u);
  bool through_one = false;
  for (std::size_t i = 0; i < t.points.size(); ++i) {
    const auto& p = t.points[i];
    EXPECT_LE(scaled_residual(k, p.x, p.y), 1e-10) << p.x << ", " << p.y;
    const bool x_small = p.x < 1e-10, y_small = p.y < 1e-10;
    EXPECT_EQ(x_small, y_small) << "axis crossing at " << p.x << ", " << p.y;
    if (std::abs(p.x - 1.0) < 1e-12 && std::abs(p.y - 1.0) < 1e-9) through_one = true;
    if (i == 0) continue;
    const auto& q = t.points[i - 1];
    if (q.arc != p.arc) continue;
    const double dx = p.x - q.x, dy = p.y - q.y;
    switch (p.arc) {
      case Arc::kQ00: EXPECT_LE(dy * (dx > 0 ? 1 : -1), 1e-9); break;
      case Arc::kQ10: EXPECT_GE(dy * (dx > 0 ? 1 : -1), -1e-9); break;
      case Arc::kQ11: EXPECT_LE(dy * (dx > 0 ? 1 : -1), 1e-9); break;
      case Arc::kQ01: EXPECT_GE(dy * (dx > 0 ? 1 : -1), -1e-9); break;
    }
  }
  EXPECT_TRUE(through_one);
}

TEST(Trace, PresetGeometry) {
  for (const Walk& w : {testing::walk_a(), testing::walk_b(), testing::walk_c(), testing::walk_d(),
                        testing::switch_walk()}) {
    expect_lattice_geometry(w);
  }
}

TEST(Trace, CrossedPresetHasFourArcs) {
  const QPlusTrace t = trace_qplus(testing::walk_c());
  int counts[4] = {0, 0, 0, 0};
  for (const auto& p : t.points) ++counts[static_cast<int>(p.arc)];
  for (int c : counts) EXPECT_GT(c, 10);
  // Arc labels change only at the corner points: one change per corner on a
  // closed loop.
  int changes = 0;
  for (std::size_t i = 1; i < t.points.size(); ++i) changes += t.points[i].arc != t.points[i - 1].arc;
  EXPECT_EQ(changes, 3);
}

TEST(Trace, DiagonalPresetPinchedAtOrigin) {
  const QPlusTrace t = trace_qplus(testing::walk_d());
  EXPECT_EQ(t.points.front().x, 0.0);
  EXPECT_EQ(t.points.front().y, 0.0);
  EXPECT_EQ(t.corners.bottom, (Point{0.0, 0.0}));
}

TEST(Detect, PresetsAndSwitch) {
  const auto d = detect_singularity(testing::walk_d());
  ASSERT_TRUE(d);
  EXPECT_EQ(*d, (Point{0.0, 0.0}));
  EXPECT_TRUE(detect_singularity(testing::switch_walk()));
  EXPECT_FALSE(detect_singularity(testing::walk_a()));
  EXPECT_FALSE(detect_singularity(testing::walk_c()));
}

TEST(Detect, MatchesStepPattern) {
  std::mt19937_64 rng(30);
  for (int n = 0; n < 400; ++n) {
    const bool forced = n % 2 == 0;
    const Walk w = testing::random_nonsingular_walk(rng, {0.3, forced});
    const auto s = detect_singularity(w);
    const bool expected = w.p(0, 1) == 0.0 && w.p(1, 1) == 0.0 && w.p(1, 0) == 0.0;
    EXPECT_EQ(s.has_value(), expected);
    if (forced) EXPECT_TRUE(s.has_value());
  }
}

TEST(Boundary, ValuesAtOne) {
  // At (1,1) the axis sums collapse: sum h + sum p_{s,-1} - 1, which by
  // stochasticity of the axis law is the negative vertical drift.
  std::mt19937_64 rng(2);
  for (int n = 0; n < 100; ++n) {
    const Walk w = testing::random_walk(rng);
    double h = 0.0, down = 0.0, v = 0.0, left = 0.0;
    for (int s = -1; s <= 1; ++s) {
      h += w.h(s);
      down += w.p(s, -1);
      v += w.v(s);
      left += w.p(-1, s);
    }
    EXPECT_NEAR(boundary_h(w, 1.0, 1.0), h + down - 1.0, 1e-14);
    EXPECT_NEAR(boundary_h(w, 1.0, 1.0), -drift(w).my, 1e-14);
    EXPECT_NEAR(boundary_v(w, 1.0, 1.0), v + left - 1.0, 1e-14);
    EXPECT_NEAR(boundary_v(w, 1.0, 1.0), -drift(w).mx, 1e-14);
  }
}

TEST(Boundary, SwitchIntersections) {
  const Walk w = testing::switch_walk();
  const auto k = kernel(w);
  const auto hits = curve_boundary_intersections(w);
  int v_hits = 0, h_hits = 0;
  for (const auto& hit : hits) {
    EXPECT_TRUE(in_open_unit_square(hit.point));
    EXPECT_LE(scaled_residual(k, hit.point.x, hit.point.y), 1e-12);
    const double b = hit.which == Boundary::kH ? boundary_h(w, hit.point.x, hit.point.y)
                                               : boundary_v(w, hit.point.x, hit.point.y);
    EXPECT_LE(std::abs(b), 1e-11);
    (hit.which == Boundary::kH ? h_hits : v_hits)++;
  }
  EXPECT_GE(v_hits, 1);
  EXPECT_GE(h_hits, 1);
}

}  // namespace
}  // namespace qpwalk
