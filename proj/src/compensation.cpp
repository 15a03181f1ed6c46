#include "qpwalk/compensation.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

#include "qpwalk/verify_oracle.hpp"

namespace qpwalk {

double t_value(const Walk& walk, Point term) {
  const double rho = term.x;
  const double sigma = term.y;
  double up = 0.0;
  double down = 0.0;
  for (int s = -1; s <= 1; ++s) {
    up += walk.p(s, 1);
    down += std::pow(rho, -s) * walk.p(s, -1);
  }
  return (1.0 - 1.0 / rho) * walk.h(1) + (1.0 - rho) * walk.h(-1) + up - sigma * down;
}

double t_value_v(const Walk& walk, Point term) {
  const double rho = term.x;
  const double sigma = term.y;
  double right = 0.0;
  double left = 0.0;
  for (int t = -1; t <= 1; ++t) {
    right += walk.p(1, t);
    left += std::pow(sigma, -t) * walk.p(-1, t);
  }
  return (1.0 - 1.0 / sigma) * walk.v(1) + (1.0 - sigma) * walk.v(-1) + right - rho * left;
}

const char* to_string(CompanionStatus s) {
  switch (s) {
    case CompanionStatus::kOk: return "ok";
    case CompanionStatus::kDoubleRoot: return "double_root";
    case CompanionStatus::kNotPositive: return "not_positive";
    case CompanionStatus::kExitsU: return "exits_u";
  }
  return "?";
}

namespace {

void require_on_curve(const KernelPoly<double>& k, Point p) {
  const double scale = k.scale(p.x, p.y);
  const double r = scale > 0.0 ? std::abs(k(p.x, p.y)) / scale : 0.0;
  if (!(r <= kOnCurveTol)) {
    throw Error(ErrorCode::kOffCurve, "term (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                                          ") has kernel residual " + std::to_string(r));
  }
}

// The root of q other than z.
double other_root(const Quadratic<double>& q, double z) {
  if (std::abs(q.a * z) > 1e-14) return q.c / (q.a * z);
  const auto roots = quadratic_roots(q);
  if (!roots) return std::numeric_limits<double>::quiet_NaN();
  return std::abs(roots->first - z) > std::abs(roots->second - z) ? roots->first : roots->second;
}

CompanionResult classify_companion(const Quadratic<double>& q, Point candidate, double old_value,
                                   double new_value) {
  CompanionResult out;
  out.candidate = candidate;
  // A discriminant at rounding level means the term sits on a branch point
  // and the two roots are one.
  const double disc = q.b * q.b - 4.0 * q.a * q.c;
  const double disc_scale = q.b * q.b + 4.0 * std::abs(q.a * q.c);
  if (!std::isfinite(new_value) || new_value <= 0.0) {
    out.status = CompanionStatus::kNotPositive;
  } else if (std::abs(new_value - old_value) <= 1e-12 * std::max(old_value, new_value) ||
             disc <= 1e-12 * disc_scale) {
    out.status = CompanionStatus::kDoubleRoot;
  } else if (!in_open_unit_square(candidate)) {
    out.status = CompanionStatus::kExitsU;
  } else {
    out.point = candidate;
  }
  return out;
}

}  // namespace

CompanionResult companion_v(const Walk& walk, Point term) {
  const auto k = kernel(walk);
  require_on_curve(k, term);
  const auto q = y_quadratic(k, term.x);
  const double sigma = other_root(q, term.y);
  return classify_companion(q, {term.x, sigma}, term.y, sigma);
}

CompanionResult companion_h(const Walk& walk, Point term) {
  const auto k = kernel(walk);
  require_on_curve(k, term);
  const auto q = x_quadratic(k, term.y);
  const double rho = other_root(q, term.x);
  return classify_companion(q, {rho, term.y}, term.x, rho);
}

namespace {

double checked_ratio(double t1, double t2) {
  if (std::abs(t2) < 1e-14) {
    throw Error(ErrorCode::kDegenerateT, "T of the second term vanishes (" + std::to_string(t2) + ")");
  }
  return -t1 / t2;
}

}  // namespace

double coefficient_ratio_h(const Walk& walk, Point first, Point second) {
  if (!nearly_equal(first.x, second.x)) {
    throw Error(ErrorCode::kMixedGroup, "horizontal pair must share rho");
  }
  const auto k = kernel(walk);
  require_on_curve(k, first);
  require_on_curve(k, second);
  return checked_ratio(t_value(walk, first), t_value(walk, second));
}

double coefficient_ratio_v(const Walk& walk, Point first, Point second) {
  if (!nearly_equal(first.y, second.y)) {
    throw Error(ErrorCode::kMixedGroup, "vertical pair must share sigma");
  }
  const auto k = kernel(walk);
  require_on_curve(k, first);
  require_on_curve(k, second);
  return checked_ratio(t_value_v(walk, first), t_value_v(walk, second));
}

std::vector<SeriesSeed> find_seeds(const Walk& walk, int n_points) {
  std::vector<SeriesSeed> seeds;
  for (const auto& hit : curve_boundary_intersections(walk, n_points)) {
    seeds.push_back({hit.point, hit.which});
  }
  return seeds;
}

double term_norm(const WeightedTerm& t) {
  return std::abs(t.alpha) * (1.0 / ((1.0 - t.rho) * (1.0 - t.sigma)) - 1.0);
}

CompensationSeries build_series(const Walk& walk, const SeriesSeed& seed, const SeriesOptions& options) {
  if (!has_no_north_east_steps(walk)) {
    throw Error(ErrorCode::kNotEligible, "walk has north, northeast or east interior steps");
  }
  const auto k = kernel(walk);
  require_on_curve(k, seed.point);
  const double b = seed.annihilates == Boundary::kH ? boundary_h(walk, seed.point.x, seed.point.y)
                                                    : boundary_v(walk, seed.point.x, seed.point.y);
  if (!(std::abs(b) <= kOnCurveTol)) {
    throw Error(ErrorCode::kOffCurve, "seed does not zero its boundary polynomial (residual " +
                                          std::to_string(b) + ")");
  }

  CompensationSeries out;
  out.seed = seed;
  out.terms.push_back({seed.point.x, seed.point.y, 1.0});
  out.tail_bound = std::numeric_limits<double>::infinity();
  std::vector<double> norms{term_norm(out.terms.back())};
  Boundary link = seed.annihilates == Boundary::kV ? Boundary::kH : Boundary::kV;

  while (true) {
    if (static_cast<int>(out.terms.size()) >= options.max_terms) {
      out.reached_max_terms = true;
      break;
    }
    const WeightedTerm last = out.terms.back();
    const CompanionResult c =
        link == Boundary::kH ? companion_v(walk, last.point()) : companion_h(walk, last.point());
    if (!c.point) {
      throw Error(ErrorCode::kStalledAtBranchPoint,
                  "no companion after " + std::to_string(out.terms.size()) + " terms (" +
                      to_string(c.status) + ")");
    }
    const double ratio = link == Boundary::kH ? coefficient_ratio_h(walk, last.point(), *c.point)
                                              : coefficient_ratio_v(walk, last.point(), *c.point);
    out.terms.push_back({c.point->x, c.point->y, ratio * last.alpha});
    out.links.push_back(link);
    link = link == Boundary::kH ? Boundary::kV : Boundary::kH;
    norms.push_back(term_norm(out.terms.back()));

    const std::size_t n = out.terms.size() - 1;
    if (n >= 6) {
      const auto& a = out.terms[n - 2];
      const auto& z = out.terms[n];
      if (z.rho > a.rho || z.sigma > a.sigma) {
        throw Error(ErrorCode::kDiverged,
                    "term " + std::to_string(n) + " is not closer to the origin than term " +
                        std::to_string(n - 2));
      }
    }
    if (n >= 4) {
      const double q = std::max(norms[n] / norms[n - 2], norms[n - 1] / norms[n - 3]);
      const double built = norms[n] + norms[n - 1] + norms[n - 2];
      out.tail_bound = q < 1.0 ? built + (norms[n] + norms[n - 1]) * q / (1.0 - q)
                               : std::numeric_limits<double>::infinity();
      if (out.tail_bound < options.tol) break;
    }
  }
  return out;
}

AssembledMeasure assemble_measure(const std::vector<CompensationSeries>& series, const Walk& walk,
                                  int window) {
  const int k = static_cast<int>(series.size());
  if (k == 0) throw Error(ErrorCode::kInvalidInput, "no series to assemble");
  if (k + 1 > 4) {
    throw Error(ErrorCode::kIllConditioned,
                "more unknowns than balance equations at (0,0), (1,0), (0,1), (1,1)");
  }

  static constexpr int kStates[4][2] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  Eigen::MatrixXd a(4, k + 1);
  for (int c = 0; c <= k; ++c) {
    Measure m;
    if (c < k) {
      const auto& terms = series[c].terms;
      m = [&terms](int i, int j) {
        if (i == 0 && j == 0) return 0.0;
        double acc = 0.0;
        for (const auto& t : terms) acc += t.alpha * std::pow(t.rho, i) * std::pow(t.sigma, j);
        return acc;
      };
    } else {
      m = [](int i, int j) { return i == 0 && j == 0 ? 1.0 : 0.0; };
    }
    for (int r = 0; r < 4; ++r) a(r, c) = balance_residual_at(walk, m, kStates[r][0], kStates[r][1]);
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  AssembledMeasure out;
  out.window = window;
  out.condition_number = sv(0) / sv(k - 1);
  out.lsq_residual = sv(k) / sv(0);
  if (!(out.condition_number <= 1e12)) {
    throw Error(ErrorCode::kIllConditioned,
                "assembly system condition number " + std::to_string(out.condition_number));
  }
  const Eigen::VectorXd x = svd.matrixV().col(k);

  GammaSet g;
  for (int c = 0; c < k; ++c) {
    out.series_start.push_back(g.terms.size());
    for (const auto& t : series[c].terms) g.terms.push_back({t.rho, t.sigma, t.alpha * x(c)});
  }
  g.origin = x(k);
  const double mass = g.mass();
  if (!(std::abs(mass) > 1e-300)) throw Error(ErrorCode::kIllConditioned, "assembled measure has no mass");
  for (auto& t : g.terms) t.alpha /= mass;
  *g.origin /= mass;
  for (int c = 0; c < k; ++c) out.weights.push_back(x(c) / mass);
  out.set = std::move(g);
  out.max_balance_residual = balance_residuals(walk, out.set, window).max_residual();
  return out;
}

}  // namespace qpwalk
