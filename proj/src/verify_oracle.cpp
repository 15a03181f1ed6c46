#include "qpwalk/verify_oracle.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <random>

#include "qpwalk/kernel.hpp"

namespace qpwalk {

namespace {

struct Move {
  int s;
  int t;
  double prob;
};

// One-step law from (i,j), by region.
std::vector<Move> moves_from(const Walk& walk, int i, int j) {
  std::vector<Move> out;
  if (i > 0 && j > 0) {
    for (int s = -1; s <= 1; ++s)
      for (int t = -1; t <= 1; ++t) out.push_back({s, t, walk.p(s, t)});
  } else if (i > 0) {
    for (int s = -1; s <= 1; ++s) {
      out.push_back({s, 0, walk.h(s)});
      out.push_back({s, 1, walk.p(s, 1)});
    }
  } else if (j > 0) {
    for (int t = -1; t <= 1; ++t) {
      out.push_back({0, t, walk.v(t)});
      out.push_back({1, t, walk.p(1, t)});
    }
  } else {
    const double leave = walk.h(1) + walk.v(1) + walk.p(1, 1);
    out = {{1, 0, walk.h(1)}, {0, 1, walk.v(1)}, {1, 1, walk.p(1, 1)}, {0, 0, 1.0 - leave}};
  }
  return out;
}

// Column-stochastic transpose of the truncated transition matrix.
Eigen::SparseMatrix<double> transition_transpose(const Walk& walk, int n) {
  const int side = n + 1;
  auto index = [side](int i, int j) { return i * side + j; };
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(side) * side * 9);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      for (const auto& mv : moves_from(walk, i, j)) {
        if (mv.prob == 0.0) continue;
        int a = i + mv.s;
        int b = j + mv.t;
        if (a > n || b > n) {
          a = i;
          b = j;
        }
        entries.emplace_back(index(a, b), index(i, j), mv.prob);
      }
    }
  }
  Eigen::SparseMatrix<double> pt(side * side, side * side);
  pt.setFromTriplets(entries.begin(), entries.end());
  return pt;
}

Eigen::VectorXd solve_direct(const Eigen::SparseMatrix<double>& pt) {
  const Eigen::Index size = pt.rows();
  // (P^T - I) pi = 0 with the first equation replaced by pi_0 = 1.
  std::vector<Eigen::Triplet<double>> entries;
  for (int col = 0; col < pt.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(pt, col); it; ++it) {
      if (it.row() != 0) entries.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (Eigen::Index r = 1; r < size; ++r) entries.emplace_back(r, r, -1.0);
  entries.emplace_back(0, 0, 1.0);
  Eigen::SparseMatrix<double> a(size, size);
  a.setFromTriplets(entries.begin(), entries.end());
  a.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotConverged, "sparse LU factorisation failed");
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);
  rhs(0) = 1.0;
  Eigen::VectorXd pi = lu.solve(rhs);
  return pi / pi.sum();
}

Eigen::VectorXd solve_power(const Eigen::SparseMatrix<double>& pt, const PowerOptions& opt, int& iterations) {
  const Eigen::Index size = pt.rows();
  Eigen::VectorXd pi = Eigen::VectorXd::Constant(size, 1.0 / static_cast<double>(size));
  Eigen::VectorXd next(size);
  for (iterations = 1; iterations <= opt.max_iterations; ++iterations) {
    next.noalias() = pt * pi;
    next /= next.sum();
    const double r = (next - pi).lpNorm<1>();
    pi.swap(next);
    if (r <= opt.residual_tol) return pi;
  }
  throw Error(ErrorCode::kNotConverged,
              "power iteration did not converge in " + std::to_string(opt.max_iterations) + " iterations");
}

}  // namespace

LatticeWindow truncated_stationary(const Walk& walk, int n, SolveMethod method, const PowerOptions& power) {
  if (n < 8) throw Error(ErrorCode::kInvalidInput, "oracle window must be at least 8");
  if (method == SolveMethod::kAuto) {
    method = n <= kDirectSolveLimit ? SolveMethod::kDirect : SolveMethod::kPower;
  }
  const auto pt = transition_transpose(walk, n);
  LatticeWindow w;
  w.n = n;
  const Eigen::VectorXd pi =
      method == SolveMethod::kDirect ? solve_direct(pt) : solve_power(pt, power, w.iterations);
  // Row-major state order: index i * (n+1) + j.
  w.values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      pi.data(), n + 1, n + 1);
  return w;
}

double stationarity_residual(const Walk& walk, const LatticeWindow& w) {
  const auto pt = transition_transpose(walk, w.n);
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> grid = w.values;
  const Eigen::Map<const Eigen::VectorXd> pi(grid.data(), grid.size());
  return (pt * pi - pi).lpNorm<1>();
}

double balance_residual_at(const Walk& walk, const Measure& m, int i, int j) {
  double in = 0.0;
  if (i > 0 && j > 0) {
    for (int s = -1; s <= 1; ++s)
      for (int t = -1; t <= 1; ++t) in += m(i - s, j - t) * walk.p(s, t);
    return m(i, j) - in;
  }
  if (i > 0) {
    for (int s = -1; s <= 1; ++s) in += m(i - s, 1) * walk.p(s, -1) + m(i - s, 0) * walk.h(s);
    return m(i, 0) - in;
  }
  if (j > 0) {
    for (int t = -1; t <= 1; ++t) in += m(1, j - t) * walk.p(-1, t) + m(0, j - t) * walk.v(t);
    return m(0, j) - in;
  }
  const double out = m(0, 0) * (walk.h(1) + walk.v(1) + walk.p(1, 1));
  in = m(1, 0) * walk.h(-1) + m(0, 1) * walk.v(-1) + m(1, 1) * walk.p(-1, -1);
  return out - in;
}

double VerificationReport::max_residual() const {
  return std::max({max_residual_interior, max_residual_h, max_residual_v, max_residual_origin});
}

VerificationReport balance_residuals(const Walk& walk, const GammaSet& g, int n) {
  const int side = n + 2;
  Eigen::MatrixXd grid(side, side);
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j) grid(i, j) = g.value(i, j);
  const Measure m = [&grid](int i, int j) { return grid(i, j); };

  VerificationReport r;
  r.window = n;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double res = std::abs(balance_residual_at(walk, m, i, j));
      const double scale = std::abs(grid(i, j));
      const double rel = scale > 0.0 ? res / scale : res;
      double& slot = i > 0 && j > 0 ? r.max_residual_interior
                     : i > 0        ? r.max_residual_h
                     : j > 0        ? r.max_residual_v
                                    : r.max_residual_origin;
      slot = std::max(slot, rel);
    }
  }
  return r;
}

double compare(const GammaSet& g, const LatticeWindow& oracle, int core) {
  if (core < 0 || core + 10 > oracle.n) {
    throw Error(ErrorCode::kInvalidInput, "comparison core needs a margin of 10 cells inside the oracle window");
  }
  Eigen::MatrixXd m(core + 1, core + 1);
  for (int i = 0; i <= core; ++i)
    for (int j = 0; j <= core; ++j) m(i, j) = g.value(i, j);
  const Eigen::MatrixXd pi = oracle.values.topLeftCorner(core + 1, core + 1);
  const Eigen::MatrixXd mn = m / m.sum();
  const Eigen::MatrixXd pn = pi / pi.sum();
  double worst = 0.0;
  for (int i = 0; i <= core; ++i) {
    for (int j = 0; j <= core; ++j) {
      if (pi(i, j) < 1e-13) continue;
      worst = std::max(worst, std::abs(mn(i, j) - pn(i, j)) / pn(i, j));
    }
  }
  return worst;
}

PartitionResult brute_force_partition(const GammaSet& g) {
  const int n = static_cast<int>(g.terms.size());
  if (n > 10) throw Error(ErrorCode::kTooLarge, "brute force is limited to 10 terms");

  enum { kRho, kSigma, kEither };
  std::vector<std::uint32_t> share(static_cast<std::size_t>(3 * n), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const bool r = nearly_equal(g.terms[i].rho, g.terms[j].rho, g.tol);
      const bool s = nearly_equal(g.terms[i].sigma, g.terms[j].sigma, g.tol);
      if (r) share[kRho * n + i] |= 1u << j;
      if (s) share[kSigma * n + i] |= 1u << j;
      if (r || s) share[kEither * n + i] |= 1u << j;
    }
  }

  struct Best {
    int parts = -1;
    int ties = 0;
    std::vector<int> labels;
  } best[3];

  // Restricted growth strings: labels[0] = 0, labels[k] <= 1 + max(labels[0..k-1]).
  std::vector<int> labels(n, 0);
  std::vector<int> prefix_max(n, 0);
  auto visit = [&]() {
    const int parts = n == 0 ? 0 : prefix_max[n - 1] + 1;
    std::vector<std::uint32_t> members(parts, 0);
    for (int i = 0; i < n; ++i) members[labels[i]] |= 1u << i;
    for (int kind = 0; kind < 3; ++kind) {
      bool uncoupled = true;
      for (int i = 0; i < n && uncoupled; ++i) {
        if (share[kind * n + i] & ~members[labels[i]]) uncoupled = false;
      }
      if (!uncoupled) continue;
      if (parts > best[kind].parts) {
        best[kind] = {parts, 1, labels};
      } else if (parts == best[kind].parts) {
        ++best[kind].ties;
      }
    }
  };
  if (n > 0) {
    while (true) {
      visit();
      int k = n - 1;
      while (k > 0 && labels[k] > prefix_max[k - 1]) --k;
      if (k == 0) break;
      ++labels[k];
      prefix_max[k] = std::max(prefix_max[k - 1], labels[k]);
      for (int r = k + 1; r < n; ++r) {
        labels[r] = 0;
        prefix_max[r] = prefix_max[k];
      }
    }
  }

  PartitionResult out;
  IndexGroups* slots[3] = {&out.h_groups, &out.v_groups, &out.g_groups};
  for (int kind = 0; kind < 3; ++kind) {
    if (n == 0) continue;
    if (best[kind].ties != 1) {
      throw std::logic_error("maximal uncoupled partition is not unique");
    }
    // Labels of a restricted growth string already order groups by smallest member.
    IndexGroups& groups = *slots[kind];
    groups.assign(best[kind].parts, {});
    for (int i = 0; i < n; ++i) groups[best[kind].labels[i]].push_back(i);
  }
  return out;
}

ConvexityResult convexity_check(const Walk& walk, int samples, std::uint64_t seed) {
  const auto k = kernel(walk);
  const auto bp = branch_points(walk);
  const double floor = std::log(1e-6);
  auto lower = [floor](double c) { return c > 0.0 ? std::max(std::log(c), floor) : floor; };
  auto upper = [](double c) { return std::isfinite(c) ? std::min(std::log(c), 0.0) : 0.0; };
  const double u_lo = lower(bp.left.x);
  const double u_hi = upper(bp.right.x);
  const double v_lo = lower(bp.bottom.y);
  const double v_hi = upper(bp.top.y);

  auto e = [&k](double u, double v) { return k(std::exp(u), std::exp(v)); };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> du(u_lo, u_hi);
  std::uniform_real_distribution<double> dv(v_lo, v_hi);
  auto draw = [&](double& u, double& v) {
    for (int attempt = 0; attempt < 100000; ++attempt) {
      u = du(rng);
      v = dv(rng);
      if (e(u, v) < 0.0) return true;
    }
    return false;
  };

  ConvexityResult out;
  if (!(u_lo < u_hi && v_lo < v_hi)) return out;
  for (int n = 0; n < samples; ++n) {
    double u1, v1, u2, v2;
    if (!draw(u1, v1) || !draw(u2, v2)) break;
    const double um = 0.5 * (u1 + u2);
    const double vm = 0.5 * (v1 + v2);
    const double em = e(um, vm);
    ++out.tested;
    if (em > 1e-14 * k.scale(std::exp(um), std::exp(vm))) out.violations.push_back({u1, v1, u2, v2, em});
  }
  return out;
}

}  // namespace qpwalk
