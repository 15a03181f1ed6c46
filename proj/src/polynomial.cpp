#include "qpwalk/polynomial.hpp"

#include <Eigen/Eigenvalues>

#include <complex>

namespace qpwalk {

namespace {

double polish(const Poly<double>& c, double x) {
  // A few Newton steps; keep the iterate only while the residual shrinks.
  double best = x;
  double best_res = std::abs(poly_eval(c, x));
  for (int it = 0; it < 8 && best_res > 0.0; ++it) {
    const double d = poly_derivative_eval(c, best);
    if (d == 0.0) break;
    const double next = best - poly_eval(c, best) / d;
    const double res = std::abs(poly_eval(c, next));
    if (!(res < best_res)) break;
    best = next;
    best_res = res;
  }
  return best;
}

double abs_scale(const Poly<double>& c, double x) {
  double acc = 0.0;
  const double ax = std::abs(x);
  for (Eigen::Index k = c.size() - 1; k >= 0; --k) acc = acc * ax + std::abs(c(k));
  return acc;
}

}  // namespace

RootSolveResult real_roots(const Poly<double>& coeffs, const RootSolveOptions& options) {
  RootSolveResult result;
  const double max_abs = coeffs.cwiseAbs().maxCoeff();
  if (max_abs == 0.0) return result;

  Eigen::Index degree = coeffs.size() - 1;
  int infinite = 0;
  while (degree > 0 && std::abs(coeffs(degree)) < options.degree_drop_tol * max_abs) {
    --degree;
    ++infinite;
  }
  Eigen::Index low = 0;
  int zeros = 0;
  while (low < degree && std::abs(coeffs(low)) < options.degree_drop_tol * max_abs) {
    ++low;
    ++zeros;
  }
  const Poly<double> core = coeffs.segment(low, degree + 1 - low);
  const Eigen::Index n = core.size() - 1;

  std::vector<double> roots(zeros, 0.0);
  if (n >= 1) {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    companion.bottomLeftCorner(n - 1, n - 1).setIdentity();
    for (Eigen::Index k = 0; k < n; ++k) companion(k, n - 1) = -core(k) / core(n);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    const Eigen::VectorXcd eig = solver.eigenvalues();

    std::vector<bool> used(n, false);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (used[i]) continue;
      const std::complex<double> z = eig(i);
      if (std::abs(z.imag()) < options.imag_tol) {
        used[i] = true;
        roots.push_back(polish(core, z.real()));
        continue;
      }
      if (std::abs(z.imag()) < options.pair_imag_tol) {
        // Double real root split into a conjugate pair by rounding.
        Eigen::Index partner = -1;
        for (Eigen::Index j = i + 1; j < n; ++j) {
          if (!used[j] && std::abs(eig(j) - std::conj(z)) < 4.0 * options.pair_imag_tol) {
            partner = j;
            break;
          }
        }
        const double x = z.real();
        const double scale = abs_scale(core, x);
        if (partner >= 0 && std::abs(poly_eval(core, x)) <= options.residual_tol * scale) {
          used[i] = used[partner] = true;
          roots.push_back(x);
          roots.push_back(x);
          continue;
        }
      }
      used[i] = true;
      ++result.complex_count;
    }
  }
  std::sort(roots.begin(), roots.end());
  for (int k = 0; k < infinite; ++k) roots.push_back(std::numeric_limits<double>::infinity());
  result.real_roots = std::move(roots);
  return result;
}

}  // namespace qpwalk
