#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace qpwalk {

// Coefficients in ascending powers: c(0) + c(1) x + c(2) x^2 + ...
template <typename Scalar>
using Poly = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
Scalar poly_eval(const Poly<Scalar>& c, Scalar x) {
  Scalar acc(0);
  for (Eigen::Index k = c.size() - 1; k >= 0; --k) acc = acc * x + c(k);
  return acc;
}

template <typename Scalar>
Scalar poly_derivative_eval(const Poly<Scalar>& c, Scalar x) {
  Scalar acc(0);
  for (Eigen::Index k = c.size() - 1; k >= 1; --k) acc = acc * x + Scalar(k) * c(k);
  return acc;
}

template <typename Scalar>
Poly<Scalar> poly_mul(const Poly<Scalar>& a, const Poly<Scalar>& b) {
  Poly<Scalar> out = Poly<Scalar>::Zero(a.size() + b.size() - 1);
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i, b.size()) += a(i) * b;
  return out;
}

template <typename Scalar>
Poly<Scalar> poly_sub(const Poly<Scalar>& a, const Poly<Scalar>& b) {
  Poly<Scalar> out = Poly<Scalar>::Zero(std::max(a.size(), b.size()));
  out.head(a.size()) += a;
  out.head(b.size()) -= b;
  return out;
}

struct RootSolveOptions {
  double degree_drop_tol = 1e-12;   // leading coeff below this * max|c| is dropped
  double imag_tol = 1e-9;           // accepted imaginary part of a real root
  double pair_imag_tol = 1e-6;      // near-conjugate pairs merged into a double root
  double residual_tol = 1e-9;       // relative residual for merged pairs
};

struct RootSolveResult {
  std::vector<double> real_roots;   // sorted ascending, +inf last, repeated per multiplicity
  int complex_count = 0;            // roots rejected as non-real
};

// All roots of a real polynomial of degree <= 4 (any degree works) from the
// eigenvalues of the companion matrix of the monic normalisation. Leading
// coefficients that vanish relative to the largest one become roots at +inf.
RootSolveResult real_roots(const Poly<double>& coeffs, const RootSolveOptions& options = {});

}  // namespace qpwalk
