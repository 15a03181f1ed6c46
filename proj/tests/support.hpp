#pragma once

#include <cmath>
#include <random>
#include <string>

#include "qpwalk/gamma_sets.hpp"
#include "qpwalk/io.hpp"
#include "qpwalk/kernel.hpp"
#include "qpwalk/walk_model.hpp"

namespace qpwalk::testing {

inline std::string preset_path(const std::string& name) {
  return std::string(QPWALK_PRESETS) + "/" + name + ".json";
}

inline Walk load_preset(const std::string& name) {
  return Walk::from(io::walk_from_json(io::read_json_file(preset_path(name))));
}

// Interior law from (s, t, probability) entries; blocked steps stay on the axis.
inline WalkSpec blocked_axis_walk(std::initializer_list<std::tuple<int, int, double>> steps) {
  WalkSpec w;
  for (auto [s, t, p] : steps) w.p(s, t) = p;
  for (int s = -1; s <= 1; ++s) w.h(s) = w.p(s, 0) + w.p(s, -1);
  for (int t = -1; t <= 1; ++t) w.v(t) = w.p(0, t) + w.p(-1, t);
  return w;
}

// The four walks of the preset files, typed in independently.
inline Walk walk_a() { return Walk::from(blocked_axis_walk({{-1, -1, 3.0 / 5}, {1, 0, 1.0 / 5}, {0, 1, 1.0 / 5}})); }
inline Walk walk_b() { return Walk::from(blocked_axis_walk({{1, 0, 1.0 / 5}, {0, -1, 2.0 / 5}, {-1, 1, 2.0 / 5}})); }
inline Walk walk_c() {
  return Walk::from(
      blocked_axis_walk({{1, 1, 1.0 / 62}, {-1, 1, 10.0 / 31}, {1, -1, 10.0 / 31}, {-1, -1, 21.0 / 62}}));
}
inline Walk walk_d() { return Walk::from(blocked_axis_walk({{-1, 1, 0.25}, {1, -1, 0.25}, {-1, -1, 0.5}})); }

inline Walk switch_walk() { return Walk::from(from_switch({0.8, 0.9, 0.3, 0.7, 0.6, 0.4})); }

struct RandomWalkOptions {
  double zero_probability = 0.3;
  bool no_north_east = false;
};

// Random valid walk: sparse random interior law, random axis laws filling the
// remaining mass.
inline Walk random_walk(std::mt19937_64& rng, const RandomWalkOptions& opt = {}) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (true) {
    WalkSpec w;
    for (int s = -1; s <= 1; ++s)
      for (int t = -1; t <= 1; ++t) w.p(s, t) = u(rng) < opt.zero_probability ? 0.0 : u(rng);
    if (opt.no_north_east) w.p(1, 0) = w.p(1, 1) = w.p(0, 1) = 0.0;
    const double total = w.interior.sum();
    if (total == 0.0) continue;
    w.interior /= total;
    const double up = w.p(-1, 1) + w.p(0, 1) + w.p(1, 1);
    const double right = w.p(1, -1) + w.p(1, 0) + w.p(1, 1);
    Eigen::Vector3d a, b;
    for (int k = 0; k < 3; ++k) {
      a(k) = u(rng) < opt.zero_probability / 2 ? 0.0 : u(rng);
      b(k) = u(rng) < opt.zero_probability / 2 ? 0.0 : u(rng);
    }
    if (a.sum() == 0.0 || b.sum() == 0.0) continue;
    w.horizontal = a / a.sum() * (1.0 - up);
    w.vertical = b / b.sum() * (1.0 - right);
    auto r = validate(w);
    if (r.ok()) return *r.walk;
  }
}

inline Walk random_nonsingular_walk(std::mt19937_64& rng, const RandomWalkOptions& opt = {}) {
  while (true) {
    Walk w = random_walk(rng, opt);
    if (!singular_class(w).singular()) return w;
  }
}

// Q(x,y) straight from its definition: x y (sum p_{s,t} x^{-s} y^{-t} - 1).
inline double kernel_by_definition(const Walk& w, double x, double y) {
  double acc = 0.0;
  for (int s = -1; s <= 1; ++s)
    for (int t = -1; t <= 1; ++t) acc += w.p(s, t) * std::pow(x, -s) * std::pow(y, -t);
  return x * y * (acc - 1.0);
}

// Both roots of Q(x, .) for the diagonal preset (resp. Q(., y)); the walk is
// symmetric so one routine serves both.
inline std::pair<double, double> diagonal_roots(double x) {
  const double a = 0.25 + 0.5 * x * x, b = -x, c = 0.25 * x * x;
  const double sq = std::sqrt(b * b - 4 * a * c);
  return {(-b - sq) / (2 * a), (-b + sq) / (2 * a)};
}

// Eight terms on the diagonal preset's curve: two pairs sharing rho
// (0.2, 0.3) and two pairs sharing sigma (0.22, 0.27). Maximal partitions
// have 6 horizontal, 6 vertical and 4 uncoupled groups.
inline GammaSet staircase_fixture() {
  GammaSet g;
  for (double rho : {0.2, 0.3}) {
    const auto [lo, hi] = diagonal_roots(rho);
    g.terms.push_back({rho, lo, 1.0});
    g.terms.push_back({rho, hi, -0.5});
  }
  for (double sigma : {0.22, 0.27}) {
    const auto [lo, hi] = diagonal_roots(sigma);
    g.terms.push_back({lo, sigma, 0.25});
    g.terms.push_back({hi, sigma, -0.125});
  }
  return g;
}

// Random set of up to `max_size` distinct terms whose coordinates come from
// small pools, so shared rho and sigma values are common.
inline GammaSet random_coupled_set(std::mt19937_64& rng, int max_size = 8) {
  std::uniform_int_distribution<int> size(1, max_size);
  std::uniform_int_distribution<int> pool_size(2, 6);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  std::vector<double> rhos(pool_size(rng)), sigmas(pool_size(rng));
  for (double& r : rhos) r = u(rng);
  for (double& s : sigmas) s = u(rng);
  std::uniform_int_distribution<std::size_t> pick_r(0, rhos.size() - 1), pick_s(0, sigmas.size() - 1);
  const int n = std::min<int>(size(rng), static_cast<int>(rhos.size() * sigmas.size()));
  GammaSet g;
  while (static_cast<int>(g.terms.size()) < n) {
    const double r = rhos[pick_r(rng)], s = sigmas[pick_s(rng)];
    bool fresh = true;
    for (const auto& t : g.terms) fresh = fresh && !(t.rho == r && t.sigma == s);
    if (fresh) g.terms.push_back({r, s, u(rng) - 0.5});
  }
  return g;
}

}  // namespace qpwalk::testing
