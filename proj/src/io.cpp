#include "qpwalk/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace qpwalk::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::kInvalidInput, what); }

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) bad(where + " must be a number");
  return j.get<double>();
}

Eigen::Vector3d triple(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) bad(where + " must be an array of 3 numbers");
  return {number(j[0], where), number(j[1], where), number(j[2], where)};
}

double field(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) bad(where + " is missing `" + key + "`");
  return number(j.at(key), where + "." + key);
}

const char* boundary_name(Boundary b) { return b == Boundary::kH ? "H" : "V"; }

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    bad(path + ": " + e.what());
  }
}

WalkSpec walk_from_json(const Json& j) {
  if (!j.is_object()) bad("walk file must be a JSON object");
  if (j.contains("switch")) {
    const Json& s = j.at("switch");
    if (!s.is_object()) bad("`switch` must be an object");
    SwitchParameters p;
    p.r1 = field(s, "r1", "switch");
    p.r2 = field(s, "r2", "switch");
    p.t11 = field(s, "t11", "switch");
    p.t12 = field(s, "t12", "switch");
    p.t21 = field(s, "t21", "switch");
    p.t22 = field(s, "t22", "switch");
    return from_switch(p);
  }
  for (const char* key : {"interior", "horizontal", "vertical"}) {
    if (!j.contains(key)) bad(std::string("walk file is missing `") + key + "`");
  }
  WalkSpec spec;
  const Json& rows = j.at("interior");
  if (!rows.is_array() || rows.size() != 3) bad("interior must have 3 rows");
  for (int r = 0; r < 3; ++r) spec.interior.row(r) = triple(rows[r], "interior row").transpose();
  spec.horizontal = triple(j.at("horizontal"), "horizontal");
  spec.vertical = triple(j.at("vertical"), "vertical");
  return spec;
}

Json walk_to_json(const WalkSpec& spec) {
  Json j;
  j["interior"] = Json::array();
  for (int r = 0; r < 3; ++r) {
    j["interior"].push_back({spec.interior(r, 0), spec.interior(r, 1), spec.interior(r, 2)});
  }
  j["horizontal"] = {spec.horizontal(0), spec.horizontal(1), spec.horizontal(2)};
  j["vertical"] = {spec.vertical(0), spec.vertical(1), spec.vertical(2)};
  return j;
}

GammaSet gamma_from_json(const Json& j) {
  if (j.is_object() && j.contains("measure")) return gamma_from_json(j.at("measure"));
  GammaSet g;
  const Json* list = &j;
  if (j.is_object()) {
    if (!j.contains("terms")) bad("term set object must contain `terms`");
    list = &j.at("terms");
    if (j.contains("origin") && !j.at("origin").is_null()) g.origin = number(j.at("origin"), "origin");
    if (j.contains("tol")) g.tol = number(j.at("tol"), "tol");
  }
  if (!list->is_array()) bad("terms must be an array");
  for (std::size_t k = 0; k < list->size(); ++k) {
    const Json& t = (*list)[k];
    const std::string where = "terms[" + std::to_string(k) + "]";
    if (!t.is_object()) bad(where + " must be an object");
    WeightedTerm w;
    w.rho = field(t, "rho", where);
    w.sigma = field(t, "sigma", where);
    w.alpha = t.contains("alpha") ? number(t.at("alpha"), where + ".alpha") : 1.0;
    g.terms.push_back(w);
  }
  return g;
}

Json gamma_to_json(const GammaSet& g) {
  Json j;
  j["terms"] = Json::array();
  for (const auto& t : g.terms) j["terms"].push_back({{"rho", t.rho}, {"sigma", t.sigma}, {"alpha", t.alpha}});
  if (g.origin) j["origin"] = *g.origin;
  j["tol"] = g.tol;
  return j;
}

Json extended(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json to_json(const BranchPointReport& r) {
  auto roots = [](const std::array<BranchRoot, 4>& rs) {
    Json values = Json::array();
    Json labels = Json::array();
    for (const auto& b : rs) {
      values.push_back(extended(b.value));
      labels.push_back({{"location", to_string(b.location)}, {"sign", to_string(b.sign)}});
    }
    return std::pair{values, labels};
  };
  auto point = [](Point p) { return Json::array({extended(p.x), extended(p.y)}); };
  const auto [xs, xl] = roots(r.roots_x);
  const auto [ys, yl] = roots(r.roots_y);
  Json j;
  j["roots_x"] = xs;
  j["roots_y"] = ys;
  j["corners"] = {{"left", point(r.left)}, {"bottom", point(r.bottom)},
                  {"right", point(r.right)}, {"top", point(r.top)}};
  j["labels"] = {{"roots_x", xl},
                 {"roots_y", yl},
                 {"inner_x", to_string(r.inner_x_case)},
                 {"outer_x", to_string(r.outer_x_case)},
                 {"inner_y", to_string(r.inner_y_case)},
                 {"outer_y", to_string(r.outer_y_case)}};
  return j;
}

Json to_json(const CompensationSeries& s) {
  Json j;
  j["terms"] = Json::array();
  for (const auto& t : s.terms) j["terms"].push_back({{"rho", t.rho}, {"sigma", t.sigma}, {"alpha", t.alpha}});
  j["links"] = Json::array();
  for (Boundary b : s.links) j["links"].push_back(boundary_name(b));
  j["tail_bound"] = extended(s.tail_bound);
  j["seed"] = {{"rho", s.seed.point.x}, {"sigma", s.seed.point.y}, {"boundary", boundary_name(s.seed.annihilates)}};
  j["reached_max_terms"] = s.reached_max_terms;
  return j;
}

Json to_json(const VerificationReport& r) {
  Json j;
  j["window"] = r.window;
  j["max_residual_interior"] = r.max_residual_interior;
  j["max_residual_h"] = r.max_residual_h;
  j["max_residual_v"] = r.max_residual_v;
  j["max_residual_origin"] = r.max_residual_origin;
  j["sup_rel_error"] = r.sup_rel_error < 0.0 ? Json(nullptr) : Json(r.sup_rel_error);
  return j;
}

Json to_json(const PartitionResult& p) {
  Json j;
  j["h_groups"] = p.h_groups;
  j["v_groups"] = p.v_groups;
  j["g_groups"] = p.g_groups;
  j["counts"] = {{"H", p.h_count()}, {"V", p.v_count()}, {"G", p.g_count()}};
  return j;
}

Json to_json(const ConditionReport& r) {
  Json j;
  Json residuals = Json::array();
  Json outside = Json::array();
  for (std::size_t k = 0; k < r.curve.terms.size(); ++k) {
    residuals.push_back(r.curve.terms[k].residual);
    if (r.curve.terms[k].outside_u) outside.push_back(k);
  }
  j["on_curve"] = {{"verdict", to_string(r.on_curve)},
                   {"tolerance", r.curve_tol},
                   {"worst_term", r.worst_term},
                   {"residuals", residuals},
                   {"outside_u", outside}};
  Json groups = Json::array();
  for (const auto& g : r.groups) groups.push_back({{"members", g.members}, {"extension", to_string(g.extension)}});
  j["pairwise_coupled"] = {{"verdict", to_string(r.coupled)},
                           {"coupling_tolerance", r.coupling_tol},
                           {"groups", groups}};
  j["origin_accumulation"] = {{"verdict", to_string(r.origin)},
                              {"no_north_east_steps", r.walk_condition},
                              {"trends_to_origin", r.trends_to_origin},
                              {"worst_contraction", r.worst_contraction}};
  j["negative_alpha"] = {{"verdict", to_string(r.negative_alpha)},
                         {"min_alpha_index", r.min_alpha_index},
                         {"min_alpha", r.min_alpha}};
  return j;
}

Json to_json(const ConvexityResult& r) {
  Json v = Json::array();
  for (const auto& w : r.violations) {
    v.push_back({{"a", {w.u1, w.v1}}, {"b", {w.u2, w.v2}}, {"e_mid", w.e_mid}});
  }
  return {{"tested", r.tested}, {"pass", r.pass()}, {"violations", v}};
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string trace_csv(const QPlusTrace& trace) {
  std::string out = "x,y,arc\n";
  for (const auto& p : trace.points) {
    out += format_double(p.x) + ',' + format_double(p.y) + ',' + to_string(p.arc) + '\n';
  }
  return out;
}

Json trace_json(const QPlusTrace& trace) {
  Json pts = Json::array();
  for (const auto& p : trace.points) pts.push_back({{"x", p.x}, {"y", p.y}, {"arc", to_string(p.arc)}});
  return {{"points", pts}, {"corners", to_json(trace.corners)["corners"]}};
}

std::string oracle_csv(const LatticeWindow& w) {
  std::string out = "i,j,pi\n";
  for (int i = 0; i <= w.n; ++i) {
    for (int j = 0; j <= w.n; ++j) {
      out += std::to_string(i) + ',' + std::to_string(j) + ',' + format_double(w.values(i, j)) + '\n';
    }
  }
  return out;
}

}  // namespace qpwalk::io
