#include "qpwalk/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "qpwalk/compensation.hpp"
#include "qpwalk/io.hpp"
#include "qpwalk/kernel.hpp"
#include "qpwalk/verify_oracle.hpp"

namespace qpwalk::cli {

namespace {

using io::Json;

struct Options {
  std::string walk_path;
  std::string gamma_path;
  std::string output;
  std::string format = "json";
  std::string oracle_csv;
  double tol = 1e-12;
  int max_terms = 200;
  int window = 12;
  int oracle_n = 80;
  int core = 8;
  int points = kDefaultTracePoints;
  int bound = 64;
  bool seed_all = false;
  bool claims_infinite = false;
  double threshold = 1e-6;
  std::optional<double> max_rel_error;
  SwitchParameters sw;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidWalk:
    case ErrorCode::kInvalidRouting:
    case ErrorCode::kInvalidInput:
    case ErrorCode::kSingularWalk:
    case ErrorCode::kTooLarge:
      return kInputError;
    default:
      return kVerdictFailure;
  }
}

class Runner {
 public:
  Runner(const Options& opt, std::ostream& out, std::ostream& err) : opt_(opt), out_(out), err_(err) {}

  int analyze();
  int trace();
  int branch_points_verb();
  int construct();
  int verify();
  int partition();
  int make_switch();

 private:
  // Validated walk, or nullopt after printing the issue list.
  std::optional<Walk> load_walk(const std::string& path);
  void emit(const std::string& text);
  void emit(const Json& j) { emit(j.dump(2) + "\n"); }

  const Options& opt_;
  std::ostream& out_;
  std::ostream& err_;
};

std::optional<Walk> Runner::load_walk(const std::string& path) {
  const WalkSpec spec = io::walk_from_json(io::read_json_file(path));
  auto result = validate(spec);
  if (result.ok()) return result.walk;
  Json errors = Json::array();
  for (const auto& issue : result.issues) {
    const char* kind = issue.kind == IssueKind::kNonStochastic        ? "NonStochastic"
                       : issue.kind == IssueKind::kNegativeProbability ? "NegativeProbability"
                                                                       : "Degenerate";
    errors.push_back({{"kind", kind},
                      {"region", issue.region},
                      {"residual", issue.residual},
                      {"index", {issue.index0, issue.index1}},
                      {"message", issue.describe()}});
  }
  err_ << Json{{"errors", errors}}.dump(2) << "\n";
  return std::nullopt;
}

void Runner::emit(const std::string& text) {
  if (opt_.output.empty()) {
    out_ << text;
    return;
  }
  std::ofstream f(opt_.output, std::ios::binary);
  if (!f) throw Error(ErrorCode::kInvalidInput, "cannot write " + opt_.output);
  f << text;
}

int Runner::analyze() {
  auto walk = load_walk(opt_.walk_path);
  if (!walk) return kInputError;
  const Drift d = drift(*walk);
  const SingularClass sc = singular_class(*walk);
  Json j;
  j["walk"] = io::walk_to_json(walk->spec());
  j["drift"] = {{"mx", d.mx}, {"my", d.my}};
  j["ergodicity_warning"] = !drift_allows_ergodicity(d);
  j["singular_class"] = sc.singular() ? std::string(1, pattern_letter(*sc.pattern)) : "nonsingular";
  const bool no_ne = has_no_north_east_steps(*walk);
  if (sc.singular()) {
    j["branch_points"] = nullptr;
    j["singularity"] = nullptr;
  } else {
    try {
      j["branch_points"] = io::to_json(branch_points(*walk));
    } catch (const Error& e) {
      j["branch_points"] = {{"error", e.what()}};
    }
    const auto s = detect_singularity(*walk);
    j["singularity"] = s ? Json::array({s->x, s->y}) : Json(nullptr);
  }
  j["eligible"] = !sc.singular() && no_ne;
  j["eligibility"] = {{"nonsingular", !sc.singular()}, {"no_north_east_steps", no_ne}};
  emit(j);
  return kOk;
}

int Runner::trace() {
  auto walk = load_walk(opt_.walk_path);
  if (!walk) return kInputError;
  const auto t = trace_qplus(*walk, opt_.points);
  if (opt_.format == "csv") {
    emit(io::trace_csv(t));
  } else {
    emit(io::trace_json(t));
  }
  return kOk;
}

int Runner::branch_points_verb() {
  auto walk = load_walk(opt_.walk_path);
  if (!walk) return kInputError;
  emit(io::to_json(branch_points(*walk)));
  return kOk;
}

int Runner::construct() {
  auto walk = load_walk(opt_.walk_path);
  if (!walk) return kInputError;
  if (!has_no_north_east_steps(*walk)) {
    throw Error(ErrorCode::kNotEligible, "walk has north, northeast or east interior steps");
  }
  std::vector<SeriesSeed> seeds = find_seeds(*walk, opt_.points);
  if (!opt_.seed_all) {
    std::vector<SeriesSeed> first;
    for (Boundary b : {Boundary::kV, Boundary::kH}) {
      for (const auto& s : seeds) {
        if (s.annihilates == b) {
          first.push_back(s);
          break;
        }
      }
    }
    seeds = first;
  }
  if (seeds.empty()) {
    err_ << "construct: Q meets neither boundary polynomial inside the unit square\n";
    return kVerdictFailure;
  }

  SeriesOptions so{opt_.tol, opt_.max_terms};
  std::vector<CompensationSeries> built;
  Json failed = Json::array();
  for (const auto& seed : seeds) {
    try {
      built.push_back(build_series(*walk, seed, so));
    } catch (const Error& e) {
      failed.push_back({{"seed", {seed.point.x, seed.point.y}},
                        {"boundary", seed.annihilates == Boundary::kH ? "H" : "V"},
                        {"error", e.what()}});
      err_ << "construct: " << e.what() << "\n";
    }
  }
  if (built.empty()) return kVerdictFailure;

  const auto m = assemble_measure(built, *walk, opt_.window);
  Json j;
  j["series"] = Json::array();
  for (const auto& s : built) j["series"].push_back(io::to_json(s));
  j["failed"] = failed;
  Json measure = io::gamma_to_json(m.set);
  measure["weights"] = m.weights;
  measure["series_start"] = m.series_start;
  measure["assembly"] = "least squares on the balance equations at (0,0), (1,0), (0,1), (1,1)";
  measure["condition_number"] = m.condition_number;
  measure["lsq_residual"] = m.lsq_residual;
  j["measure"] = measure;
  j["report"] = io::to_json(balance_residuals(*walk, m.set, opt_.window));
  emit(j);
  return kOk;
}

int Runner::verify() {
  auto walk = load_walk(opt_.walk_path);
  if (!walk) return kInputError;
  const GammaSet g = io::gamma_from_json(io::read_json_file(opt_.gamma_path));
  VerificationReport report = balance_residuals(*walk, g, opt_.window);
  if (opt_.oracle_n > 0) {
    const auto oracle = truncated_stationary(*walk, opt_.oracle_n);
    report.sup_rel_error = compare(g, oracle, std::min(opt_.core, opt_.oracle_n - 10));
    if (!opt_.oracle_csv.empty()) {
      std::ofstream f(opt_.oracle_csv, std::ios::binary);
      if (!f) throw Error(ErrorCode::kInvalidInput, "cannot write " + opt_.oracle_csv);
      f << io::oracle_csv(oracle);
    }
  }
  Json j;
  j["report"] = io::to_json(report);
  j["threshold"] = opt_.threshold;
  bool ok = report.max_residual() <= opt_.threshold;
  if (opt_.max_rel_error) {
    j["max_rel_error"] = *opt_.max_rel_error;
    ok = ok && report.sup_rel_error >= 0.0 && report.sup_rel_error <= *opt_.max_rel_error;
  }
  if (!singular_class(*walk).singular()) {
    const auto conditions = necessary_conditions(*walk, g, opt_.claims_infinite);
    j["conditions"] = io::to_json(conditions);
    if (opt_.claims_infinite) ok = ok && conditions.all_pass();
  }
  j["pass"] = ok;
  emit(j);
  return ok ? kOk : kVerdictFailure;
}

int Runner::partition() {
  const GammaSet g = io::gamma_from_json(io::read_json_file(opt_.gamma_path));
  Json j;
  j["issues"] = gamma_set_issues(g);
  j["partition"] = io::to_json(maximal_partitions(g));
  j["norm"] = g.norm();
  Json exps = Json::array();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto e = separating_exponent(g, static_cast<int>(i), opt_.bound);
    exps.push_back(e ? Json::array({e->first, e->second}) : Json(nullptr));
  }
  j["separating_exponents"] = exps;
  j["separating_bound"] = opt_.bound;
  bool ok = true;
  if (!opt_.walk_path.empty()) {
    auto walk = load_walk(opt_.walk_path);
    if (!walk) return kInputError;
    const auto conditions = necessary_conditions(*walk, g, opt_.claims_infinite);
    j["conditions"] = io::to_json(conditions);
    ok = conditions.all_pass();
  }
  emit(j);
  return ok ? kOk : kVerdictFailure;
}

int Runner::make_switch() {
  const WalkSpec spec = from_switch(opt_.sw);
  Json j = io::walk_to_json(spec);
  j["switch"] = {{"r1", opt_.sw.r1}, {"r2", opt_.sw.r2}, {"t11", opt_.sw.t11},
                 {"t12", opt_.sw.t12}, {"t21", opt_.sw.t21}, {"t22", opt_.sw.t22}};
  emit(j);
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Quarter-plane random walks: kernel curve, geometric-term measures, oracle checks"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto output = [&](CLI::App* sub) { sub->add_option("-o,--output", opt.output, "output file (default stdout)"); };
  auto walk_arg = [&](CLI::App* sub) {
    sub->add_option("walk", opt.walk_path, "walk JSON file")->required()->check(CLI::ExistingFile);
  };

  auto* analyze = app.add_subcommand("analyze", "drift, singular class, branch points, eligibility");
  walk_arg(analyze);
  output(analyze);

  auto* trace = app.add_subcommand("trace", "sample the positive component of the kernel curve");
  walk_arg(trace);
  output(trace);
  trace->add_option("--points", opt.points, "x samples")->check(CLI::Range(2, 10000000));
  trace->add_option("--format", opt.format)->check(CLI::IsMember({"json", "csv"}));

  auto* bp = app.add_subcommand("branch-points", "roots of the discriminants and corner points");
  walk_arg(bp);
  output(bp);

  auto* construct = app.add_subcommand("construct", "build and assemble compensation series");
  walk_arg(construct);
  output(construct);
  construct->add_option("--tol", opt.tol, "tail bound at which a series stops");
  construct->add_option("--max-terms", opt.max_terms)->check(CLI::Range(2, 100000));
  construct->add_option("--window", opt.window, "balance-residual window")->check(CLI::Range(1, 10000));
  construct->add_option("--points", opt.points, "samples for locating seeds")->check(CLI::Range(2, 10000000));
  construct->add_flag("--seed-all", opt.seed_all, "one series per boundary intersection in U");

  auto* verify = app.add_subcommand("verify", "balance residuals and oracle comparison of a term set");
  walk_arg(verify);
  verify->add_option("gamma", opt.gamma_path, "term set JSON")->required()->check(CLI::ExistingFile);
  output(verify);
  verify->add_option("--window", opt.window)->check(CLI::Range(1, 10000));
  verify->add_option("--oracle-n", opt.oracle_n, "oracle lattice size (0 skips the oracle)")
      ->check(CLI::Range(0, 2000));
  verify->add_option("--core", opt.core, "comparison window");
  verify->add_option("--threshold", opt.threshold, "largest accepted balance residual");
  verify->add_option("--max-rel-error", opt.max_rel_error, "largest accepted error against the oracle");
  verify->add_option("--oracle-csv", opt.oracle_csv, "also write the oracle grid as CSV");
  verify->add_flag("--claims-infinite", opt.claims_infinite, "apply the infinite-sum conditions");

  auto* partition = app.add_subcommand("partition", "maximal uncoupled partitions of a term set");
  partition->add_option("gamma", opt.gamma_path, "term set JSON")->required()->check(CLI::ExistingFile);
  partition->add_option("--walk", opt.walk_path, "also run the necessary conditions")->check(CLI::ExistingFile);
  partition->add_option("--bound", opt.bound, "separating exponent search bound")->check(CLI::Range(1, 4096));
  partition->add_flag("--claims-infinite", opt.claims_infinite);
  output(partition);

  auto* sw = app.add_subcommand("switch", "walk of the 2x2 clocked switch");
  sw->add_option("--r1", opt.sw.r1)->required();
  sw->add_option("--r2", opt.sw.r2)->required();
  sw->add_option("--t11", opt.sw.t11)->required();
  sw->add_option("--t12", opt.sw.t12)->required();
  sw->add_option("--t21", opt.sw.t21)->required();
  sw->add_option("--t22", opt.sw.t22)->required();
  output(sw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  Runner runner(opt, out, err);
  try {
    if (*analyze) return runner.analyze();
    if (*trace) return runner.trace();
    if (*bp) return runner.branch_points_verb();
    if (*construct) return runner.construct();
    if (*verify) return runner.verify();
    if (*partition) return runner.partition();
    if (*sw) return runner.make_switch();
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return kInputError;
}

}  // namespace qpwalk::cli
