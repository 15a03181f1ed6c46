#pragma once

#include <json.hpp>

#include <string>

#include "qpwalk/compensation.hpp"
#include "qpwalk/gamma_sets.hpp"
#include "qpwalk/kernel.hpp"
#include "qpwalk/verify_oracle.hpp"
#include "qpwalk/walk_model.hpp"

namespace qpwalk::io {

using Json = nlohmann::ordered_json;

// Parse failures throw Error(kInvalidInput).
Json read_json_file(const std::string& path);

// {interior: 3x3 rows s=-1,0,1, horizontal: [3], vertical: [3]} or
// {switch: {r1, r2, t11, t12, t21, t22}}; `switch` overrides the arrays.
WalkSpec walk_from_json(const Json& j);
Json walk_to_json(const WalkSpec& spec);

// A list of {rho, sigma, alpha}, an object with `terms` (and optional
// `origin`, `tol`), or a construct report (its `measure` is used).
GammaSet gamma_from_json(const Json& j);
Json gamma_to_json(const GammaSet& g);

Json to_json(const BranchPointReport& r);
Json to_json(const CompensationSeries& s);
Json to_json(const VerificationReport& r);
Json to_json(const PartitionResult& p);
Json to_json(const ConditionReport& r);
Json to_json(const ConvexityResult& r);

// Extended reals: +inf becomes the string "inf".
Json extended(double x);

// "%.17g"
std::string format_double(double x);

std::string trace_csv(const QPlusTrace& trace);
Json trace_json(const QPlusTrace& trace);
std::string oracle_csv(const LatticeWindow& w);

}  // namespace qpwalk::io
