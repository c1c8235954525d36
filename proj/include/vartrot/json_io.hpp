#pragma once

#include <string>

#include <json.hpp>

#include "vartrot/cost.hpp"
#include "vartrot/upscale.hpp"

namespace vartrot {

using Json = nlohmann::json;

// JSON shapes (stable; every from_ function validates what it builds):
//   lattice     {"d", "extents": [W,H], "boundary": ["periodic","open"]}
//   couplings   {"model", "Jz", "hx", "Jy"}
//   term list   {"model", "lattice", "terms": [{"a","sites","c","l"}]}
//               field terms carry their single site, bonds both.
//   params      {"mode","layers","types","sites","tau","model",
//                "trained_on","theta"}
//   plan        {"lattice","model","family","layers","reps",
//                "gates": [{"k","q","th"}]}
//   cost report {"value","kind","samples","seed"(,"gradient")}
//   glue map    {"target","model","block_names","blocks","n_open",
//                "inserted","assignments":[{"term","region","block","site"}]}

Json lattice_to_json(const LatticeSpec& spec);
LatticeSpec lattice_from_json(const Json& j);

Json couplings_to_json(const CouplingSet& c);
CouplingSet couplings_from_json(const Json& j);

Json term_list_to_json(const TermList& tl);
TermList term_list_from_json(const Json& j);

Json param_table_to_json(const ParamTable& p);
ParamTable param_table_from_json(const Json& j);

Json plan_to_json(const CircuitPlan& plan);
CircuitPlan plan_from_json(const Json& j);

Json cost_report_to_json(const CostReport& r);
CostReport cost_report_from_json(const Json& j);

Json glue_map_to_json(const GlueMap& map);
GlueMap glue_map_from_json(const Json& j);

// Two-space indent plus trailing newline; rethrows parse errors with the
// path prepended.
void save_json(const std::string& path, const Json& j);
Json load_json(const std::string& path);

}  // namespace vartrot
