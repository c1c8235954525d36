#include "vartrot/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace vartrot {

namespace {

std::vector<int> support_of(const std::array<int, 2>& sites) {
  if (sites[1] < 0) return {sites[0]};
  return {sites[0], sites[1]};
}

std::array<int, 2> sites_from_support(const Json& q) {
  if (!q.is_array() || q.empty() || q.size() > 2)
    throw std::invalid_argument("site support must hold one or two sites");
  if (q.size() == 1) return {q[0].get<int>(), -1};
  return {q[0].get<int>(), q[1].get<int>()};
}

}  // namespace

Json lattice_to_json(const LatticeSpec& spec) {
  return Json{{"d", spec.dimension},
              {"extents", spec.extents},
              {"boundary", Json::array({to_string(spec.boundary[0]),
                                        to_string(spec.boundary[1])})}};
}

LatticeSpec lattice_from_json(const Json& j) {
  LatticeSpec spec;
  spec.dimension = j.at("d").get<int>();
  spec.extents = j.at("extents").get<std::array<int, 2>>();
  const Json& b = j.at("boundary");
  if (!b.is_array() || b.size() != 2)
    throw std::invalid_argument("boundary must list both axes");
  spec.boundary = {boundary_from_string(b[0].get<std::string>()),
                   boundary_from_string(b[1].get<std::string>())};
  spec.validate();
  return spec;
}

Json couplings_to_json(const CouplingSet& c) {
  return Json{{"model", to_string(c.model)},
              {"Jz", c.jz},
              {"hx", c.hx},
              {"Jy", c.jy}};
}

CouplingSet couplings_from_json(const Json& j) {
  CouplingSet c{model_from_string(j.at("model").get<std::string>()),
                j.at("Jz").get<double>(), j.at("hx").get<double>(),
                j.at("Jy").get<double>()};
  c.validate();
  return c;
}

Json term_list_to_json(const TermList& tl) {
  Json terms = Json::array();
  for (const Term& t : tl.terms)
    terms.push_back(Json{{"a", to_string(t.kind)},
                         {"sites", support_of(t.sites)},
                         {"c", t.coefficient},
                         {"l", t.sublayer}});
  return Json{{"model", to_string(tl.model)},
              {"lattice", lattice_to_json(tl.lattice)},
              {"terms", std::move(terms)}};
}

TermList term_list_from_json(const Json& j) {
  TermList tl;
  tl.model = model_from_string(j.at("model").get<std::string>());
  tl.lattice = lattice_from_json(j.at("lattice"));
  for (const Json& e : j.at("terms")) {
    Term t;
    t.kind = term_kind_from_string(e.at("a").get<std::string>());
    t.sites = sites_from_support(e.at("sites"));
    t.coefficient = e.at("c").get<double>();
    t.sublayer = e.at("l").get<int>();
    tl.terms.push_back(t);
  }
  return tl;
}

Json param_table_to_json(const ParamTable& p) {
  return Json{{"mode", to_string(p.mode)},
              {"layers", p.layers},
              {"types", p.types},
              {"sites", p.sites},
              {"tau", p.tau},
              {"model", to_string(p.model)},
              {"trained_on", lattice_to_json(p.trained_on)},
              {"theta", p.theta}};
}

ParamTable param_table_from_json(const Json& j) {
  ParamTable p;
  p.mode = param_mode_from_string(j.at("mode").get<std::string>());
  p.layers = j.at("layers").get<int>();
  p.types = j.at("types").get<int>();
  p.sites = j.at("sites").get<int>();
  p.tau = j.at("tau").get<double>();
  p.model = model_from_string(j.at("model").get<std::string>());
  p.trained_on = lattice_from_json(j.at("trained_on"));
  p.theta = j.at("theta").get<std::vector<double>>();
  p.validate();
  return p;
}

Json plan_to_json(const CircuitPlan& plan) {
  Json gates = Json::array();
  for (const Gate& g : plan.gates)
    gates.push_back(Json{{"k", to_string(g.kind)},
                         {"q", support_of(g.sites)},
                         {"th", g.angle}});
  return Json{{"lattice", lattice_to_json(plan.lattice)},
              {"model", to_string(plan.model)},
              {"family", to_string(plan.family)},
              {"layers", plan.layers},
              {"reps", plan.repetitions},
              {"gates", std::move(gates)}};
}

CircuitPlan plan_from_json(const Json& j) {
  CircuitPlan plan;
  plan.lattice = lattice_from_json(j.at("lattice"));
  plan.model = model_from_string(j.at("model").get<std::string>());
  plan.family = plan_family_from_string(j.at("family").get<std::string>());
  plan.layers = j.at("layers").get<int>();
  plan.repetitions = j.at("reps").get<int>();
  for (const Json& e : j.at("gates")) {
    Gate g;
    g.kind = term_kind_from_string(e.at("k").get<std::string>());
    g.sites = sites_from_support(e.at("q"));
    g.angle = e.at("th").get<double>();
    plan.gates.push_back(g);
  }
  plan.validate();
  return plan;
}

Json cost_report_to_json(const CostReport& r) {
  Json j{{"value", r.value},
         {"kind", to_string(r.kind)},
         {"samples", r.sample_count},
         {"seed", r.seed}};
  if (r.gradient) j["gradient"] = *r.gradient;
  return j;
}

CostReport cost_report_from_json(const Json& j) {
  CostReport r;
  r.value = j.at("value").get<double>();
  r.kind = cost_kind_from_string(j.at("kind").get<std::string>());
  r.sample_count = j.at("samples").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("gradient"))
    r.gradient = j.at("gradient").get<std::vector<double>>();
  return r;
}

Json glue_map_to_json(const GlueMap& map) {
  Json blocks = Json::array();
  for (const ParamTable& p : map.blocks) blocks.push_back(param_table_to_json(p));
  Json assignments = Json::array();
  for (const GlueAssignment& a : map.assignments)
    assignments.push_back(
        Json{{"term", Json{{"a", to_string(a.term.kind)},
                           {"sites", support_of(a.term.sites)},
                           {"c", a.term.coefficient},
                           {"l", a.term.sublayer}}},
             {"region", to_string(a.region)},
             {"block", a.source_block},
             {"site", a.source_site}});
  return Json{{"target", lattice_to_json(map.target)},
              {"model", to_string(map.model)},
              {"block_names", map.block_names},
              {"blocks", std::move(blocks)},
              {"n_open", map.n_open},
              {"inserted", map.inserted},
              {"assignments", std::move(assignments)}};
}

GlueMap glue_map_from_json(const Json& j) {
  GlueMap map;
  map.target = lattice_from_json(j.at("target"));
  map.model = model_from_string(j.at("model").get<std::string>());
  map.block_names = j.at("block_names").get<std::vector<std::string>>();
  for (const Json& b : j.at("blocks"))
    map.blocks.push_back(param_table_from_json(b));
  map.n_open = j.at("n_open").get<int>();
  map.inserted = j.at("inserted").get<int>();
  for (const Json& e : j.at("assignments")) {
    GlueAssignment a;
    const Json& t = e.at("term");
    a.term.kind = term_kind_from_string(t.at("a").get<std::string>());
    a.term.sites = sites_from_support(t.at("sites"));
    a.term.coefficient = t.at("c").get<double>();
    a.term.sublayer = t.at("l").get<int>();
    a.region = glue_region_from_string(e.at("region").get<std::string>());
    a.source_block = e.at("block").get<int>();
    a.source_site = e.at("site").get<int>();
    if (a.source_block < 0 ||
        a.source_block >= static_cast<int>(map.blocks.size()))
      throw std::invalid_argument("assignment points at a missing block");
    map.assignments.push_back(a);
  }
  return map;
}

void save_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

}  // namespace vartrot
