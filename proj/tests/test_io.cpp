#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"
#include "vartrot/config.hpp"
#include "vartrot/json_io.hpp"

using namespace vartrot;

namespace {

const CouplingSet kIsing{Model::tfim, 1.0, 0.25, 0.0};
const CouplingSet kXy{Model::tfxy, 1.0, 0.25, 0.5};

bool same_terms(const TermList& a, const TermList& b) {
  if (!(a.lattice == b.lattice) || a.model != b.model ||
      a.terms.size() != b.terms.size())
    return false;
  for (std::size_t i = 0; i < a.terms.size(); ++i)
    if (!(a.terms[i] == b.terms[i])) return false;
  return true;
}

}  // namespace

TEST_CASE("lattice and couplings survive a json round trip") {
  for (const LatticeSpec& spec :
       {chain(6), chain(5, Boundary::open),
        grid(3, 4, Boundary::periodic, Boundary::open),
        grid(4, 4, Boundary::open, Boundary::open)}) {
    LatticeSpec back = lattice_from_json(lattice_to_json(spec));
    CHECK(back == spec);
  }
  for (const CouplingSet& c : {kIsing, kXy, CouplingSet{Model::tfim, -0.3, 0.9, 0.0}}) {
    CouplingSet back = couplings_from_json(couplings_to_json(c));
    CHECK(back.model == c.model);
    CHECK(back.jz == c.jz);
    CHECK(back.hx == c.hx);
    CHECK(back.jy == c.jy);
  }
}

TEST_CASE("term lists keep order, sites and coefficients through json") {
  TermList tl = build_terms(grid(3, 4, Boundary::periodic, Boundary::open), kXy);
  Json j = term_list_to_json(tl);
  CHECK(same_terms(term_list_from_json(j), tl));

  // Field terms serialize their single site only.
  bool saw_field = false;
  for (const Json& e : j["terms"])
    if (e["a"] == "x") {
      CHECK(e["sites"].size() == 1);
      saw_field = true;
    } else {
      CHECK(e["sites"].size() == 2);
    }
  CHECK(saw_field);
}

TEST_CASE("parameter tables survive json in both modes") {
  ParamTable shared = trotter_init(0.3, 3, kIsing, chain(6));
  shared.at(1, 0) = -0.125;
  ParamTable back = param_table_from_json(param_table_to_json(shared));
  CHECK(back.mode == shared.mode);
  CHECK(back.layers == shared.layers);
  CHECK(back.types == shared.types);
  CHECK(back.sites == shared.sites);
  CHECK(back.tau == shared.tau);
  CHECK(back.model == shared.model);
  CHECK(back.trained_on == shared.trained_on);
  CHECK(back.theta == shared.theta);

  ParamTable site = trotter_init(0.2, 2, kXy,
                                 chain(4, Boundary::open),
                                 ParamMode::site_resolved);
  site.at(0, 3, 1) = 0.77;
  ParamTable site_back = param_table_from_json(param_table_to_json(site));
  CHECK(site_back.mode == ParamMode::site_resolved);
  CHECK(site_back.theta == site.theta);
  CHECK(site_back.at(0, 3, 1) == 0.77);
}

TEST_CASE("plans round trip exactly") {
  ParamTable p = trotter_init(0.4, 2, kXy, chain(5, Boundary::open));
  CircuitPlan plan = build_variational(p, chain(5, Boundary::open));
  plan.repetitions = 3;
  CircuitPlan back = plan_from_json(plan_to_json(plan));
  CHECK(back.lattice == plan.lattice);
  CHECK(back.model == plan.model);
  CHECK(back.family == plan.family);
  CHECK(back.layers == plan.layers);
  CHECK(back.repetitions == plan.repetitions);
  REQUIRE(back.gates.size() == plan.gates.size());
  for (std::size_t i = 0; i < plan.gates.size(); ++i)
    CHECK(back.gates[i] == plan.gates[i]);
}

TEST_CASE("cost reports keep their optional gradient") {
  CostReport r;
  r.value = 0.125;
  r.kind = CostKind::sampled;
  r.sample_count = 20;
  r.seed = 99;
  CostReport plain = cost_report_from_json(cost_report_to_json(r));
  CHECK(plain.value == r.value);
  CHECK(plain.kind == r.kind);
  CHECK(plain.sample_count == 20);
  CHECK(plain.seed == 99);
  CHECK_FALSE(plain.gradient.has_value());

  r.gradient = std::vector<double>{0.5, -0.25, 0.0};
  CostReport with = cost_report_from_json(cost_report_to_json(r));
  REQUIRE(with.gradient.has_value());
  CHECK(*with.gradient == *r.gradient);
}

TEST_CASE("glue maps round trip with their blocks and assignments") {
  ParamTable open_block = trotter_init(
      0.3, 2, kIsing, chain(4, Boundary::open), ParamMode::site_resolved);
  ParamTable shared = trotter_init(0.3, 2, kIsing, chain(4));
  GlueMap map = glue_open_map(open_block, shared, 4, 2, chain(6, Boundary::open));
  GlueMap back = glue_map_from_json(glue_map_to_json(map));

  CHECK(back.target == map.target);
  CHECK(back.model == map.model);
  CHECK(back.block_names == map.block_names);
  CHECK(back.n_open == map.n_open);
  CHECK(back.inserted == map.inserted);
  REQUIRE(back.blocks.size() == map.blocks.size());
  for (std::size_t i = 0; i < map.blocks.size(); ++i)
    CHECK(back.blocks[i].theta == map.blocks[i].theta);
  REQUIRE(back.assignments.size() == map.assignments.size());
  for (std::size_t i = 0; i < map.assignments.size(); ++i) {
    CHECK(back.assignments[i].term == map.assignments[i].term);
    CHECK(back.assignments[i].region == map.assignments[i].region);
    CHECK(back.assignments[i].source_block == map.assignments[i].source_block);
    CHECK(back.assignments[i].source_site == map.assignments[i].source_site);
  }

  // The rebuilt map drives the same circuit.
  CircuitPlan a = plan_from_map(map);
  CircuitPlan b = plan_from_map(back);
  REQUIRE(a.gates.size() == b.gates.size());
  for (std::size_t i = 0; i < a.gates.size(); ++i) CHECK(a.gates[i] == b.gates[i]);
}

TEST_CASE("json files round trip through disk") {
  const char* path = "io_roundtrip_tmp.json";
  ParamTable p = trotter_init(0.25, 2, kIsing, chain(4));
  save_json(path, param_table_to_json(p));
  ParamTable back = param_table_from_json(load_json(path));
  CHECK(back.theta == p.theta);
  std::remove(path);
  CHECK_THROWS_AS(load_json(path), std::runtime_error);
}

TEST_CASE("malformed json payloads are rejected") {
  Json good = param_table_to_json(trotter_init(0.3, 2, kIsing, chain(4)));
  Json missing = good;
  missing.erase("theta");
  CHECK_THROWS(param_table_from_json(missing));

  Json bad_mode = good;
  bad_mode["mode"] = "per-qubit";
  CHECK_THROWS_AS(param_table_from_json(bad_mode), std::invalid_argument);

  Json short_theta = good;
  short_theta["theta"] = std::vector<double>{0.1};
  CHECK_THROWS_AS(param_table_from_json(short_theta), std::invalid_argument);

  Json bad_lattice = lattice_to_json(chain(6));
  bad_lattice["extents"] = std::array<int, 2>{2, 1};
  CHECK_THROWS_AS(lattice_from_json(bad_lattice), std::invalid_argument);

  Json plan = plan_to_json(build_trotter(0.2, 1, chain(4), kIsing));
  plan["gates"][0]["q"] = std::vector<int>{0, 1, 2};
  CHECK_THROWS_AS(plan_from_json(plan), std::invalid_argument);
}

TEST_CASE("config documents parse comments, case and fallbacks") {
  ConfigDoc doc = ConfigDoc::parse(
      "# experiment\n"
      "Model = tfim\n"
      "  tau = 0.3   # time step\n"
      "m = 3\n"
      "flag = TRUE\n"
      "seed = 12345678901234567890\n"
      "grid = 1.5, 2.5,3\n"
      "\n");
  CHECK(doc.has("model"));
  CHECK(doc.has("MODEL"));
  CHECK_FALSE(doc.has("missing"));
  CHECK(doc.get_string("model") == "tfim");
  CHECK(doc.get_double("tau") == 0.3);
  CHECK(doc.get_int("m") == 3);
  CHECK(doc.get_bool("flag", false));
  CHECK(doc.get_u64("seed", 0) == 12345678901234567890ull);
  CHECK(doc.get_double_list("grid") == std::vector<double>{1.5, 2.5, 3.0});
  CHECK(doc.get_double("absent", 7.5) == 7.5);
  CHECK(doc.get_string("absent", "x") == "x");
  CHECK_THROWS_AS(doc.get_string("absent"), std::invalid_argument);
  CHECK_THROWS_AS(doc.get_double("model"), std::invalid_argument);
  CHECK_THROWS_AS(ConfigDoc::parse("no equals sign"), std::invalid_argument);
  CHECK_THROWS_AS(doc.get_bool("tau", false), std::invalid_argument);
}

TEST_CASE("experiment configs assemble from key-value text") {
  ConfigDoc doc = ConfigDoc::parse(
      "model = tfim\n"
      "d = 1\n"
      "extents = 6\n"
      "boundary = periodic\n"
      "Jz = 1.0\n"
      "hx = 0.25\n"
      "tau = 0.3\n"
      "m = 3\n"
      "axis = size\n"
      "sizes = 6,8,10\n"
      "metric = sampled\n"
      "samples = 10\n"
      "seed = 7\n"
      "pg = 0.995\n");
  ExperimentConfig cfg = experiment_from_config(doc);
  CHECK(cfg.model == Model::tfim);
  CHECK(cfg.lattice == chain(6));
  CHECK(cfg.couplings.jz == 1.0);
  CHECK(cfg.couplings.hx == 0.25);
  CHECK(cfg.tau == 0.3);
  CHECK(cfg.layers == 3);
  CHECK(cfg.axis == SweepAxis::size);
  REQUIRE(cfg.size_grid.size() == 3);
  CHECK(cfg.size_grid[1] == std::array<int, 2>{8, 1});
  CHECK(cfg.metric == Metric::sampled);
  CHECK(cfg.samples == 10);
  CHECK(cfg.seed == 7);
  CHECK(cfg.noise.per_gate_fidelity == 0.995);
  cfg.validate();
}

TEST_CASE("two-dimensional and grid-valued config keys") {
  ConfigDoc doc = ConfigDoc::parse(
      "model = tfxy\n"
      "d = 2\n"
      "extents = 3x4\n"
      "boundary = periodic\n"
      "boundary_y = open\n"
      "Jz = 1\n"
      "hx = 0.5\n"
      "Jy = 0.25\n"
      "tau = 0.2\n"
      "axis = couplings\n"
      "couplings_grid = 1,0.25,0.5 ; 0.5,0.1,0.2\n"
      "metric = frobenius\n"
      "observable = 0,1\n"
      "optimize_each_point = yes\n"
      "lr = 0.002\n"
      "max_steps = 50\n");
  ExperimentConfig cfg = experiment_from_config(doc);
  CHECK(cfg.model == Model::tfxy);
  CHECK(cfg.lattice == grid(3, 4, Boundary::periodic, Boundary::open));
  REQUIRE(cfg.coupling_grid.size() == 2);
  CHECK(cfg.coupling_grid[0].jy == 0.5);
  CHECK(cfg.coupling_grid[1].jz == 0.5);
  CHECK(cfg.coupling_grid[1].model == Model::tfxy);
  CHECK(cfg.observable_sites == std::vector<int>{0, 1});
  CHECK(cfg.optimize_each_point);
  CHECK(cfg.adam.learning_rate == 0.002);
  CHECK(cfg.adam.max_steps == 50);
  cfg.validate();

  ConfigDoc sizes2d = ConfigDoc::parse("d = 2\nsizes = 3x3, 3x4\naxis = size\n");
  ExperimentConfig c2 = experiment_from_config(sizes2d);
  REQUIRE(c2.size_grid.size() == 2);
  CHECK(c2.size_grid[0] == std::array<int, 2>{3, 3});
  CHECK(c2.size_grid[1] == std::array<int, 2>{3, 4});

  CHECK_THROWS_AS(experiment_from_config(
                      ConfigDoc::parse("couplings_grid = 1\naxis = couplings\n")),
                  std::invalid_argument);
}
