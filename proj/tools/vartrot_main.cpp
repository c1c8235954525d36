// Command-line front end: optimize parameter tables, re-target them to
// larger lattices, and run the benchmark pipelines. Every subcommand reads
// the same plain-text config schema (see ConfigDoc / experiment_from_config)
// and JSON artifacts produced by the other subcommands.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vartrot/bench.hpp"
#include "vartrot/config.hpp"
#include "vartrot/json_io.hpp"
#include "vartrot/upscale.hpp"

using namespace vartrot;

namespace {

// Accepts both a bare parameter table and an optimize artifact wrapping one.
ParamTable load_params(const std::string& path) {
  Json j = load_json(path);
  if (j.contains("params")) j = j["params"];
  return param_table_from_json(j);
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + out_path);
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CostFunction make_cost(const ExperimentConfig& cfg, const TermList& terms,
                       CostKind kind) {
  if (kind == CostKind::frobenius)
    return CostFunction::frobenius(terms, cfg.tau);
  return CostFunction::sampled(terms, cfg.tau, cfg.samples, cfg.seed,
                               cfg.krylov);
}

int cmd_optimize(const ExperimentConfig& cfg, const ConfigDoc& doc,
                 const std::string& params_path, const std::string& out_path,
                 const std::string& metric_name) {
  TermList terms = build_terms(cfg.lattice, cfg.couplings);
  CostKind kind = cost_kind_from_string(
      metric_name.empty() ? doc.get_string("metric", "frobenius")
                          : metric_name);
  CostFunction f = make_cost(cfg, terms, kind);

  ParamMode mode = param_mode_from_string(doc.get_string("mode", "shared"));
  ParamTable p0 =
      params_path.empty()
          ? trotter_init(cfg.tau, cfg.layers, cfg.couplings, cfg.lattice, mode)
          : load_params(params_path);
  double initial = f.value(p0);
  OptimizationTrace tr = optimize(
      p0, [&](const ParamTable& p) { return f.value(p); },
      [&](const ParamTable& p) { return f.gradient(p); }, cfg.adam);

  GateStats st = gate_stats(build_variational(tr.best_params, cfg.lattice));
  Json artifact{{"params", param_table_to_json(tr.best_params)},
                {"metric", to_string(kind)},
                {"samples", kind == CostKind::sampled ? cfg.samples : 0},
                {"seed", cfg.seed},
                {"initial_cost", initial},
                {"best_cost", tr.best_cost},
                {"steps", tr.steps},
                {"aborted", tr.aborted},
                {"wall_seconds", tr.wall_seconds},
                {"gates", st.gate_count},
                {"depth", st.depth_measured},
                {"cost_trace", tr.cost_trace}};
  save_json(out_path, artifact);
  std::cout << "optimized " << to_string(cfg.model) << " "
            << cfg.lattice.extents[0] << "x" << cfg.lattice.extents[1]
            << " m=" << cfg.layers << " tau=" << cfg.tau << " "
            << to_string(kind) << ": " << fmt17(initial) << " -> "
            << fmt17(tr.best_cost) << " in " << tr.steps << " steps ("
            << fmt17(tr.wall_seconds) << " s) -> " << out_path << "\n";
  if (tr.aborted)
    std::cerr << "note: optimizer aborted on a non-finite value; "
                 "best-so-far parameters were kept\n";
  return 0;
}

int cmd_upscale(const std::string& params_path, const std::string& bulk_path,
                const std::string& extents_text, int n_open, int inserted,
                bool seam_from_boundary, const std::string& out_path) {
  ParamTable params = load_params(params_path);
  if (bulk_path.empty()) {
    // Fully periodic upscaling: same angles on a larger lattice.
    LatticeSpec target = params.trained_on;
    target.extents = parse_extents(extents_text);
    CircuitPlan plan = upscale_periodic(params, target);
    ParamTable up = params;
    up.trained_on = target;
    GateStats st = gate_stats(plan);
    Json artifact{{"params", param_table_to_json(up)},
                  {"gates", st.gate_count},
                  {"depth", st.depth_measured}};
    save_json(out_path, artifact);
    std::cout << "upscaled to " << target.extents[0] << "x"
              << target.extents[1] << ": G=" << st.gate_count
              << " D=" << st.depth_measured << " -> " << out_path << "\n";
    return 0;
  }
  ParamTable bulk = load_params(bulk_path);
  LatticeSpec target = params.trained_on;
  target.extents = parse_extents(extents_text);
  GlueMap map = glue_open_map(params, bulk, n_open, inserted, target,
                              seam_from_boundary);
  CircuitPlan plan = plan_from_map(map);
  GateStats st = gate_stats(plan);
  Json artifact{{"map", glue_map_to_json(map)},
                {"plan", plan_to_json(plan)},
                {"gates", st.gate_count},
                {"depth", st.depth_measured}};
  save_json(out_path, artifact);
  std::cout << "glued " << map.block_names[0] << "+" << map.block_names[1]
            << " onto " << target.extents[0] << "x" << target.extents[1]
            << " (inserted=" << inserted
            << (seam_from_boundary ? ", seam from boundary" : "")
            << "): G=" << st.gate_count << " -> " << out_path << "\n";
  return 0;
}

int cmd_evaluate(const ExperimentConfig& cfg, const std::string& params_path,
                 const std::string& plan_path, const std::string& out_path,
                 const std::string& metric_name) {
  CircuitPlan plan;
  if (!plan_path.empty()) {
    Json j = load_json(plan_path);
    if (j.contains("plan")) j = j["plan"];
    plan = plan_from_json(j);
  } else {
    ParamTable params = load_params(params_path);
    plan = build_variational(params, cfg.lattice);
  }
  plan.repetitions = cfg.repetitions;
  TermList terms = build_terms(plan.lattice, cfg.couplings);
  double total_time = cfg.repetitions * cfg.tau;

  CostKind kind = cost_kind_from_string(
      metric_name.empty() ? "frobenius" : metric_name);
  CostReport report;
  if (kind == CostKind::frobenius) {
    report = frobenius_cost(circuit_unitary(plan),
                            exact_propagator_dense(terms, total_time));
  } else {
    EvolvedSamples ev = evolve_samples(
        terms, total_time,
        SampleSet::haar(plan.lattice.site_count(), cfg.samples, cfg.seed),
        cfg.krylov);
    report = sampled_cost(plan, ev);
  }
  GateStats st = gate_stats(plan);
  Json j = cost_report_to_json(report);
  j["gates"] = st.gate_count;
  j["depth"] = st.depth_measured;
  j["tau"] = cfg.tau;
  j["reps"] = cfg.repetitions;
  emit(out_path, j.dump(2) + "\n");
  return 0;
}

int cmd_sweep(const ExperimentConfig& cfg, const std::string& params_path,
              const std::string& out_path) {
  std::optional<ParamTable> params;
  if (!params_path.empty()) params = load_params(params_path);
  SweepOutput out = run_sweep(cfg, params);
  emit(out_path, to_csv(out.rows));
  for (const std::string& note : out.notes) std::cerr << "note: " << note << "\n";
  for (const auto& [label, fit] : out.fits)
    std::cout << "fit " << label << ": slope=" << fmt17(fit.slope)
              << " intercept=" << fmt17(fit.intercept)
              << " sigma=" << fmt17(fit.sigma) << " points=" << fit.points
              << "\n";
  if (!out_path.empty())
    std::cout << "wrote " << out.rows.size() << " grid points -> " << out_path
              << "\n";
  return 0;
}

int cmd_nisq(const ExperimentConfig& cfg, const std::string& params_path,
             const std::string& out_path, const std::string& metric_name) {
  TermList terms = build_terms(cfg.lattice, cfg.couplings);
  CircuitPlan plan;
  if (params_path.empty()) {
    plan = build_trotter(cfg.tau, cfg.layers, cfg.lattice, cfg.couplings);
  } else {
    plan = build_variational(load_params(params_path), cfg.lattice);
  }
  plan.repetitions = cfg.repetitions;
  double total_time = cfg.repetitions * cfg.tau;

  CostKind kind =
      cost_kind_from_string(metric_name.empty() ? "sampled" : metric_name);
  double cost;
  if (kind == CostKind::frobenius) {
    cost = frobenius_cost(circuit_unitary(plan),
                          exact_propagator_dense(terms, total_time))
               .value;
  } else {
    EvolvedSamples ev = evolve_samples(
        terms, total_time,
        SampleSet::haar(cfg.lattice.site_count(), cfg.samples, cfg.seed),
        cfg.krylov);
    cost = sampled_cost(plan, ev).value;
  }
  double f_approx = std::max(0.0, 1.0 - cost);
  GateStats st = gate_stats(plan);
  Json j{{"plan", params_path.empty() ? "trotter" : "variational"},
         {"metric", to_string(kind)},
         {"cost", cost},
         {"f_approx", f_approx},
         {"gates", st.gate_count},
         {"depth", st.depth_measured},
         {"pg", cfg.noise.per_gate_fidelity},
         {"infidelity", nisq_infidelity(f_approx, plan, cfg.noise)}};
  emit(out_path, j.dump(2) + "\n");
  return 0;
}

int cmd_observable(const ExperimentConfig& cfg, const std::string& params_path,
                   const std::string& out_path) {
  if (cfg.observable_sites.empty())
    throw std::invalid_argument("config needs 'observable = i[,j]'");
  TermList terms = build_terms(cfg.lattice, cfg.couplings);
  CircuitPlan plan =
      params_path.empty()
          ? build_trotter(cfg.tau, cfg.layers, cfg.lattice, cfg.couplings)
          : build_variational(load_params(params_path), cfg.lattice);
  StateVector psi0 = StateVector::plus_state(cfg.lattice.site_count());
  std::vector<StepRecord> recs =
      evolve_and_measure(plan, terms, cfg.tau, psi0, cfg.repetitions,
                         cfg.observable_sites, cfg.krylov);
  std::string csv = "step,time,approx,exact,abs_error,rel_error\n";
  for (const StepRecord& r : recs) {
    csv += std::to_string(r.step) + "," + fmt17(r.time) + "," +
           fmt17(r.approx) + "," + fmt17(r.exact) + "," + fmt17(r.abs_error) +
           "," + fmt17(r.rel_error) + "\n";
  }
  emit(out_path, csv);
  return 0;
}

int cmd_suzuki_bench(const ExperimentConfig& cfg,
                     const std::vector<int>& orders,
                     const std::string& out_path) {
  TermList terms = build_terms(cfg.lattice, cfg.couplings);
  int n = cfg.lattice.site_count();

  // The overlap convention feeds F_approx at every size; the operator-level
  // cost rides along as a cross-check while dense evolution still fits.
  EvolvedSamples ev = evolve_samples(
      terms, cfg.tau, SampleSet::haar(n, cfg.samples, cfg.seed), cfg.krylov);
  bool dense = n <= kDenseCap;
  DenseOperator u_ex;
  if (dense) u_ex = exact_propagator_dense(terms, cfg.tau);

  std::string csv = "order,m,N,G,D,sampled_cost,frobenius_cost,infidelity\n";
  for (int order : orders) {
    CircuitPlan plan = build_suzuki(static_cast<SuzukiOrder>(order), cfg.tau,
                                    cfg.layers, cfg.lattice, cfg.couplings);
    GateStats st = gate_stats(plan);
    double cs = sampled_cost(plan, ev).value;
    std::string cf =
        dense ? fmt17(frobenius_cost(circuit_unitary(plan), u_ex).value) : "";
    double infid = nisq_infidelity(std::max(0.0, 1.0 - cs), plan, cfg.noise);
    csv += std::to_string(order) + "," + std::to_string(cfg.layers) + "," +
           std::to_string(n) + "," + std::to_string(st.gate_count) + "," +
           std::to_string(st.depth_measured) + "," + fmt17(cs) + "," + cf +
           "," + fmt17(infid) + "\n";
  }
  emit(out_path, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variational product-formula toolkit"};
  app.require_subcommand(1);

  std::string config_path, params_path, plan_path, bulk_path, out_path;
  std::string metric_name, extents_text;
  std::uint64_t seed = 0;
  int samples = 0;
  int n_open = 0, inserted = 0, reps = 0;
  bool seam_from_boundary = false;
  std::vector<int> orders{2, 4, 6, 8};

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", config_path,
                              "plain-text key=value experiment description");
    if (needs_config) c->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "output path (default: stdout)");
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--samples", samples, "override the config sample count");
    sub->add_option("--metric", metric_name,
                    "cost metric (frobenius | sampled)");
    sub->add_option("--reps", reps, "override the config repetition count");
  };

  CLI::App* opt = app.add_subcommand(
      "optimize", "train a parameter table from the product-formula point");
  add_common(opt, true);
  opt->add_option("--params", params_path, "warm-start parameter table");

  CLI::App* ups = app.add_subcommand(
      "upscale",
      "re-target a shared table to a larger lattice, or glue an open block "
      "with a bulk table (--bulk)");
  ups->add_option("--params", params_path, "trained parameter table")
      ->required()
      ->check(CLI::ExistingFile);
  ups->add_option("--extents", extents_text, "target extents, N or WxH")
      ->required();
  ups->add_option("--bulk", bulk_path,
                  "shared bulk table; switches to open-boundary gluing");
  ups->add_option("--n-open", n_open, "trained open extent (gluing)");
  ups->add_option("--inserted", inserted, "bulk qubits spliced in (gluing)");
  ups->add_flag("--seam-from-boundary", seam_from_boundary,
                "seam bonds copy the nearest trained boundary bond instead "
                "of the bulk angle");
  ups->add_option("--out", out_path, "output path")->required();

  CLI::App* ev = app.add_subcommand(
      "evaluate", "cost of a table or plan against the exact evolution");
  add_common(ev, true);
  ev->add_option("--params", params_path, "parameter table to evaluate");
  ev->add_option("--plan", plan_path, "explicit gate plan to evaluate");

  CLI::App* sw = app.add_subcommand("sweep", "run a config-driven grid");
  add_common(sw, true);
  sw->add_option("--params", params_path, "trained table evaluated per point");

  CLI::App* nq = app.add_subcommand(
      "nisq", "combine an approximation cost with the per-gate fidelity");
  add_common(nq, true);
  nq->add_option("--params", params_path, "parameter table (default: trotter)");

  CLI::App* ob = app.add_subcommand(
      "observable", "step a Z-string expectation against the exact flow");
  add_common(ob, true);
  ob->add_option("--params", params_path, "parameter table (default: trotter)");

  CLI::App* sz = app.add_subcommand(
      "suzuki-bench", "gate counts and costs of higher-order formulas");
  add_common(sz, true);
  sz->add_option("--orders", orders, "orders to benchmark")
      ->delimiter(',')
      ->check(CLI::IsMember({2, 4, 6, 8}));

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg;
    ConfigDoc doc;
    if (!config_path.empty()) {
      doc = ConfigDoc::load(config_path);
      cfg = experiment_from_config(doc);
    }
    if (seed != 0) cfg.seed = seed;
    if (samples > 0) cfg.samples = samples;
    if (reps > 0) cfg.repetitions = reps;

    if (opt->parsed()) {
      if (out_path.empty()) out_path = "params.json";
      return cmd_optimize(cfg, doc, params_path, out_path, metric_name);
    }
    if (ups->parsed())
      return cmd_upscale(params_path, bulk_path, extents_text, n_open,
                         inserted, seam_from_boundary, out_path);
    if (ev->parsed()) {
      if (params_path.empty() == plan_path.empty())
        throw std::invalid_argument(
            "evaluate needs exactly one of --params / --plan");
      return cmd_evaluate(cfg, params_path, plan_path, out_path, metric_name);
    }
    if (sw->parsed()) {
      if (out_path.empty()) out_path = doc.get_string("out", "sweep.csv");
      return cmd_sweep(cfg, params_path, out_path);
    }
    if (nq->parsed()) return cmd_nisq(cfg, params_path, out_path, metric_name);
    if (ob->parsed()) return cmd_observable(cfg, params_path, out_path);
    if (sz->parsed()) return cmd_suzuki_bench(cfg, orders, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
