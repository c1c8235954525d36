#include "vartrot/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace vartrot {

void NoiseModel::validate() const {
  if (!(per_gate_fidelity > 0.0) || per_gate_fidelity > 1.0)
    throw std::invalid_argument("per-gate fidelity must lie in (0, 1]");
}

double nisq_infidelity(double approx_fidelity, const CircuitPlan& plan,
                       const NoiseModel& noise) {
  noise.validate();
  if (!(approx_fidelity >= 0.0) || approx_fidelity > 1.0)
    throw std::invalid_argument("approx fidelity must lie in [0, 1]");
  long long g = gate_stats(plan).gate_count;
  double f_gates = std::pow(noise.per_gate_fidelity, static_cast<double>(g));
  return 1.0 - approx_fidelity * f_gates;
}

std::vector<StepRecord> evolve_and_measure(const CircuitPlan& plan,
                                           const TermList& terms, double tau,
                                           const StateVector& psi0, int steps,
                                           const std::vector<int>& z_sites,
                                           const KrylovOptions& opts) {
  if (steps < 0) throw std::invalid_argument("steps must be non-negative");
  int n = plan.lattice.site_count();
  if (psi0.qubits != n)
    throw std::invalid_argument("initial state size does not match the plan");
  if (z_sites.empty()) throw std::invalid_argument("empty observable");
  for (int s : z_sites)
    if (s < 0 || s >= n) throw std::invalid_argument("observable site out of range");

  std::vector<StepRecord> records;
  records.reserve(static_cast<std::size_t>(steps) + 1);
  StateVector approx = psi0;
  StateVector exact = psi0;
  double v0 = measure_z_string(psi0, z_sites);
  records.push_back({0, 0.0, v0, v0, 0.0, 0.0});
  for (int s = 1; s <= steps; ++s) {
    apply_plan(approx, plan);
    exact_evolve_state(terms, tau, exact, opts);
    double a = measure_z_string(approx, z_sites);
    double e = measure_z_string(exact, z_sites);
    double abs_err = std::abs(a - e);
    double rel_err = std::abs(e) >= 1e-12 ? abs_err / std::abs(e) : abs_err;
    records.push_back({s, s * tau, a, e, abs_err, rel_err});
  }
  return records;
}

std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::size: return "size";
    case SweepAxis::tau: return "tau";
    case SweepAxis::couplings: return "couplings";
    case SweepAxis::repetitions: return "repetitions";
  }
  throw std::invalid_argument("unknown sweep axis");
}

SweepAxis sweep_axis_from_string(const std::string& s) {
  if (s == "size") return SweepAxis::size;
  if (s == "tau") return SweepAxis::tau;
  if (s == "couplings") return SweepAxis::couplings;
  if (s == "repetitions" || s == "reps") return SweepAxis::repetitions;
  throw std::invalid_argument("unknown sweep axis: " + s);
}

std::string to_string(Metric m) {
  switch (m) {
    case Metric::frobenius: return "frobenius";
    case Metric::sampled: return "sampled";
    case Metric::nisq: return "nisq";
    case Metric::observable: return "observable";
  }
  throw std::invalid_argument("unknown metric");
}

Metric metric_from_string(const std::string& s) {
  if (s == "frobenius") return Metric::frobenius;
  if (s == "sampled") return Metric::sampled;
  if (s == "nisq") return Metric::nisq;
  if (s == "observable") return Metric::observable;
  throw std::invalid_argument("unknown metric: " + s);
}

void ExperimentConfig::validate() const {
  lattice.validate();
  couplings.validate();
  if (couplings.model != model)
    throw std::invalid_argument("couplings belong to a different model");
  if (!std::isfinite(tau)) throw std::invalid_argument("tau must be finite");
  if (layers < 1) throw std::invalid_argument("layer count must be positive");
  if (repetitions < 1)
    throw std::invalid_argument("repetition count must be positive");
  if (samples < 1) throw std::invalid_argument("sample count must be positive");
  noise.validate();
  switch (axis) {
    case SweepAxis::size:
      if (size_grid.empty()) throw std::invalid_argument("empty size grid");
      break;
    case SweepAxis::tau:
      if (tau_grid.empty()) throw std::invalid_argument("empty tau grid");
      for (double t : tau_grid)
        if (!std::isfinite(t)) throw std::invalid_argument("non-finite tau");
      break;
    case SweepAxis::couplings:
      if (coupling_grid.empty())
        throw std::invalid_argument("empty coupling grid");
      for (const CouplingSet& c : coupling_grid) {
        c.validate();
        if (c.model != model)
          throw std::invalid_argument("coupling grid entry has a different model");
      }
      break;
    case SweepAxis::repetitions:
      if (repetition_grid.empty())
        throw std::invalid_argument("empty repetition grid");
      for (int k : repetition_grid)
        if (k < 1) throw std::invalid_argument("repetition count must be positive");
      break;
  }
  if (metric == Metric::observable && observable_sites.empty())
    throw std::invalid_argument("observable metric needs a Z string");
  if (optimize_each_point) adam.validate();
}

LinearFit fit_linear(const std::vector<double>& x,
                     const std::vector<double>& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("mismatched fit input lengths");
  std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("a line needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-300)
    throw std::invalid_argument("degenerate fit abscissae");
  LinearFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.points = static_cast<int>(n);
  fit.largest_x = *std::max_element(x.begin(), x.end());
  if (n > 2) {
    double ssr = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = y[i] - fit.at(x[i]);
      ssr += r * r;
    }
    fit.sigma = std::sqrt(ssr / static_cast<double>(n - 2));
  }
  return fit;
}

namespace {

struct PointSpec {
  LatticeSpec lattice;
  CouplingSet couplings;
  double tau = 0.0;
  int repetitions = 1;
};

std::string describe(const PointSpec& pt) {
  std::ostringstream os;
  os << "extents=" << pt.lattice.extents[0] << "x" << pt.lattice.extents[1]
     << " tau=" << pt.tau << " Jz=" << pt.couplings.jz
     << " hx=" << pt.couplings.hx << " reps=" << pt.repetitions;
  return os.str();
}

void add_measurement(ResultRow& row, const std::string& label, double value,
                     const CircuitPlan& plan) {
  GateStats st = gate_stats(plan);
  row.measurements.push_back({label, value, st.gate_count, st.depth_measured});
}

// Trained parameters for one grid point, or nullopt with a note.
std::optional<CircuitPlan> resolve_variational(
    const ExperimentConfig& cfg, const PointSpec& pt, const TermList& terms,
    const std::optional<ParamTable>& params, std::vector<std::string>& notes) {
  int n = pt.lattice.site_count();
  if (cfg.optimize_each_point) {
    CostFunction f = n <= kDenseCap
                         ? CostFunction::frobenius(terms, pt.tau)
                         : CostFunction::sampled(terms, pt.tau, cfg.samples,
                                                 cfg.seed, cfg.krylov);
    ParamTable p0 = trotter_init(pt.tau, cfg.layers, pt.couplings, pt.lattice);
    OptimizationTrace tr = optimize(
        p0, [&](const ParamTable& p) { return f.value(p); },
        [&](const ParamTable& p) { return f.gradient(p); }, cfg.adam);
    if (tr.aborted)
      notes.push_back("training aborted at " + describe(pt) +
                      "; best-so-far parameters kept");
    CircuitPlan plan = build_variational(tr.best_params, pt.lattice);
    plan.repetitions = pt.repetitions;
    return plan;
  }
  if (!params) return std::nullopt;
  if (params->model != cfg.model) {
    notes.push_back("no variational rows at " + describe(pt) +
                    ": parameter table belongs to a different model");
    return std::nullopt;
  }
  if (std::abs(params->tau - pt.tau) > 1e-12) {
    notes.push_back("no variational rows at " + describe(pt) +
                    ": parameter table trained for a different tau");
    return std::nullopt;
  }
  if (params->mode == ParamMode::site_resolved &&
      !(params->trained_on == pt.lattice)) {
    notes.push_back("no variational rows at " + describe(pt) +
                    ": site-resolved table trained on another lattice");
    return std::nullopt;
  }
  CircuitPlan plan = build_variational(*params, pt.lattice);
  plan.repetitions = pt.repetitions;
  return plan;
}

ResultRow evaluate_point(const ExperimentConfig& cfg, const PointSpec& pt,
                         const std::optional<ParamTable>& params,
                         std::vector<std::string>& notes) {
  pt.lattice.validate();
  ResultRow row;
  row.model = cfg.model;
  row.dimension = pt.lattice.dimension;
  row.extents = pt.lattice.extents;
  row.boundary = pt.lattice.boundary;
  row.jz = pt.couplings.jz;
  row.hx = pt.couplings.hx;
  row.jy = pt.couplings.jy;
  row.tau = pt.tau;
  row.layers = cfg.layers;
  row.repetitions = pt.repetitions;
  row.sites = pt.lattice.site_count();
  row.pg = cfg.noise.per_gate_fidelity;
  row.seed = cfg.seed;

  int n = row.sites;
  TermList terms = build_terms(pt.lattice, pt.couplings);
  double total_time = pt.repetitions * pt.tau;

  CircuitPlan trot = build_trotter(pt.tau, cfg.layers, pt.lattice, pt.couplings);
  trot.repetitions = pt.repetitions;
  std::optional<CircuitPlan> var;
  try {
    var = resolve_variational(cfg, pt, terms, params, notes);
  } catch (const std::exception& e) {
    notes.push_back("no variational rows at " + describe(pt) + ": " + e.what());
  }

  auto dense_costs = [&](const std::string& suffix) {
    DenseOperator u_ex = exact_propagator_dense(terms, total_time);
    if (var)
      add_measurement(row, "frobenius_var" + suffix,
                      frobenius_cost(circuit_unitary(*var), u_ex).value, *var);
    add_measurement(row, "frobenius_trotter" + suffix,
                    frobenius_cost(circuit_unitary(trot), u_ex).value, trot);
  };

  switch (cfg.metric) {
    case Metric::frobenius: {
      if (n > kDenseCap) {
        notes.push_back("skipped frobenius rows at " + describe(pt) + ": " +
                        std::to_string(n) + " qubits exceed the dense cap");
        break;
      }
      dense_costs("");
      break;
    }
    case Metric::sampled:
    case Metric::nisq: {
      if (n > kKrylovCap) {
        notes.push_back("skipped sampled rows at " + describe(pt) + ": " +
                        std::to_string(n) + " qubits exceed the state cap");
        break;
      }
      EvolvedSamples ev =
          evolve_samples(terms, total_time,
                         SampleSet::haar(n, cfg.samples, cfg.seed), cfg.krylov);
      double c_var = 0.0;
      if (var) {
        c_var = sampled_cost(*var, ev).value;
        add_measurement(row, "sampled_var", c_var, *var);
      }
      double c_trot = sampled_cost(trot, ev).value;
      add_measurement(row, "sampled_trotter", c_trot, trot);
      if (cfg.metric == Metric::nisq) {
        if (var)
          add_measurement(row, "nisq_var",
                          nisq_infidelity(1.0 - c_var, *var, cfg.noise), *var);
        add_measurement(row, "nisq_trotter",
                        nisq_infidelity(1.0 - c_trot, trot, cfg.noise), trot);
        // Cross-check against the operator-level cost where dense still fits.
        if (n <= kDenseCap) dense_costs("");
      }
      break;
    }
    case Metric::observable: {
      if (n > kKrylovCap) {
        notes.push_back("skipped observable rows at " + describe(pt) + ": " +
                        std::to_string(n) + " qubits exceed the state cap");
        break;
      }
      bool in_range = true;
      for (int s : cfg.observable_sites)
        if (s < 0 || s >= n) in_range = false;
      if (!in_range) {
        notes.push_back("skipped observable rows at " + describe(pt) +
                        ": Z string leaves the lattice");
        break;
      }
      StateVector psi0 = StateVector::plus_state(n);
      CircuitPlan trot_once = trot;
      trot_once.repetitions = 1;
      std::vector<StepRecord> rt =
          evolve_and_measure(trot_once, terms, pt.tau, psi0, pt.repetitions,
                             cfg.observable_sites, cfg.krylov);
      row.measurements.push_back({"observable_exact", rt.back().exact, 0, 0});
      if (var) {
        CircuitPlan var_once = *var;
        var_once.repetitions = 1;
        std::vector<StepRecord> rv =
            evolve_and_measure(var_once, terms, pt.tau, psi0, pt.repetitions,
                               cfg.observable_sites, cfg.krylov);
        add_measurement(row, "observable_var", rv.back().approx, *var);
        add_measurement(row, "observable_var_abs_error", rv.back().abs_error,
                        *var);
      }
      add_measurement(row, "observable_trotter", rt.back().approx, trot);
      add_measurement(row, "observable_trotter_abs_error", rt.back().abs_error,
                      trot);
      break;
    }
  }
  return row;
}

// Dense work at 11+ qubits or Krylov work at 20+ allocates enough that grid
// points must not overlap in flight.
bool heavy_point(const ExperimentConfig& cfg, const PointSpec& pt) {
  int n = pt.lattice.site_count();
  bool dense = cfg.metric == Metric::frobenius ||
               (cfg.metric == Metric::nisq && n <= kDenseCap);
  if (dense && n >= 11) return true;
  return n >= 20;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SweepOutput run_sweep(const ExperimentConfig& cfg,
                      const std::optional<ParamTable>& params) {
  cfg.validate();

  std::vector<PointSpec> points;
  switch (cfg.axis) {
    case SweepAxis::size:
      for (const std::array<int, 2>& e : cfg.size_grid) {
        LatticeSpec l = cfg.lattice;
        l.extents = e;
        points.push_back({l, cfg.couplings, cfg.tau, cfg.repetitions});
      }
      break;
    case SweepAxis::tau:
      for (double t : cfg.tau_grid)
        points.push_back({cfg.lattice, cfg.couplings, t, cfg.repetitions});
      break;
    case SweepAxis::couplings:
      for (const CouplingSet& c : cfg.coupling_grid)
        points.push_back({cfg.lattice, c, cfg.tau, cfg.repetitions});
      break;
    case SweepAxis::repetitions:
      for (int k : cfg.repetition_grid)
        points.push_back({cfg.lattice, cfg.couplings, cfg.tau, k});
      break;
  }

  // Points are independent; run them in waves and collect in grid order.
  bool any_heavy = false;
  for (const PointSpec& pt : points) any_heavy |= heavy_point(cfg, pt);
  std::size_t wave = 1;
  if (!any_heavy) {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    wave = std::min<std::size_t>(std::max(points.size(), std::size_t{1}),
                                 std::min<unsigned>(hw, 4));
  }

  std::vector<std::optional<ResultRow>> slots(points.size());
  std::vector<std::vector<std::string>> point_notes(points.size());
  for (std::size_t base = 0; base < points.size(); base += wave) {
    std::size_t end = std::min(base + wave, points.size());
    std::vector<std::future<void>> inflight;
    for (std::size_t i = base; i < end; ++i) {
      inflight.push_back(std::async(std::launch::async, [&, i] {
        try {
          slots[i] = evaluate_point(cfg, points[i], params, point_notes[i]);
        } catch (const std::exception& e) {
          point_notes[i].push_back("point skipped at " + describe(points[i]) +
                                   ": " + e.what());
        }
      }));
    }
    for (std::future<void>& f : inflight) f.get();
  }

  SweepOutput out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (slots[i]) out.rows.push_back(std::move(*slots[i]));
    for (std::string& s : point_notes[i]) out.notes.push_back(std::move(s));
  }

  if (cfg.axis == SweepAxis::size) {
    std::vector<std::string> labels;
    if (cfg.metric == Metric::frobenius)
      labels = {"frobenius_var", "frobenius_trotter"};
    else if (cfg.metric == Metric::sampled || cfg.metric == Metric::nisq)
      labels = {"sampled_var", "sampled_trotter"};
    for (const std::string& label : labels) {
      std::vector<double> xs, ys;
      for (const ResultRow& row : out.rows)
        for (const Measurement& m : row.measurements)
          if (m.metric == label) {
            xs.push_back(static_cast<double>(row.sites));
            ys.push_back(m.value);
          }
      if (xs.size() >= 2) out.fits.emplace_back(label, fit_linear(xs, ys));
    }
  }
  return out;
}

const char* const kCsvHeader =
    "model,d,extents,boundary,Jz,hx,Jy,tau,m,reps,N,metric,value,G,D,pg,seed";

std::string to_csv(const std::vector<ResultRow>& rows) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const ResultRow& row : rows) {
    std::string boundary = to_string(row.boundary[0]);
    if (row.dimension == 2) boundary += ":" + to_string(row.boundary[1]);
    std::string coords =
        to_string(row.model) + "," + std::to_string(row.dimension) + "," +
        std::to_string(row.extents[0]) + "x" + std::to_string(row.extents[1]) +
        "," + boundary + "," + fmt_double(row.jz) + "," + fmt_double(row.hx) +
        "," + fmt_double(row.jy) + "," + fmt_double(row.tau) + "," +
        std::to_string(row.layers) + "," + std::to_string(row.repetitions) +
        "," + std::to_string(row.sites);
    for (const Measurement& m : row.measurements) {
      out += coords;
      out += ',';
      out += m.metric;
      out += ',';
      out += fmt_double(m.value);
      out += ',';
      out += std::to_string(m.gates);
      out += ',';
      out += std::to_string(m.depth);
      out += ',';
      out += fmt_double(row.pg);
      out += ',';
      out += std::to_string(row.seed);
      out += '\n';
    }
  }
  return out;
}

NisqProjection extrapolate_nisq(const LinearFit& fit,
                                const LatticeSpec& target,
                                const CouplingSet& couplings, double tau,
                                int layers, const NoiseModel& noise,
                                int repetitions) {
  if (fit.points < 3)
    throw std::invalid_argument("extrapolation needs a fit over >= 3 sizes");
  if (layers < 1) throw std::invalid_argument("layer count must be positive");
  if (repetitions < 1)
    throw std::invalid_argument("repetition count must be positive");
  noise.validate();
  target.validate();
  couplings.validate();

  NisqProjection p;
  int n = target.site_count();
  p.fitted_cost = std::clamp(fit.at(static_cast<double>(n)), 0.0, 1.0);
  p.f_approx = 1.0 - p.fitted_cost;
  CircuitPlan plan = build_trotter(tau, layers, target, couplings);
  plan.repetitions = repetitions;
  p.gates = gate_stats(plan).gate_count;
  p.infidelity = 1.0 - p.f_approx * std::pow(noise.per_gate_fidelity,
                                             static_cast<double>(p.gates));
  p.extrapolation_flagged = n > 5.0 * fit.largest_x;
  return p;
}

}  // namespace vartrot
