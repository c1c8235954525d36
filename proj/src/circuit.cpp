#include "vartrot/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vartrot {

std::string to_string(ParamMode m) {
  return m == ParamMode::shared ? "shared" : "site_resolved";
}

ParamMode param_mode_from_string(const std::string& s) {
  if (s == "shared") return ParamMode::shared;
  if (s == "site_resolved") return ParamMode::site_resolved;
  throw std::invalid_argument("unknown parameter mode: " + s);
}

std::string to_string(PlanFamily f) {
  switch (f) {
    case PlanFamily::variational: return "variational";
    case PlanFamily::trotter: return "trotter";
    case PlanFamily::suzuki: return "suzuki";
    case PlanFamily::glued: return "glued";
  }
  return "?";
}

PlanFamily plan_family_from_string(const std::string& s) {
  if (s == "variational") return PlanFamily::variational;
  if (s == "trotter") return PlanFamily::trotter;
  if (s == "suzuki") return PlanFamily::suzuki;
  if (s == "glued") return PlanFamily::glued;
  throw std::invalid_argument("unknown plan family: " + s);
}

void ParamTable::validate() const {
  if (layers < 1) throw std::invalid_argument("parameter table needs layers >= 1");
  int expected_types = model == Model::tfim ? 2 : 3;
  if (types != expected_types)
    throw std::invalid_argument("interaction count does not match model");
  size_t expected = static_cast<size_t>(layers) * types;
  if (mode == ParamMode::site_resolved) {
    if (sites < 1)
      throw std::invalid_argument("site_resolved table needs a site count");
    if (sites != trained_on.site_count())
      throw std::invalid_argument("site count does not match training lattice");
    expected *= sites;
  } else if (sites != 0) {
    throw std::invalid_argument("shared table must have sites == 0");
  }
  if (theta.size() != expected)
    throw std::invalid_argument("theta length does not match table shape");
  for (double v : theta)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite angle");
  if (!std::isfinite(tau)) throw std::invalid_argument("non-finite tau");
}

ParamTable trotter_init(double tau, int m, const CouplingSet& couplings,
                        const LatticeSpec& trained_on, ParamMode mode) {
  if (m < 1) throw std::invalid_argument("trotter_init needs m >= 1");
  couplings.validate();
  trained_on.validate();
  ParamTable p;
  p.mode = mode;
  p.layers = m;
  p.types = couplings.interaction_count();
  p.sites = mode == ParamMode::site_resolved ? trained_on.site_count() : 0;
  p.tau = tau;
  p.model = couplings.model;
  p.trained_on = trained_on;
  int copies = mode == ParamMode::site_resolved ? p.sites : 1;
  p.theta.reserve(static_cast<size_t>(m) * copies * p.types);
  auto kinds = couplings.kinds();
  for (int r = 0; r < m; ++r)
    for (int n = 0; n < copies; ++n)
      for (TermKind k : kinds)
        p.theta.push_back(tau * couplings.coefficient(k) / m);
  p.validate();
  return p;
}

int type_index(Model model, TermKind kind) {
  if (model == Model::tfim) {
    switch (kind) {
      case TermKind::zz: return 0;
      case TermKind::x: return 1;
      default: throw std::invalid_argument("tfim has no yy type");
    }
  }
  switch (kind) {
    case TermKind::yy: return 0;
    case TermKind::zz: return 1;
    case TermKind::x: return 2;
  }
  return -1;
}

void CircuitPlan::validate() const {
  lattice.validate();
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  const int n = lattice.site_count();
  for (const Gate& g : gates) {
    if (!std::isfinite(g.angle)) throw std::invalid_argument("non-finite angle");
    if (g.sites[0] < 0 || g.sites[0] >= n)
      throw std::invalid_argument("gate site out of range");
    bool two = g.kind != TermKind::x;
    if (two) {
      if (g.sites[1] < 0 || g.sites[1] >= n || g.sites[1] == g.sites[0])
        throw std::invalid_argument("bond gate needs two distinct sites");
    } else if (g.sites[1] != -1) {
      throw std::invalid_argument("field gate must have sites[1] == -1");
    }
  }
}

namespace {

CouplingSet unit_couplings(Model model) {
  CouplingSet cs;
  cs.model = model;
  cs.jz = 1.0;
  cs.hx = 1.0;
  cs.jy = model == Model::tfxy ? 1.0 : 0.0;
  return cs;
}

}  // namespace

CircuitPlan build_variational(const ParamTable& params,
                              const LatticeSpec& target) {
  params.validate();
  target.validate();
  if (params.mode == ParamMode::site_resolved && !(target == params.trained_on))
    throw std::invalid_argument(
        "site-resolved parameters only apply to their training lattice");
  TermList tl = build_terms(target, unit_couplings(params.model));
  CircuitPlan plan;
  plan.lattice = target;
  plan.model = params.model;
  plan.family = PlanFamily::variational;
  plan.layers = params.layers;
  plan.gates.reserve(static_cast<size_t>(params.layers) * tl.terms.size());
  for (int r = 0; r < params.layers; ++r)
    for (const Term& t : tl.terms) {
      int a = type_index(params.model, t.kind);
      double angle = params.mode == ParamMode::shared
                         ? params.at(r, a)
                         : params.at(r, t.sites[0], a);
      plan.gates.push_back({t.kind, t.sites, angle});
    }
  plan.validate();
  return plan;
}

CircuitPlan build_trotter(double tau, int m, const LatticeSpec& spec,
                          const CouplingSet& couplings) {
  CircuitPlan plan =
      build_variational(trotter_init(tau, m, couplings, spec), spec);
  plan.family = PlanFamily::trotter;
  return plan;
}

double suzuki_nu(int q) {
  if (q < 4 || q % 2 != 0)
    throw std::invalid_argument("nu is defined for even orders >= 4");
  return 1.0 / (4.0 - std::pow(4.0, 1.0 / (q - 1)));
}

namespace {

void append_s2(const TermList& tl, double t, std::vector<Gate>& out) {
  for (const Term& term : tl.terms)
    out.push_back({term.kind, term.sites, 0.5 * t * term.coefficient});
  for (auto it = tl.terms.rbegin(); it != tl.terms.rend(); ++it)
    out.push_back({it->kind, it->sites, 0.5 * t * it->coefficient});
}

void append_suzuki(const TermList& tl, int q, double t, std::vector<Gate>& out) {
  if (q == 2) {
    append_s2(tl, t, out);
    return;
  }
  double nu = suzuki_nu(q);
  for (int block = 0; block < 5; ++block)
    append_suzuki(tl, q - 2, block == 2 ? (1.0 - 4.0 * nu) * t : nu * t, out);
}

}  // namespace

CircuitPlan build_suzuki(SuzukiOrder order, double tau, int m,
                         const LatticeSpec& spec, const CouplingSet& couplings) {
  if (m < 1) throw std::invalid_argument("build_suzuki needs m >= 1");
  TermList tl = build_terms(spec, couplings);
  CircuitPlan plan;
  plan.lattice = spec;
  plan.model = couplings.model;
  plan.family = PlanFamily::suzuki;
  plan.layers = m;
  for (int step = 0; step < m; ++step)
    append_suzuki(tl, static_cast<int>(order), tau / m, plan.gates);
  plan.validate();
  return plan;
}

std::vector<int> variational_param_indices(const ParamTable& params,
                                           const LatticeSpec& target) {
  params.validate();
  TermList tl = build_terms(target, unit_couplings(params.model));
  std::vector<int> idx;
  idx.reserve(static_cast<size_t>(params.layers) * tl.terms.size());
  for (int r = 0; r < params.layers; ++r)
    for (const Term& t : tl.terms) {
      int a = type_index(params.model, t.kind);
      idx.push_back(params.mode == ParamMode::shared
                        ? r * params.types + a
                        : (r * params.sites + t.sites[0]) * params.types + a);
    }
  return idx;
}

GateStats gate_stats(const CircuitPlan& plan) {
  plan.validate();
  GateStats st;
  st.gate_count =
      static_cast<long long>(plan.gates.size()) * plan.repetitions;

  std::vector<long long> depth(plan.lattice.site_count(), 0);
  long long total = 0;
  for (int rep = 0; rep < plan.repetitions; ++rep)
    for (const Gate& g : plan.gates) {
      long long d = depth[g.sites[0]];
      if (g.sites[1] >= 0) d = std::max(d, depth[g.sites[1]]);
      ++d;
      depth[g.sites[0]] = d;
      if (g.sites[1] >= 0) depth[g.sites[1]] = d;
      total = std::max(total, d);
    }
  st.depth_measured = total;

  bool layered = plan.family == PlanFamily::variational ||
                 plan.family == PlanFamily::trotter ||
                 plan.family == PlanFamily::glued;
  if (layered && plan.model == Model::tfim && plan.layers >= 1)
    st.depth_formula = static_cast<long long>(plan.lattice.dimension + 1) *
                       plan.layers * plan.repetitions;
  return st;
}

}  // namespace vartrot
