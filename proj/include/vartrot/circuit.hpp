#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vartrot/lattice.hpp"

namespace vartrot {

enum class ParamMode { shared, site_resolved };

std::string to_string(ParamMode m);
ParamMode param_mode_from_string(const std::string& s);

// Angle table for a layered product circuit. In shared mode one angle per
// (layer, interaction type); in site_resolved mode one per (layer, origin
// site, type). Angles are the full exponents: a gate applies exp(-i theta P).
struct ParamTable {
  ParamMode mode = ParamMode::shared;
  int layers = 0;  // m
  int types = 0;   // A: bond kinds + field
  int sites = 0;   // 0 unless site_resolved
  double tau = 0.0;
  Model model = Model::tfim;
  LatticeSpec trained_on;
  std::vector<double> theta;

  int param_count() const { return static_cast<int>(theta.size()); }

  double& at(int layer, int type) {
    return theta[static_cast<size_t>(layer) * types + type];
  }
  double at(int layer, int type) const {
    return theta[static_cast<size_t>(layer) * types + type];
  }
  double& at(int layer, int site, int type) {
    return theta[(static_cast<size_t>(layer) * sites + site) * types + type];
  }
  double at(int layer, int site, int type) const {
    return theta[(static_cast<size_t>(layer) * sites + site) * types + type];
  }

  void validate() const;
};

// Trotter starting point: theta[r][a] = tau * c_a / m for every layer
// (broadcast over sites when site_resolved). Optimizing from here can only
// improve on the plain first-order product formula.
ParamTable trotter_init(double tau, int m, const CouplingSet& couplings,
                        const LatticeSpec& trained_on,
                        ParamMode mode = ParamMode::shared);

struct Gate {
  TermKind kind;
  std::array<int, 2> sites{0, -1};
  double angle = 0.0;

  bool operator==(const Gate&) const = default;
};

enum class PlanFamily { variational, trotter, suzuki, glued };

std::string to_string(PlanFamily f);
PlanFamily plan_family_from_string(const std::string& s);

// Ordered gate list. Gates apply left to right to a ket; repetitions > 1
// means the whole list is applied that many times (multi-step evolution).
struct CircuitPlan {
  LatticeSpec lattice;
  Model model = Model::tfim;
  PlanFamily family = PlanFamily::variational;
  int layers = 0;  // m for layered families, steps for suzuki
  int repetitions = 1;
  std::vector<Gate> gates;

  void validate() const;
};

struct GateStats {
  long long gate_count = 0;                  // gates times repetitions
  long long depth_measured = 0;              // greedy disjoint-support layering
  std::optional<long long> depth_formula;    // (d+1)*m*reps, layered TFIM only
};

// Layered circuit sharing the canonical term order of build_terms: layer r
// applies every term's gate with the table's angle for (r, [site,] type).
// Shared tables transfer to any lattice size; site-resolved tables only to
// the lattice they were trained on.
CircuitPlan build_variational(const ParamTable& params,
                              const LatticeSpec& target);

// First-order product formula with m steps.
CircuitPlan build_trotter(double tau, int m, const LatticeSpec& spec,
                          const CouplingSet& couplings);

enum class SuzukiOrder { s2 = 2, s4 = 4, s6 = 6, s8 = 8 };

// Recursion coefficient nu_q = 1 / (4 - 4^(1/(q-1))) for even q >= 4.
double suzuki_nu(int q);

// Symmetric product formula of the given order, m steps. The order-2 step
// is the palindrome forward-half / reversed-half; higher orders follow the
// five-block recursion with coefficients nu_q and 1 - 4 nu_q.
CircuitPlan build_suzuki(SuzukiOrder order, double tau, int m,
                         const LatticeSpec& spec, const CouplingSet& couplings);

GateStats gate_stats(const CircuitPlan& plan);

// Index of a term kind in the model's parameter-type order.
int type_index(Model model, TermKind kind);

// Which table entry each gate of build_variational(params, target) reads,
// in gate order. Lets gradient sweeps scatter per-gate terms into the table.
std::vector<int> variational_param_indices(const ParamTable& params,
                                           const LatticeSpec& target);

}  // namespace vartrot
