#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vartrot/cost.hpp"
#include "vartrot/optimize.hpp"

namespace vartrot {

// Analytic gate-noise model: every executed gate succeeds with probability
// per_gate_fidelity, so a plan with G gates keeps F_gates = p_g^G. Noise is
// never sampled as circuit perturbations.
struct NoiseModel {
  double per_gate_fidelity = 0.999;
  void validate() const;  // 0 < p_g <= 1
};

// 1 - F_approx * p_g^G with G the executed gate count of the plan
// (repetitions included). p_g = 1 or G = 0 degrade to 1 - F_approx.
double nisq_infidelity(double approx_fidelity, const CircuitPlan& plan,
                       const NoiseModel& noise);

// One record per step of a repeated-application run. time = step * tau.
// rel_error is abs_error / |exact| and is NaN-free: it falls back to
// abs_error when |exact| < 1e-12.
struct StepRecord {
  int step = 0;
  double time = 0.0;
  double approx = 0.0;
  double exact = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
};

// Applies `plan` (including its repetition count) `steps` times, recording
// the Z-string expectation after every application next to the exact value
// from Krylov evolution by tau per step. Record 0 is the initial state, so
// the result has steps + 1 entries.
std::vector<StepRecord> evolve_and_measure(const CircuitPlan& plan,
                                           const TermList& terms, double tau,
                                           const StateVector& psi0, int steps,
                                           const std::vector<int>& z_sites,
                                           const KrylovOptions& opts = {});

enum class SweepAxis { size, tau, couplings, repetitions };
enum class Metric { frobenius, sampled, nisq, observable };

std::string to_string(SweepAxis a);
SweepAxis sweep_axis_from_string(const std::string& s);
std::string to_string(Metric m);
Metric metric_from_string(const std::string& s);

struct ExperimentConfig {
  Model model = Model::tfim;
  CouplingSet couplings{Model::tfim, 1.0, 0.25, 0.0};
  LatticeSpec lattice = chain(6);
  double tau = 0.1;
  int layers = 1;       // m
  int repetitions = 1;  // k; total evolved time per point is k * tau
  SweepAxis axis = SweepAxis::size;
  std::vector<std::array<int, 2>> size_grid;  // axis == size
  std::vector<double> tau_grid;               // axis == tau
  std::vector<CouplingSet> coupling_grid;     // axis == couplings
  std::vector<int> repetition_grid;           // axis == repetitions
  Metric metric = Metric::frobenius;
  NoiseModel noise{};
  int samples = 20;
  std::uint64_t seed = 1;
  std::vector<int> observable_sites;  // Z string, metric == observable
  // Train fresh parameters from the product-formula point at every grid
  // point instead of evaluating a fixed table.
  bool optimize_each_point = false;
  AdamConfig adam{};
  KrylovOptions krylov{};

  void validate() const;
};

// One measurement line: a labelled scalar plus the gate statistics of the
// plan it was measured on (G = 0, D = 0 for plan-free values).
struct Measurement {
  std::string metric;
  double value = 0.0;
  long long gates = 0;
  long long depth = 0;
};

// One grid point: full coordinates plus every measurement taken there.
struct ResultRow {
  Model model = Model::tfim;
  int dimension = 1;
  std::array<int, 2> extents{0, 1};
  std::array<Boundary, 2> boundary{Boundary::periodic, Boundary::periodic};
  double jz = 0.0, hx = 0.0, jy = 0.0;
  double tau = 0.0;
  int layers = 1;
  int repetitions = 1;
  int sites = 0;
  double pg = 1.0;
  std::uint64_t seed = 0;
  std::vector<Measurement> measurements;
};

// Unweighted least squares y = slope * x + intercept. sigma is the residual
// standard deviation sqrt(SSR / (n - 2)), 0 when n < 3.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double sigma = 0.0;
  int points = 0;
  double largest_x = 0.0;

  double at(double x) const { return slope * x + intercept; }
};

LinearFit fit_linear(const std::vector<double>& x,
                     const std::vector<double>& y);

struct SweepOutput {
  std::vector<ResultRow> rows;              // grid order
  std::vector<std::string> notes;           // skipped rows, one line each
  std::vector<std::pair<std::string, LinearFit>> fits;  // size sweeps only
};

// Runs every grid point and collects rows in grid order. Points that exceed
// an engine cap (dense > 12 qubits, state > 24) or fail lattice validation
// are skipped with a note instead of aborting the sweep. For size sweeps a
// cost-versus-sites fit is attached per cost label with at least two points.
//
// `params` supplies trained parameters: shared tables are re-targeted to
// each point's lattice, site-resolved tables only apply to their own. When
// absent (and optimize_each_point is off) only product-formula rows are
// emitted.
SweepOutput run_sweep(const ExperimentConfig& cfg,
                      const std::optional<ParamTable>& params = {});

// Fixed column order; every sweep writes exactly this header.
extern const char* const kCsvHeader;

std::string to_csv(const std::vector<ResultRow>& rows);

struct NisqProjection {
  double fitted_cost = 0.0;  // fit.at(N), clamped to [0, 1]
  double f_approx = 1.0;
  double infidelity = 0.0;   // 1 - f_approx * p_g^G
  long long gates = 0;
  bool extrapolation_flagged = false;  // target sites > 5x largest fitted
};

// Evaluates a sampled-cost fit at a target lattice and combines it with the
// gate fidelity of the product-formula plan shape (layers, repetitions) at
// that size. Requires a fit over at least three sizes.
NisqProjection extrapolate_nisq(const LinearFit& fit,
                                const LatticeSpec& target,
                                const CouplingSet& couplings, double tau,
                                int layers, const NoiseModel& noise,
                                int repetitions = 1);

}  // namespace vartrot
