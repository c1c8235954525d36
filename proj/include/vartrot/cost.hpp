#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vartrot/circuit.hpp"
#include "vartrot/statekit.hpp"

namespace vartrot {

enum class CostKind { frobenius, sampled };

std::string to_string(CostKind k);
CostKind cost_kind_from_string(const std::string& s);

// Haar-random pure states for the sampled cost. Each state is drawn from
// its own generator seeded by hash(seed, index), so a set is reproducible
// regardless of how it is chunked or extended.
struct SampleSet {
  int qubits = 0;
  std::uint64_t seed = 0;
  std::vector<StateVector> states;

  int count() const { return static_cast<int>(states.size()); }
  static SampleSet haar(int qubits, int count, std::uint64_t seed);
};

// Exactly evolved copies of a sample set, computed once and shared across
// every circuit evaluated at the same (terms, tau).
struct EvolvedSamples {
  SampleSet base;
  std::vector<StateVector> evolved;
  double tau = 0.0;
};

EvolvedSamples evolve_samples(const TermList& terms, double tau,
                              SampleSet samples,
                              const KrylovOptions& opts = {});

struct CostReport {
  double value = 0.0;
  CostKind kind = CostKind::frobenius;
  int sample_count = 0;  // 0 for frobenius
  std::uint64_t seed = 0;
  std::optional<std::vector<double>> gradient;
};

// Normalized Frobenius distance in trace form:
//   C = 2 - (2 / 2^N) Re tr(U_ex^dag U_var), in [0, 4].
// Tiny negative values from roundoff are clamped to zero.
CostReport frobenius_cost(const DenseOperator& u_var, const DenseOperator& u_ex);

// Mean over samples of 1 - |<psi_exact | U_var | psi>|, in [0, 1].
CostReport sampled_cost(const CircuitPlan& plan, const EvolvedSamples& samples);

enum class GradientMethod { adjoint, finite_difference };

// Cost of a parameter table on a fixed target, with everything expensive
// (exact propagator or evolved samples) computed once at construction.
class CostFunction {
 public:
  static CostFunction frobenius(const TermList& terms, double tau);
  static CostFunction sampled(const TermList& terms, double tau, int samples,
                              std::uint64_t seed,
                              const KrylovOptions& opts = {});

  CostKind kind() const { return kind_; }
  const LatticeSpec& target() const { return target_; }

  double value(const ParamTable& params) const;
  CostReport report(const ParamTable& params) const;

  // d value / d theta. The adjoint sweep costs a few plan applications; the
  // central finite difference costs two evaluations per parameter and is
  // meant as a cross-check.
  std::vector<double> gradient(const ParamTable& params,
                               GradientMethod method = GradientMethod::adjoint,
                               double fd_step = 1e-6) const;

 private:
  CostFunction() = default;
  CostKind kind_ = CostKind::frobenius;
  LatticeSpec target_;
  DenseOperator u_exact_;     // frobenius
  EvolvedSamples samples_;    // sampled
};

// Worst-case observable error from the Frobenius cost:
//   |<O>_approx - <O>_exact| <= 2 kappa |O| sqrt(2^N C).
double observable_error_bound(double frobenius_value, int qubits,
                              double op_norm, double kappa = 1.0);

}  // namespace vartrot
