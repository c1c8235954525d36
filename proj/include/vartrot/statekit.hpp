#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "vartrot/circuit.hpp"
#include "vartrot/lattice.hpp"

namespace vartrot {

using cxd = std::complex<double>;
using DenseOperator = Eigen::MatrixXcd;

// Simulation caps. Dense propagators and unitaries stop at 12 qubits,
// matrix-free evolution at 24; beyond that evaluation is refused.
inline constexpr int kDenseCap = 12;
inline constexpr int kKrylovCap = 24;

// Qubit i corresponds to bit i of the amplitude index (site 0 is the least
// significant bit).
struct StateVector {
  int qubits = 0;
  std::vector<cxd> amps;

  static StateVector zero_state(int n);
  static StateVector plus_state(int n);
  static StateVector basis_state(int n, std::uint64_t index);

  std::uint64_t dim() const { return amps.size(); }
  double norm() const;
};

cxd overlap(const StateVector& bra, const StateVector& ket);

// In-place exp(-i theta P) on a raw amplitude buffer of 2^n entries.
void apply_zz(cxd* a, int n, int i, int j, double theta);
void apply_x(cxd* a, int n, int i, double theta);
void apply_yy(cxd* a, int n, int i, int j, double theta);

void apply_gate(StateVector& s, const Gate& g);
void apply_gate(cxd* a, int n, const Gate& g);

// Applies plan.gates in order, repetitions times.
void apply_plan(StateVector& s, const CircuitPlan& plan);

// Full unitary of a plan, dense. Refused above kDenseCap.
DenseOperator circuit_unitary(const CircuitPlan& plan);

// Real symmetric Hamiltonian matrix of a term list. Refused above kDenseCap.
Eigen::MatrixXd hamiltonian_dense(const TermList& terms);

// Eigendecomposition of H, reusable across time steps: U(tau) is assembled
// from the cached basis with two real-times-complex products.
struct SpectralPropagator {
  Eigen::MatrixXd basis;
  Eigen::VectorXd energies;

  DenseOperator at(double tau) const;
};

SpectralPropagator spectral_decompose(const TermList& terms);
DenseOperator exact_propagator_dense(const TermList& terms, double tau);

// Matrix-free y = H x. Buffers must hold 2^N amplitudes, x != y.
struct HamiltonianAction {
  explicit HamiltonianAction(const TermList& terms);
  void apply(const cxd* x, cxd* y) const;
  double norm_bound() const { return bound_; }
  int qubits() const { return qubits_; }

 private:
  struct FlipTerm {
    TermKind kind;
    std::uint64_t mask;      // bits flipped
    std::uint64_t sign_mask; // yy only: parity of these bits sets the sign
    double coefficient;
  };
  int qubits_ = 0;
  std::vector<double> diagonal_;
  std::vector<FlipTerm> flips_;
  double bound_ = 0.0;
};

struct KrylovOptions {
  int max_dim = 40;
  double max_step_norm = 10.0;  // substeps chosen so |H| * dt <= this
  double residual_tol = 1e-12;  // per substep
  bool force_two_pass = false;  // use the basis-free sweep even when small
};

// psi <- exp(-i H tau) psi via Lanczos with adaptive substeps. Refused above
// kKrylovCap. Substeps start at the norm-bound estimate and halve on
// non-convergence; the halved width is kept for the remaining steps.
void exact_evolve_state(const TermList& terms, double tau, StateVector& psi,
                        const KrylovOptions& opts = {});

// <psi| Z...Z |psi> over the given sites (diagonal, any count).
double measure_z_string(const StateVector& psi, const std::vector<int>& sites);

}  // namespace vartrot
