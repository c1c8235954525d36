#include "vartrot/cost.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace vartrot {

std::string to_string(CostKind k) {
  return k == CostKind::frobenius ? "frobenius" : "sampled";
}

CostKind cost_kind_from_string(const std::string& s) {
  if (s == "frobenius") return CostKind::frobenius;
  if (s == "sampled") return CostKind::sampled;
  throw std::invalid_argument("unknown cost kind: " + s);
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Box-Muller on raw generator words keeps sample streams independent of
// library distribution internals.
struct GaussianSource {
  std::mt19937_64 rng;
  explicit GaussianSource(std::uint64_t seed) : rng(seed) {}
  double uniform01() { return ((rng() >> 11) + 1) * 0x1.0p-53; }
  cxd complex_normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }
};

}  // namespace

SampleSet SampleSet::haar(int qubits, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample count must be positive");
  SampleSet set;
  set.qubits = qubits;
  set.seed = seed;
  set.states.reserve(count);
  for (int i = 0; i < count; ++i) {
    GaussianSource src(mix_seed(seed, static_cast<std::uint64_t>(i)));
    StateVector s = StateVector::zero_state(qubits);
    for (cxd& a : s.amps) a = src.complex_normal();
    double nn = s.norm();
    for (cxd& a : s.amps) a /= nn;
    set.states.push_back(std::move(s));
  }
  return set;
}

EvolvedSamples evolve_samples(const TermList& terms, double tau,
                              SampleSet samples, const KrylovOptions& opts) {
  if (samples.qubits != terms.lattice.site_count())
    throw std::invalid_argument("samples and Hamiltonian disagree on qubits");
  EvolvedSamples out;
  out.tau = tau;
  out.evolved = samples.states;
  out.base = std::move(samples);
  for (StateVector& s : out.evolved) exact_evolve_state(terms, tau, s, opts);
  return out;
}

namespace {

double clamp_cost(double value, double hi) {
  if (value < 0.0) {
    if (value < -1e-9) throw std::runtime_error("cost fell below zero");
    return 0.0;
  }
  return std::min(value, hi);
}

}  // namespace

CostReport frobenius_cost(const DenseOperator& u_var,
                          const DenseOperator& u_ex) {
  if (u_var.rows() != u_ex.rows() || u_var.cols() != u_ex.cols() ||
      u_var.rows() != u_var.cols())
    throw std::invalid_argument("operator shapes disagree");
  double dim = static_cast<double>(u_var.rows());
  double re_trace = u_ex.conjugate().cwiseProduct(u_var).sum().real();
  CostReport rep;
  rep.kind = CostKind::frobenius;
  rep.value = clamp_cost(2.0 - 2.0 / dim * re_trace, 4.0);
  return rep;
}

CostReport sampled_cost(const CircuitPlan& plan, const EvolvedSamples& samples) {
  if (samples.base.count() == 0)
    throw std::invalid_argument("no samples to evaluate");
  if (plan.lattice.site_count() != samples.base.qubits)
    throw std::invalid_argument("plan and samples disagree on qubits");
  double acc = 0;
  for (int s = 0; s < samples.base.count(); ++s) {
    StateVector ket = samples.base.states[s];
    apply_plan(ket, plan);
    acc += std::max(0.0, 1.0 - std::abs(overlap(samples.evolved[s], ket)));
  }
  CostReport rep;
  rep.kind = CostKind::sampled;
  rep.sample_count = samples.base.count();
  rep.seed = samples.base.seed;
  rep.value = acc / samples.base.count();
  return rep;
}

CostFunction CostFunction::frobenius(const TermList& terms, double tau) {
  CostFunction f;
  f.kind_ = CostKind::frobenius;
  f.target_ = terms.lattice;
  f.u_exact_ = exact_propagator_dense(terms, tau);
  return f;
}

CostFunction CostFunction::sampled(const TermList& terms, double tau,
                                   int samples, std::uint64_t seed,
                                   const KrylovOptions& opts) {
  CostFunction f;
  f.kind_ = CostKind::sampled;
  f.target_ = terms.lattice;
  f.samples_ = evolve_samples(
      terms, tau, SampleSet::haar(terms.lattice.site_count(), samples, seed),
      opts);
  return f;
}

double CostFunction::value(const ParamTable& params) const {
  CircuitPlan plan = build_variational(params, target_);
  if (kind_ == CostKind::frobenius)
    return frobenius_cost(circuit_unitary(plan), u_exact_).value;
  return sampled_cost(plan, samples_).value;
}

CostReport CostFunction::report(const ParamTable& params) const {
  CircuitPlan plan = build_variational(params, target_);
  if (kind_ == CostKind::frobenius)
    return frobenius_cost(circuit_unitary(plan), u_exact_);
  return sampled_cost(plan, samples_);
}

namespace {

// <bra| -i P |ket> for the gate's Pauli word.
cxd pauli_bracket(const cxd* bra, const cxd* ket, int n, const Gate& g) {
  const std::uint64_t dim = 1ull << n;
  cxd acc(0, 0);
  switch (g.kind) {
    case TermKind::zz: {
      std::uint64_t mi = 1ull << g.sites[0], mj = 1ull << g.sites[1];
      for (std::uint64_t x = 0; x < dim; ++x) {
        cxd v = std::conj(bra[x]) * ket[x];
        acc += ((x & mi) != 0) == ((x & mj) != 0) ? v : -v;
      }
      break;
    }
    case TermKind::x: {
      std::uint64_t m = 1ull << g.sites[0];
      for (std::uint64_t x = 0; x < dim; ++x)
        acc += std::conj(bra[x]) * ket[x ^ m];
      break;
    }
    case TermKind::yy: {
      std::uint64_t mi = 1ull << g.sites[0], mj = 1ull << g.sites[1];
      std::uint64_t m = mi | mj;
      for (std::uint64_t x = 0; x < dim; ++x) {
        cxd v = std::conj(bra[x ^ m]) * ket[x];
        acc += ((x & mi) != 0) == ((x & mj) != 0) ? -v : v;
      }
      break;
    }
  }
  return cxd(0, -1) * acc;
}

}  // namespace

std::vector<double> CostFunction::gradient(const ParamTable& params,
                                           GradientMethod method,
                                           double fd_step) const {
  params.validate();
  if (method == GradientMethod::finite_difference) {
    if (fd_step <= 0) throw std::invalid_argument("fd step must be positive");
    ParamTable probe = params;
    std::vector<double> grad(params.param_count());
    for (int p = 0; p < params.param_count(); ++p) {
      double saved = probe.theta[p];
      probe.theta[p] = saved + fd_step;
      double up = value(probe);
      probe.theta[p] = saved - fd_step;
      double down = value(probe);
      probe.theta[p] = saved;
      if (!std::isfinite(up) || !std::isfinite(down))
        throw std::runtime_error("non-finite cost while differencing");
      grad[p] = (up - down) / (2.0 * fd_step);
    }
    return grad;
  }

  CircuitPlan plan = build_variational(params, target_);
  if (plan.repetitions != 1)
    throw std::invalid_argument("gradient expects a single-step plan");
  std::vector<int> pidx = variational_param_indices(params, target_);
  const int n = target_.site_count();
  const std::uint64_t dim = 1ull << n;
  std::vector<double> grad(params.param_count(), 0.0);

  if (kind_ == CostKind::frobenius) {
    DenseOperator ket = circuit_unitary(plan);
    DenseOperator bra = u_exact_;
    for (int j = static_cast<int>(plan.gates.size()) - 1; j >= 0; --j) {
      const Gate& g = plan.gates[j];
      cxd acc(0, 0);
      for (std::uint64_t c = 0; c < dim; ++c)
        acc += pauli_bracket(bra.data() + c * dim, ket.data() + c * dim, n, g);
      grad[pidx[j]] += -2.0 / static_cast<double>(dim) * acc.real();
      Gate inverse = g;
      inverse.angle = -g.angle;
      for (std::uint64_t c = 0; c < dim; ++c) {
        apply_gate(ket.data() + c * dim, n, inverse);
        apply_gate(bra.data() + c * dim, n, inverse);
      }
    }
    return grad;
  }

  const int count = samples_.base.count();
  for (int s = 0; s < count; ++s) {
    StateVector ket = samples_.base.states[s];
    apply_plan(ket, plan);
    StateVector bra = samples_.evolved[s];
    cxd o = overlap(bra, ket);
    double mag = std::abs(o);
    if (mag < 1e-12) continue;  // kink of 1 - |o|; contribute nothing
    cxd weight = std::conj(o) / mag;
    for (int j = static_cast<int>(plan.gates.size()) - 1; j >= 0; --j) {
      const Gate& g = plan.gates[j];
      cxd dj = pauli_bracket(bra.amps.data(), ket.amps.data(), n, g);
      grad[pidx[j]] += -(weight * dj).real() / count;
      Gate inverse = g;
      inverse.angle = -g.angle;
      apply_gate(ket, inverse);
      apply_gate(bra, inverse);
    }
  }
  return grad;
}

double observable_error_bound(double frobenius_value, int qubits,
                              double op_norm, double kappa) {
  if (qubits < 1 || op_norm < 0 || kappa <= 0)
    throw std::invalid_argument("bad observable bound inputs");
  double dim = std::pow(2.0, qubits);
  return 2.0 * kappa * op_norm *
         std::sqrt(dim * std::max(frobenius_value, 0.0));
}

}  // namespace vartrot
