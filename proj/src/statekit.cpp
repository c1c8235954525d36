#include "vartrot/statekit.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace vartrot {

namespace {

std::uint64_t check_qubits(int n, int cap, const char* what) {
  if (n < 1) throw std::invalid_argument("qubit count must be positive");
  if (n > cap)
    throw std::invalid_argument(std::string(what) + " refused above " +
                                std::to_string(cap) + " qubits");
  return 1ull << n;
}

}  // namespace

StateVector StateVector::zero_state(int n) {
  StateVector s;
  s.qubits = n;
  s.amps.assign(check_qubits(n, kKrylovCap, "state allocation"), cxd(0, 0));
  s.amps[0] = cxd(1, 0);
  return s;
}

StateVector StateVector::basis_state(int n, std::uint64_t index) {
  StateVector s = zero_state(n);
  if (index >= s.dim()) throw std::invalid_argument("basis index out of range");
  s.amps[0] = cxd(0, 0);
  s.amps[index] = cxd(1, 0);
  return s;
}

StateVector StateVector::plus_state(int n) {
  StateVector s;
  s.qubits = n;
  std::uint64_t dim = check_qubits(n, kKrylovCap, "state allocation");
  s.amps.assign(dim, cxd(1.0 / std::sqrt(static_cast<double>(dim)), 0));
  return s;
}

double StateVector::norm() const {
  double acc = 0;
  for (const cxd& v : amps) acc += std::norm(v);
  return std::sqrt(acc);
}

cxd overlap(const StateVector& bra, const StateVector& ket) {
  if (bra.qubits != ket.qubits)
    throw std::invalid_argument("overlap needs equal qubit counts");
  cxd acc(0, 0);
  for (std::uint64_t x = 0; x < bra.dim(); ++x)
    acc += std::conj(bra.amps[x]) * ket.amps[x];
  return acc;
}

void apply_zz(cxd* a, int n, int i, int j, double theta) {
  const std::uint64_t dim = 1ull << n;
  const cxd phase[2] = {std::polar(1.0, -theta), std::polar(1.0, theta)};
  for (std::uint64_t x = 0; x < dim; ++x)
    a[x] *= phase[((x >> i) ^ (x >> j)) & 1ull];
}

void apply_x(cxd* a, int n, int i, double theta) {
  const std::uint64_t half = 1ull << (n - 1);
  const std::uint64_t m = 1ull << i;
  const std::uint64_t lo = m - 1;
  const double c = std::cos(theta), s = std::sin(theta);
  const cxd is(0, s);
  for (std::uint64_t b = 0; b < half; ++b) {
    std::uint64_t x0 = ((b & ~lo) << 1) | (b & lo);
    std::uint64_t x1 = x0 | m;
    cxd a0 = a[x0], a1 = a[x1];
    a[x0] = c * a0 - is * a1;
    a[x1] = c * a1 - is * a0;
  }
}

void apply_yy(cxd* a, int n, int i, int j, double theta) {
  if (i > j) std::swap(i, j);
  const std::uint64_t quarter = 1ull << (n - 2);
  const std::uint64_t mi = 1ull << i, mj = 1ull << j;
  const std::uint64_t loi = mi - 1, loj = mj - 1;
  const double c = std::cos(theta), s = std::sin(theta);
  const cxd is(0, s);
  for (std::uint64_t b = 0; b < quarter; ++b) {
    std::uint64_t y = ((b & ~loi) << 1) | (b & loi);
    std::uint64_t x00 = ((y & ~loj) << 1) | (y & loj);
    std::uint64_t x01 = x00 | mi, x10 = x00 | mj, x11 = x01 | mj;
    cxd a00 = a[x00], a01 = a[x01], a10 = a[x10], a11 = a[x11];
    a[x00] = c * a00 + is * a11;
    a[x11] = c * a11 + is * a00;
    a[x01] = c * a01 - is * a10;
    a[x10] = c * a10 - is * a01;
  }
}

void apply_gate(cxd* a, int n, const Gate& g) {
  switch (g.kind) {
    case TermKind::zz: apply_zz(a, n, g.sites[0], g.sites[1], g.angle); break;
    case TermKind::x: apply_x(a, n, g.sites[0], g.angle); break;
    case TermKind::yy: apply_yy(a, n, g.sites[0], g.sites[1], g.angle); break;
  }
}

void apply_gate(StateVector& s, const Gate& g) {
  apply_gate(s.amps.data(), s.qubits, g);
}

void apply_plan(StateVector& s, const CircuitPlan& plan) {
  if (plan.lattice.site_count() != s.qubits)
    throw std::invalid_argument("plan and state disagree on qubit count");
  for (int rep = 0; rep < plan.repetitions; ++rep)
    for (const Gate& g : plan.gates) apply_gate(s, g);
}

DenseOperator circuit_unitary(const CircuitPlan& plan) {
  plan.validate();
  const int n = plan.lattice.site_count();
  const std::uint64_t dim = check_qubits(n, kDenseCap, "dense unitary");
  DenseOperator u = DenseOperator::Identity(dim, dim);
  for (std::uint64_t col = 0; col < dim; ++col) {
    cxd* ptr = u.data() + col * dim;
    for (int rep = 0; rep < plan.repetitions; ++rep)
      for (const Gate& g : plan.gates) apply_gate(ptr, n, g);
  }
  return u;
}

Eigen::MatrixXd hamiltonian_dense(const TermList& terms) {
  const int n = terms.lattice.site_count();
  const std::uint64_t dim = check_qubits(n, kDenseCap, "dense Hamiltonian");
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (const Term& t : terms.terms) {
    double c = t.coefficient;
    if (c == 0.0) continue;
    switch (t.kind) {
      case TermKind::zz: {
        std::uint64_t mi = 1ull << t.sites[0], mj = 1ull << t.sites[1];
        for (std::uint64_t x = 0; x < dim; ++x)
          h(x, x) += ((x & mi) != 0) == ((x & mj) != 0) ? c : -c;
        break;
      }
      case TermKind::x: {
        std::uint64_t m = 1ull << t.sites[0];
        for (std::uint64_t x = 0; x < dim; ++x) h(x ^ m, x) += c;
        break;
      }
      case TermKind::yy: {
        std::uint64_t mi = 1ull << t.sites[0], mj = 1ull << t.sites[1];
        std::uint64_t m = mi | mj;
        for (std::uint64_t x = 0; x < dim; ++x) {
          bool equal = ((x & mi) != 0) == ((x & mj) != 0);
          h(x ^ m, x) += equal ? -c : c;
        }
        break;
      }
    }
  }
  return h;
}

DenseOperator SpectralPropagator::at(double tau) const {
  const auto dim = basis.rows();
  Eigen::ArrayXd ang = energies.array() * (-tau);
  Eigen::MatrixXd wc = basis, ws = basis;
  for (Eigen::Index k = 0; k < dim; ++k) {
    wc.col(k) *= std::cos(ang(k));
    ws.col(k) *= std::sin(ang(k));
  }
  DenseOperator u(dim, dim);
  u.real().noalias() = wc * basis.transpose();
  u.imag().noalias() = ws * basis.transpose();
  return u;
}

SpectralPropagator spectral_decompose(const TermList& terms) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hamiltonian_dense(terms));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  return {es.eigenvectors(), es.eigenvalues()};
}

DenseOperator exact_propagator_dense(const TermList& terms, double tau) {
  return spectral_decompose(terms).at(tau);
}

HamiltonianAction::HamiltonianAction(const TermList& terms) {
  qubits_ = terms.lattice.site_count();
  const std::uint64_t dim = check_qubits(qubits_, kKrylovCap, "matrix-free H");
  diagonal_.assign(dim, 0.0);
  for (const Term& t : terms.terms) {
    bound_ += std::abs(t.coefficient);
    if (t.coefficient == 0.0) continue;
    switch (t.kind) {
      case TermKind::zz: {
        std::uint64_t mi = 1ull << t.sites[0], mj = 1ull << t.sites[1];
        double c = t.coefficient;
        for (std::uint64_t x = 0; x < dim; ++x)
          diagonal_[x] += ((x & mi) != 0) == ((x & mj) != 0) ? c : -c;
        break;
      }
      case TermKind::x:
        flips_.push_back({t.kind, 1ull << t.sites[0], 0, t.coefficient});
        break;
      case TermKind::yy: {
        std::uint64_t m = (1ull << t.sites[0]) | (1ull << t.sites[1]);
        flips_.push_back({t.kind, m, m, t.coefficient});
        break;
      }
    }
  }
}

void HamiltonianAction::apply(const cxd* x, cxd* y) const {
  const std::uint64_t dim = 1ull << qubits_;
  for (std::uint64_t idx = 0; idx < dim; ++idx) y[idx] = diagonal_[idx] * x[idx];
  for (const FlipTerm& f : flips_) {
    if (f.kind == TermKind::x) {
      for (std::uint64_t idx = 0; idx < dim; ++idx)
        y[idx] += f.coefficient * x[idx ^ f.mask];
    } else {
      // yy: source amplitude sits at idx ^ mask; sign depends on whether the
      // two bits of idx agree (then -c) or differ (+c).
      for (std::uint64_t idx = 0; idx < dim; ++idx) {
        double c = std::popcount(idx & f.sign_mask) == 1 ? f.coefficient
                                                         : -f.coefficient;
        y[idx] += c * x[idx ^ f.mask];
      }
    }
  }
}

namespace {

// exp(-i dt T) e1 for the (k+1)-dim tridiagonal T given by alpha, beta.
Eigen::VectorXcd small_exponential(const std::vector<double>& alpha,
                                   const std::vector<double>& beta, int k,
                                   double dt) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k + 1, k + 1);
  for (int r = 0; r <= k; ++r) {
    t(r, r) = alpha[r];
    if (r < k) {
      t(r, r + 1) = beta[r];
      t(r + 1, r) = beta[r];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  Eigen::VectorXd q0 = es.eigenvectors().row(0);
  Eigen::VectorXcd phased(k + 1);
  for (int r = 0; r <= k; ++r)
    phased(r) = std::polar(q0(r), -es.eigenvalues()(r) * dt);
  return es.eigenvectors() * phased;
}

using Buffer = std::vector<cxd>;

void axpy(Buffer& y, double a, const Buffer& x) {
  for (size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

double re_dot(const Buffer& a, const Buffer& b) {
  double acc = 0;
  for (size_t i = 0; i < a.size(); ++i)
    acc += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return acc;
}

double nrm2(const Buffer& a) {
  double acc = 0;
  for (const cxd& v : a) acc += std::norm(v);
  return std::sqrt(acc);
}

// One Lanczos pass from v0 (normalized). Runs the three-term recurrence up
// to max_dim vectors, testing the standard residual estimate beta * |y_k|
// after each step. On convergence fills alpha/beta/y and returns the used
// dimension; returns -1 otherwise. Vectors are stored when keep is given.
int lanczos_recurrence(const HamiltonianAction& h, const Buffer& v0, double dt,
                       const KrylovOptions& opts, std::vector<double>& alpha,
                       std::vector<double>& beta, Eigen::VectorXcd& y,
                       std::vector<Buffer>* keep) {
  const std::uint64_t dim = v0.size();
  Buffer v_prev(dim), v_cur = v0, w(dim);
  alpha.clear();
  beta.clear();
  if (keep) {
    keep->clear();
    keep->push_back(v_cur);
  }
  for (int k = 0; k < opts.max_dim; ++k) {
    h.apply(v_cur.data(), w.data());
    double a = re_dot(v_cur, w);
    alpha.push_back(a);
    for (std::uint64_t i = 0; i < dim; ++i) {
      w[i] -= a * v_cur[i];
      if (k > 0) w[i] -= beta[k - 1] * v_prev[i];
    }
    double b = nrm2(w);
    y = small_exponential(alpha, beta, k, dt);
    if (b * std::abs(y(k)) <= opts.residual_tol || b < 1e-14)
      return k + 1;
    beta.push_back(b);
    std::swap(v_prev, v_cur);
    std::swap(v_cur, w);
    for (std::uint64_t i = 0; i < dim; ++i) v_cur[i] /= b;
    if (keep) keep->push_back(v_cur);
  }
  return -1;
}

// Regenerates the Lanczos vectors from recorded coefficients, accumulating
// out = sum_k y_k v_k. The recurrence repeats the first pass bit for bit.
void lanczos_rebuild(const HamiltonianAction& h, const Buffer& v0,
                     const std::vector<double>& alpha,
                     const std::vector<double>& beta,
                     const Eigen::VectorXcd& y, Buffer& out) {
  const std::uint64_t dim = v0.size();
  const int used = static_cast<int>(alpha.size());
  Buffer v_prev(dim), v_cur = v0, w(dim);
  out.assign(dim, cxd(0, 0));
  for (int k = 0; k < used; ++k) {
    cxd yk = y(k);
    for (std::uint64_t i = 0; i < dim; ++i) out[i] += yk * v_cur[i];
    if (k + 1 == used) break;
    h.apply(v_cur.data(), w.data());
    for (std::uint64_t i = 0; i < dim; ++i) {
      w[i] -= alpha[k] * v_cur[i];
      if (k > 0) w[i] -= beta[k - 1] * v_prev[i];
    }
    std::swap(v_prev, v_cur);
    std::swap(v_cur, w);
    for (std::uint64_t i = 0; i < dim; ++i) v_cur[i] /= beta[k];
  }
}

bool lanczos_step(const HamiltonianAction& h, double dt, Buffer& psi,
                  const KrylovOptions& opts, bool two_pass) {
  double nrm = nrm2(psi);
  if (nrm == 0.0) return true;
  Buffer v0 = psi;
  for (cxd& v : v0) v /= nrm;

  std::vector<double> alpha, beta;
  Eigen::VectorXcd y;
  if (two_pass) {
    int used =
        lanczos_recurrence(h, v0, dt, opts, alpha, beta, y, nullptr);
    if (used < 0) return false;
    Buffer out;
    lanczos_rebuild(h, v0, alpha, beta, y, out);
    for (std::uint64_t i = 0; i < out.size(); ++i) psi[i] = nrm * out[i];
    return true;
  }
  std::vector<Buffer> basis;
  int used = lanczos_recurrence(h, v0, dt, opts, alpha, beta, y, &basis);
  if (used < 0) return false;
  std::fill(psi.begin(), psi.end(), cxd(0, 0));
  for (int k = 0; k < used; ++k) {
    cxd yk = y(k) * nrm;
    const Buffer& vk = basis[k];
    for (std::uint64_t i = 0; i < psi.size(); ++i) psi[i] += yk * vk[i];
  }
  return true;
}

}  // namespace

void exact_evolve_state(const TermList& terms, double tau, StateVector& psi,
                        const KrylovOptions& opts) {
  const int n = terms.lattice.site_count();
  check_qubits(n, kKrylovCap, "matrix-free evolution");
  if (psi.qubits != n)
    throw std::invalid_argument("state and Hamiltonian disagree on qubits");
  if (tau == 0.0) return;
  HamiltonianAction h(terms);

  // Basis storage for max_dim vectors is only worth it while it fits
  // comfortably; otherwise run the two-pass sweep.
  double stored_bytes =
      (static_cast<double>(opts.max_dim) + 3.0) * psi.dim() * sizeof(cxd);
  bool two_pass = opts.force_two_pass || stored_bytes > 1.2e9;

  int nsub = std::max(
      1, static_cast<int>(std::ceil(h.norm_bound() * std::abs(tau) /
                                    opts.max_step_norm)));
  double dt = tau / nsub;
  double remaining = tau;
  int halvings = 0;
  while (std::abs(remaining) > 1e-15 * std::abs(tau)) {
    double step = std::abs(dt) < std::abs(remaining) ? dt : remaining;
    if (!lanczos_step(h, step, psi.amps, opts, two_pass)) {
      dt *= 0.5;
      if (++halvings > 60)
        throw std::runtime_error("matrix-free evolution does not converge");
      continue;
    }
    remaining -= step;
  }
}

double measure_z_string(const StateVector& psi, const std::vector<int>& sites) {
  std::uint64_t mask = 0;
  for (int s : sites) {
    if (s < 0 || s >= psi.qubits)
      throw std::invalid_argument("observable site out of range");
    mask |= 1ull << s;
  }
  double acc = 0;
  for (std::uint64_t x = 0; x < psi.dim(); ++x) {
    double p = std::norm(psi.amps[x]);
    acc += std::popcount(x & mask) % 2 == 0 ? p : -p;
  }
  return acc;
}

}  // namespace vartrot
