// Acceptance gate: runs every project acceptance criterion at its stated
// tolerance and prints one pass/fail line per criterion. Exit code is the
// number of failed criteria, so CI can gate on it directly.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "vartrot/bench.hpp"
#include "vartrot/upscale.hpp"

using namespace vartrot;

namespace {

const CouplingSet kIsing{Model::tfim, 1.0, 0.25, 0.0};

// Raw-word uniforms keep the draws identical across standard libraries.
double u01(std::mt19937_64& rng) {
  return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}
double uni(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * u01(rng);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Runner {
  int failures = 0;
  int total = 0;

  // body returns (pass, detail line fragment)
  template <class F>
  void run(int index, const std::string& name, F&& body) {
    ++total;
    auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
      auto [p, d] = body();
      pass = p;
      detail = d;
    } catch (const std::exception& e) {
      pass = false;
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    if (!pass) ++failures;
    std::cout << "criterion " << index << " [" << (pass ? "PASS" : "FAIL")
              << "] " << name << ": " << detail << " (" << fmt(secs) << " s)"
              << std::endl;
  }
};

double frob_value(const CircuitPlan& plan, const DenseOperator& u_ex) {
  return frobenius_cost(circuit_unitary(plan), u_ex).value;
}

OptimizationTrace train(const CostFunction& f, const ParamTable& p0,
                        const AdamConfig& cfg) {
  return optimize(
      p0, [&](const ParamTable& p) { return f.value(p); },
      [&](const ParamTable& p) { return f.gradient(p); }, cfg);
}

}  // namespace

int main() {
  Runner r;
  std::cout << "acceptance gate" << std::endl;

  // Criterion 1: re-targeting product-formula parameters to a larger ring
  // rebuilds exactly the direct product formula there.
  r.run(1, "periodic upscaling equals direct construction", [] {
    const double tau = 0.37;
    std::map<std::pair<int, int>, DenseOperator> direct;
    double worst = 0.0;
    for (int n_train = 3; n_train <= 6; ++n_train) {
      for (int m = 1; m <= 3; ++m) {
        ParamTable p = trotter_init(tau, m, kIsing, chain(n_train));
        for (int n_target = n_train + 1; n_target <= 10; ++n_target) {
          auto key = std::make_pair(n_target, m);
          if (!direct.count(key))
            direct[key] =
                circuit_unitary(build_trotter(tau, m, chain(n_target), kIsing));
          CircuitPlan up = upscale_periodic(p, chain(n_target));
          double dev =
              (circuit_unitary(up) - direct[key]).cwiseAbs().maxCoeff();
          worst = std::max(worst, dev);
        }
      }
    }
    return std::make_pair(worst <= 1e-12,
                          "max unitary deviation " + fmt(worst) +
                              " over 66 (train, target, m) combinations");
  });

  // Criterion 2: log-log slope of the operator-level cost in the step size.
  r.run(2, "cost scales at the expected error order", [] {
    LatticeSpec lat = chain(4);
    TermList terms = build_terms(lat, kIsing);
    SpectralPropagator sp = spectral_decompose(terms);
    auto slope_of = [&](auto&& make_plan) {
      std::vector<double> lx, ly;
      for (int i = 0; i < 12; ++i) {
        double t = 0.02 * std::pow(10.0, i / 11.0);
        double c = frob_value(make_plan(t), sp.at(t));
        if (c > 1e-13) {
          lx.push_back(std::log(t));
          ly.push_back(std::log(c));
        }
      }
      if (lx.size() < 3)
        throw std::runtime_error("fewer than 3 points above the cost floor");
      return fit_linear(lx, ly).slope;
    };
    double s1 = slope_of([&](double t) { return build_trotter(t, 1, lat, kIsing); });
    double s2 = slope_of([&](double t) {
      return build_suzuki(SuzukiOrder::s2, t, 1, lat, kIsing);
    });
    double s4 = slope_of([&](double t) {
      return build_suzuki(SuzukiOrder::s4, t, 1, lat, kIsing);
    });
    bool pass = std::abs(s1 - 4.0) <= 0.3 && std::abs(s2 - 6.0) <= 0.5 &&
                std::abs(s4 - 10.0) <= 1.0;
    return std::make_pair(pass, "slopes " + fmt(s1) + " (want 4 +- 0.3), " +
                                    fmt(s2) + " (want 6 +- 0.5), " + fmt(s4) +
                                    " (want 10 +- 1.0)");
  });

  // Criterion 3: training at 6 qubits beats the m=3 product formula by 100x
  // and the m=6 one outright. Artifacts reused by criterion 4.
  std::optional<ParamTable> params_c3;
  double best6_frob = 0.0;
  r.run(3, "optimization improves on the product formula", [&] {
    TermList terms = build_terms(chain(6), kIsing);
    CostFunction f = CostFunction::frobenius(terms, 0.3);
    ParamTable p0 = trotter_init(0.3, 3, kIsing, chain(6));
    double c_trot3 = f.value(p0);
    double c_trot6 = f.value(trotter_init(0.3, 6, kIsing, chain(6)));
    OptimizationTrace tr = train(f, p0, AdamConfig{});
    params_c3 = tr.best_params;
    best6_frob = tr.best_cost;
    bool pass = tr.best_cost <= c_trot3 / 100.0 && tr.best_cost <= c_trot6;
    return std::make_pair(
        pass, "cost " + fmt(tr.best_cost) + " vs trotter m=3 " + fmt(c_trot3) +
                  " (x" + fmt(c_trot3 / tr.best_cost) + ") and m=6 " +
                  fmt(c_trot6) + ", " + std::to_string(tr.steps) + " steps");
  });

  // Shared 12-qubit eigendecomposition for criteria 4 and 7.
  std::optional<SpectralPropagator> sp12;
  auto spectral12 = [&]() -> SpectralPropagator& {
    if (!sp12) sp12 = spectral_decompose(build_terms(chain(12), kIsing));
    return *sp12;
  };

  // Criterion 4: the 6-qubit optimum survives re-targeting. Each target is
  // compared in its own evaluation convention against the same parameters
  // at 6 qubits.
  r.run(4, "upscaled parameters stay within 5x of the optimum", [&] {
    if (!params_c3) throw std::runtime_error("needs criterion 3 parameters");
    const ParamTable& params = *params_c3;

    double c12 = frob_value(build_variational(params, chain(12)),
                            spectral12().at(0.3));

    TermList terms6 = build_terms(chain(6), kIsing);
    EvolvedSamples ev6 = evolve_samples(terms6, 0.3, SampleSet::haar(6, 20, 4001));
    double base_sampled =
        sampled_cost(build_variational(params, chain(6)), ev6).value;

    std::ostringstream os;
    os << "frobenius 6q " << fmt(best6_frob) << " -> 12q " << fmt(c12) << " (x"
       << fmt(c12 / best6_frob) << "); sampled 6q " << fmt(base_sampled);
    bool pass = c12 <= 5.0 * best6_frob;
    for (int n : {15, 18}) {
      TermList terms = build_terms(chain(n), kIsing);
      EvolvedSamples ev =
          evolve_samples(terms, 0.3, SampleSet::haar(n, 20, 4001));
      double c = sampled_cost(build_variational(params, chain(n)), ev).value;
      pass = pass && c <= 5.0 * base_sampled;
      os << " -> " << n << "q " << fmt(c) << " (x" << fmt(c / base_sampled)
         << ")";
    }
    return std::make_pair(pass, os.str());
  });

  // Criterion 5: the trained point never falls behind its own start.
  r.run(5, "optimization never loses to its initialization", [] {
    std::mt19937_64 rng(5001);
    double worst_margin = -1.0;
    for (int i = 0; i < 10; ++i) {
      int n = 3 + static_cast<int>(rng() % 4);
      CouplingSet c{Model::tfim, uni(rng, -1.0, 1.0), uni(rng, 0.0, 1.0), 0.0};
      double tau = uni(rng, 0.05, 1.0);
      int m = 1 + static_cast<int>(rng() % 3);
      Boundary b = (rng() & 1) ? Boundary::periodic : Boundary::open;
      TermList terms = build_terms(chain(n, b), c);
      CostFunction f = CostFunction::frobenius(terms, tau);
      ParamTable p0 = trotter_init(tau, m, c, chain(n, b));
      double trotter = f.value(p0);
      AdamConfig cfg;
      cfg.learning_rate = 1e-3;
      cfg.max_steps = 200;
      OptimizationTrace tr = train(f, p0, cfg);
      worst_margin = std::max(worst_margin, tr.best_cost - trotter);
      if (tr.best_cost > trotter)
        return std::make_pair(false, "instance " + std::to_string(i) +
                                         " got worse by " +
                                         fmt(tr.best_cost - trotter));
    }
    return std::make_pair(true, std::string("10 random instances, worst "
                                            "(optimized - trotter) margin ") +
                                    fmt(worst_margin));
  });

  // Criterion 6: the adjoint gradient agrees with central differences.
  r.run(6, "adjoint gradient matches finite differences", [] {
    std::mt19937_64 rng(6001);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      int n = 2 + static_cast<int>(rng() % 5);
      Boundary b = (n >= 3 && (rng() & 1)) ? Boundary::periodic : Boundary::open;
      Model model = (rng() & 1) ? Model::tfxy : Model::tfim;
      CouplingSet c{model, uni(rng, -1.0, 1.0), uni(rng, 0.0, 1.0),
                    model == Model::tfxy ? uni(rng, -1.0, 1.0) : 0.0};
      double tau = uni(rng, 0.1, 0.8);
      int m = 1 + static_cast<int>(rng() % 3);
      ParamMode mode =
          (rng() & 1) ? ParamMode::site_resolved : ParamMode::shared;
      LatticeSpec lat = chain(n, b);
      ParamTable p = trotter_init(tau, m, c, lat, mode);
      for (double& th : p.theta) th += uni(rng, -0.3, 0.3);

      TermList terms = build_terms(lat, c);
      CostFunction f = (i % 2 == 0)
                           ? CostFunction::frobenius(terms, tau)
                           : CostFunction::sampled(terms, tau, 4, 6100 + i);
      std::vector<double> adj = f.gradient(p, GradientMethod::adjoint);
      std::vector<double> fd =
          f.gradient(p, GradientMethod::finite_difference, 1e-6);
      for (std::size_t k = 0; k < adj.size(); ++k)
        worst = std::max(worst, std::abs(adj[k] - fd[k]));
    }
    return std::make_pair(worst <= 1e-6,
                          "max |adjoint - central difference| " + fmt(worst) +
                              " over 20 instances, both cost kinds");
  });

  // Criterion 7: size-sweep fits projected to 50 qubits under gate noise.
  r.run(7, "noise projection at 50 qubits lands in the observed bands", [&] {
    TermList terms6 = build_terms(chain(6), kIsing);
    CostFunction f = CostFunction::frobenius(terms6, 2.5);
    ParamTable p0 = trotter_init(2.5, 3, kIsing, chain(6));
    OptimizationTrace tr = train(f, p0, AdamConfig{});

    std::vector<double> sizes{6, 8, 10, 12, 15, 18};
    std::vector<double> c_var, c_t3, c_t6;
    std::ostringstream cross;
    for (double nd : sizes) {
      int n = static_cast<int>(nd);
      LatticeSpec lat = chain(n);
      TermList terms = build_terms(lat, kIsing);
      EvolvedSamples ev =
          evolve_samples(terms, 2.5, SampleSet::haar(n, 20, 7001));
      CircuitPlan var = build_variational(tr.best_params, lat);
      CircuitPlan t3 = build_trotter(2.5, 3, lat, kIsing);
      CircuitPlan t6 = build_trotter(2.5, 6, lat, kIsing);
      c_var.push_back(sampled_cost(var, ev).value);
      c_t3.push_back(sampled_cost(t3, ev).value);
      c_t6.push_back(sampled_cost(t6, ev).value);
      if (n <= kDenseCap) {
        DenseOperator u_ex = n == 12
                                 ? spectral12().at(2.5)
                                 : exact_propagator_dense(terms, 2.5);
        cross << " " << n << "q(frob var/t3/t6 " << fmt(frob_value(var, u_ex))
              << "/" << fmt(frob_value(t3, u_ex)) << "/"
              << fmt(frob_value(t6, u_ex)) << ")";
      }
    }
    sp12.reset();

    NoiseModel noise{0.999};
    NisqProjection pv = extrapolate_nisq(fit_linear(sizes, c_var), chain(50),
                                         kIsing, 2.5, 3, noise);
    NisqProjection p3 = extrapolate_nisq(fit_linear(sizes, c_t3), chain(50),
                                         kIsing, 2.5, 3, noise);
    NisqProjection p6 = extrapolate_nisq(fit_linear(sizes, c_t6), chain(50),
                                         kIsing, 2.5, 6, noise);
    bool pass = std::abs(pv.infidelity - 0.29) <= 0.08 &&
                std::abs(p6.infidelity - 0.57) <= 0.08 &&
                pv.infidelity < p3.infidelity && pv.infidelity < p6.infidelity;
    std::cout << "  info: overlap-convention fits at N = {6,8,10,12,15,18};"
              << " dense cross-checks:" << cross.str() << std::endl;
    return std::make_pair(
        pass, "projected infidelity var " + fmt(pv.infidelity) +
                  " (want 0.29 +- 0.08), trotter m=6 " + fmt(p6.infidelity) +
                  " (want 0.57 +- 0.08), trotter m=3 " + fmt(p3.infidelity) +
                  ", ordering var < m=3 and var < m=6 " +
                  (pv.infidelity < p3.infidelity &&
                           pv.infidelity < p6.infidelity
                       ? "holds"
                       : "broken"));
  });

  // Criterion 8: one vanishing coupling class makes the formula exact.
  r.run(8, "product formula is exact when a coupling class vanishes", [] {
    double worst = 0.0;
    for (const CouplingSet& c :
         {CouplingSet{Model::tfim, 0.0, 0.7, 0.0},
          CouplingSet{Model::tfim, 1.2, 0.0, 0.0}}) {
      TermList terms = build_terms(chain(6), c);
      SpectralPropagator sp = spectral_decompose(terms);
      DenseOperator u_ex = sp.at(0.3);
      for (int m = 1; m <= 6; ++m)
        worst = std::max(
            worst, frob_value(build_trotter(0.3, m, chain(6), c), u_ex));
    }
    return std::make_pair(worst <= 1e-10,
                          "max cost " + fmt(worst) +
                              " over Jz=0 and hx=0, m = 1..6");
  });

  // Criterion 9: under gate noise the deep higher-order formulas lose to the
  // shallow trained circuit after one step on the 3x6 lattice.
  r.run(9, "trained circuit beats deep formulas under gate noise", [] {
    LatticeSpec block = grid(3, 3);
    TermList terms9 = build_terms(block, kIsing);
    CostFunction f9 = CostFunction::sampled(terms9, 1.0, 10, 9001);
    AdamConfig cfg;
    cfg.learning_rate = 1e-3;
    cfg.max_steps = 3000;
    OptimizationTrace tr = train(f9, trotter_init(1.0, 3, kIsing, block), cfg);

    LatticeSpec big = grid(3, 6);
    TermList terms18 = build_terms(big, kIsing);
    EvolvedSamples ev =
        evolve_samples(terms18, 1.0, SampleSet::haar(18, 10, 9002));
    NoiseModel noise{0.999};

    CircuitPlan var = upscale_periodic(tr.best_params, big);
    double c_var = sampled_cost(var, ev).value;
    double t_var = nisq_infidelity(std::max(0.0, 1.0 - c_var), var, noise);

    std::map<int, double> total;
    std::ostringstream os;
    for (int order : {2, 4, 6, 8}) {
      CircuitPlan plan = build_suzuki(static_cast<SuzukiOrder>(order), 1.0, 1,
                                      big, kIsing);
      double c = sampled_cost(plan, ev).value;
      total[order] =
          nisq_infidelity(std::max(0.0, 1.0 - c), plan, noise);
      os << " S" << order << " " << fmt(total[order]) << " (G="
         << gate_stats(plan).gate_count << ")";
    }
    bool pass = t_var < total[6] && t_var < total[8];
    return std::make_pair(pass, "total infidelity var m=3 " + fmt(t_var) +
                                    " (G=" + std::to_string(
                                                 gate_stats(var).gate_count) +
                                    ") vs" + os.str());
  });

  // Criterion 10: stepping a 15-qubit correlation, the trained circuit
  // tracks the exact flow closer than the m=3 formula at the first step.
  r.run(10, "observable tracking at 15 qubits", [] {
    TermList terms6 = build_terms(chain(6), kIsing);
    CostFunction f = CostFunction::frobenius(terms6, 1.0);
    OptimizationTrace tr =
        train(f, trotter_init(1.0, 3, kIsing, chain(6)), AdamConfig{});

    LatticeSpec lat = chain(15);
    TermList terms = build_terms(lat, kIsing);
    StateVector psi0 = StateVector::plus_state(15);
    std::vector<int> obs{7, 8};
    CircuitPlan var = build_variational(tr.best_params, lat);
    CircuitPlan trot = build_trotter(1.0, 3, lat, kIsing);
    auto rv = evolve_and_measure(var, terms, 1.0, psi0, 10, obs);
    auto rt = evolve_and_measure(trot, terms, 1.0, psi0, 10, obs);

    std::ofstream csv("observable_tracking.csv");
    csv << "step,time,exact,var,var_abs_error,trotter,trotter_abs_error\n";
    for (std::size_t i = 0; i < rv.size(); ++i) {
      char line[256];
      std::snprintf(line, sizeof line,
                    "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", rv[i].step,
                    rv[i].time, rv[i].exact, rv[i].approx, rv[i].abs_error,
                    rt[i].approx, rt[i].abs_error);
      csv << line;
    }
    bool pass = rv[1].abs_error <= rt[1].abs_error;
    return std::make_pair(
        pass, "step-1 error var " + fmt(rv[1].abs_error) + " vs trotter m=3 " +
                  fmt(rt[1].abs_error) +
                  "; curves in observable_tracking.csv");
  });

  // Criterion 11: the same improvement margin holds for the XY model.
  r.run(11, "XY-model training beats the product formula by 100x", [] {
    CouplingSet xy{Model::tfxy, 1.0, 0.25, 0.5};
    TermList terms = build_terms(chain(6), xy);
    CostFunction f = CostFunction::frobenius(terms, 0.3);
    ParamTable p0 = trotter_init(0.3, 3, xy, chain(6));
    double c_trot3 = f.value(p0);
    OptimizationTrace tr = train(f, p0, AdamConfig{});
    bool pass = tr.best_cost <= c_trot3 / 100.0;
    return std::make_pair(pass, "cost " + fmt(tr.best_cost) +
                                    " vs trotter m=3 " + fmt(c_trot3) + " (x" +
                                    fmt(c_trot3 / tr.best_cost) + ")");
  });

  std::cout << "acceptance: " << (r.total - r.failures) << "/" << r.total
            << " criteria passed" << std::endl;
  return r.failures;
}
