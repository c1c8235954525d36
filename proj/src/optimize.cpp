#include "vartrot/optimize.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace vartrot {

void AdamConfig::validate() const {
  if (learning_rate <= 0 || epsilon <= 0)
    throw std::invalid_argument("learning rate and epsilon must be positive");
  if (beta1 < 0 || beta1 >= 1 || beta2 < 0 || beta2 >= 1)
    throw std::invalid_argument("betas must lie in [0, 1)");
  if (max_steps < 0) throw std::invalid_argument("max_steps must be >= 0");
  if (early_stop && early_stop_window < 1)
    throw std::invalid_argument("early stop window must be >= 1");
}

OptimizationTrace optimize(const ParamTable& initial, const CostFn& cost,
                           const GradFn& grad, const AdamConfig& cfg) {
  cfg.validate();
  initial.validate();
  auto t0 = std::chrono::steady_clock::now();

  OptimizationTrace out;
  ParamTable p = initial;
  const int np = p.param_count();

  double c = cost(p);
  if (!std::isfinite(c)) throw std::invalid_argument("initial cost not finite");
  out.cost_trace.push_back(c);
  out.best_params = p;
  out.best_cost = c;

  std::vector<double> m(np, 0.0), v(np, 0.0);
  std::vector<double> best_hist{c};
  double pow_b1 = 1.0, pow_b2 = 1.0;

  for (int t = 1; t <= cfg.max_steps; ++t) {
    std::vector<double> g = grad(p);
    if (static_cast<int>(g.size()) != np)
      throw std::invalid_argument("gradient length mismatch");
    bool bad = false;
    for (double x : g) bad |= !std::isfinite(x);
    if (bad) {
      out.aborted = true;
      break;
    }

    pow_b1 *= cfg.beta1;
    pow_b2 *= cfg.beta2;
    for (int i = 0; i < np; ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
      double mhat = m[i] / (1.0 - pow_b1);
      double vhat = v[i] / (1.0 - pow_b2);
      p.theta[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
    }

    c = cost(p);
    out.steps = t;
    if (!std::isfinite(c)) {
      out.aborted = true;
      break;
    }
    out.cost_trace.push_back(c);
    if (c < out.best_cost) {
      out.best_cost = c;
      out.best_params = p;
    }
    best_hist.push_back(out.best_cost);

    if (cfg.early_stop && t >= cfg.early_stop_window) {
      double before = best_hist[t - cfg.early_stop_window];
      double rel = (before - out.best_cost) / std::max(before, 1e-300);
      if (rel < cfg.early_stop_rel) break;
    }
  }

  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

}  // namespace vartrot
