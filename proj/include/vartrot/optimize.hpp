#pragma once

#include <functional>
#include <vector>

#include "vartrot/circuit.hpp"

namespace vartrot {

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.99;
  double epsilon = 1e-8;
  int max_steps = 10000;
  bool early_stop = false;          // off by default: short plateaus recover
  double early_stop_rel = 1e-10;    // relative best-cost improvement
  int early_stop_window = 200;      // over this many steps

  void validate() const;
};

struct OptimizationTrace {
  std::vector<double> cost_trace;  // cost at the initial point, then per step
  ParamTable best_params;
  double best_cost = 0.0;
  int steps = 0;
  bool aborted = false;  // non-finite cost or gradient; trace kept up to there
  double wall_seconds = 0.0;
};

using CostFn = std::function<double(const ParamTable&)>;
using GradFn = std::function<std::vector<double>(const ParamTable&)>;

// Adam descent from the given table. Returns the best iterate seen, never a
// worse one than the start; with a Trotter start the result can only improve
// on the plain product formula.
OptimizationTrace optimize(const ParamTable& initial, const CostFn& cost,
                           const GradFn& grad, const AdamConfig& cfg = {});

}  // namespace vartrot
