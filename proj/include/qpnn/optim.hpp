#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace qpnn {

// Settings for the derivative-free trust-region minimizer. The search is
// box-constrained; phase parameters use [0, 2*pi] and wrap at evaluation
// time, so the bounds only shape the interpolation geometry.
struct OptimizerConfig {
  double ftol_abs = 1e-6;  // stall tolerance on the best value
  int max_evals = 20000;
  double lower = 0.0;
  double upper = 6.283185307179586476925286766559;
  double initial_radius = 0.5;
  double min_radius = 1e-9;
  int stall_window = 0;  // evaluations without progress; 0 picks 2d+1
};

enum class StopReason { converged, budget_exhausted };

struct MinimizeResult {
  Eigen::VectorXd best_point;
  double best_value = 0.0;
  std::vector<double> trace;  // best value so far, one entry per evaluation
  int evaluations = 0;
  StopReason reason = StopReason::converged;
};

using ObjectiveFn = std::function<double(const Eigen::VectorXd&)>;

// Model-based minimization without derivatives: keeps 2d+1 sample points,
// fits a minimum-Frobenius-norm quadratic through them, and steps to the
// model minimizer inside a trust region. Deterministic: the same start
// point and objective reproduce the evaluation sequence exactly.
MinimizeResult minimize(const ObjectiveFn& objective,
                        const Eigen::VectorXd& start,
                        const OptimizerConfig& config);

}  // namespace qpnn
