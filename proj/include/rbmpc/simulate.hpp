#pragma once

#include "rbmpc/certify.hpp"
#include "rbmpc/scheme.hpp"

#include <string>
#include <vector>

namespace rbmpc {

struct SimOptions {
  int sim_steps = 600;
  bool certificates = false;  // compute alpha and the violation bounds per step
  double stop_cost = -1.0;    // stop once J(U(k),x(k)) <= stop_cost (off when < 0)
};

struct StepRecord {
  Vector x;
  Vector u;
  double cost = 0.0;       // J(U(k), x(k))
  double grad_norm = 0.0;  // |grad J| at the post-update state
  double alpha = 0.0;
  Vector zx, zu;           // certified violation bounds (empty when disabled)
  int ls_iters = 0;
  double gamma = 0.0;      // certified decrease of the first inner update
};

struct TrajectoryLog {
  std::vector<StepRecord> steps;
  int max_backtrack = 0;
  double min_step = std::numeric_limits<double>::infinity();
  int settled_step = -1;  // first k with |x(k)| <= 1e-3
};

/// Closed-loop simulation: alternates the plant step with controller_step,
/// logging every field. Deterministic for a given problem and x0.
TrajectoryLog simulate_trajectory(const CondensedProblem& cp, const Vector& x0, InitMode init,
                                  const IterationSchedule& schedule, const LineSearchConfig& cfg,
                                  const SimOptions& options);

/// One closed-loop run variant for method comparisons.
struct RunSpec {
  std::string label;
  LineSearchConfig ls;
  IterationSchedule schedule = IterationSchedule::fixed(1);
  InitMode init = InitMode::GainRollout;
};

struct CompareSummary {
  std::vector<std::string> labels;
  // mean_cost[run][k] = mean over initial conditions of J(U(k), x(k))
  std::vector<std::vector<double>> mean_cost;
};

/// Mean cost-versus-step curves over a shared set of initial conditions.
CompareSummary compare_methods(const CondensedProblem& cp, const std::vector<RunSpec>& runs,
                               const std::vector<Vector>& x0s, int sim_steps);

/// Componentwise max of C x - d over the logged trajectory (states), and the
/// same for inputs; the largest entry is the worst constraint violation.
double worst_violation(const CondensedProblem& cp, const TrajectoryLog& log);

}  // namespace rbmpc
