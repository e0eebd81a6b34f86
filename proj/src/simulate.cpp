#include "rbmpc/simulate.hpp"

#include <cmath>

namespace rbmpc {

TrajectoryLog simulate_trajectory(const CondensedProblem& cp, const Vector& x0, InitMode init,
                                  const IterationSchedule& schedule, const LineSearchConfig& cfg,
                                  const SimOptions& options) {
  if (options.sim_steps < 1)
    throw std::invalid_argument("simulate_trajectory: sim_steps must be >= 1");

  TrajectoryLog log;
  log.steps.reserve(options.sim_steps);

  ControllerState state = initialize(init, x0, cp);
  Vector x = x0;
  for (int k = 0; k < options.sim_steps; ++k) {
    StepRecord rec;
    rec.x = x;
    rec.cost = cp.cost(state.U, x);
    if (options.certificates) {
      rec.alpha = alpha_hat(cp, state.U, x);
      rec.zx = violation_bounds(cp.barrier_x, cp.epsilon, rec.alpha);
      rec.zu = violation_bounds(cp.barrier_u, cp.epsilon, rec.alpha);
    }

    StepDiagnostics diag;
    rec.u = controller_step(state, x, schedule.at(k), cfg, cp, &diag);
    rec.ls_iters = diag.ls_iters;
    rec.gamma = diag.gamma_first;
    rec.grad_norm = diag.grad_norm_after;
    if (diag.inner_updates > 0) {
      log.max_backtrack = std::max(log.max_backtrack, diag.max_backtrack);
      log.min_step = std::min(log.min_step, diag.min_step);
    }

    if (log.settled_step < 0 && x.norm() <= 1e-3) log.settled_step = k;
    x = cp.setup.plant.A * x + cp.setup.plant.B * rec.u;
    log.steps.push_back(std::move(rec));

    if (options.stop_cost >= 0.0 && log.steps.back().cost <= options.stop_cost) break;
  }
  return log;
}

CompareSummary compare_methods(const CondensedProblem& cp, const std::vector<RunSpec>& runs,
                               const std::vector<Vector>& x0s, int sim_steps) {
  CompareSummary summary;
  SimOptions options;
  options.sim_steps = sim_steps;
  for (const RunSpec& run : runs) {
    summary.labels.push_back(run.label);
    std::vector<double> mean(static_cast<size_t>(sim_steps), 0.0);
    for (const Vector& x0 : x0s) {
      TrajectoryLog log = simulate_trajectory(cp, x0, run.init, run.schedule, run.ls, options);
      for (int k = 0; k < sim_steps; ++k) mean[static_cast<size_t>(k)] += log.steps[k].cost;
    }
    for (double& v : mean) v /= static_cast<double>(x0s.size());
    summary.mean_cost.push_back(std::move(mean));
  }
  return summary;
}

double worst_violation(const CondensedProblem& cp, const TrajectoryLog& log) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const StepRecord& rec : log.steps) {
    const Vector vx = cp.setup.state_set.C * rec.x - cp.setup.state_set.d;
    const Vector vu = cp.setup.input_set.C * rec.u - cp.setup.input_set.d;
    worst = std::max({worst, vx.maxCoeff(), vu.maxCoeff()});
  }
  return worst;
}

}  // namespace rbmpc
