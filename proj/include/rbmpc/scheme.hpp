#pragma once

#include "rbmpc/linesearch.hpp"

#include <limits>
#include <vector>

namespace rbmpc {

/// Number of optimizer updates per sampling instant: a fixed count or an
/// explicit per-step list (cycled once exhausted). Zero means shift-only.
class IterationSchedule {
 public:
  static IterationSchedule fixed(int count);
  static IterationSchedule per_step(std::vector<int> counts);

  int at(int k) const;

 private:
  std::vector<int> counts_;
};

/// Combined optimizer state: the stacked input iterate, the line-search
/// carry and the sampling index. One instance per control loop.
struct ControllerState {
  Vector U;
  DirectionCarry carry;
  int k = 0;
};

/// Warm-start shift: drop u_0, append the terminal feedback K x_N(U, x).
Vector shift(const CondensedProblem& cp, const Vector& U, const Vector& x);

struct StepDiagnostics {
  int inner_updates = 0;  // optimizer updates actually performed
  int ls_iters = 0;       // total line-search probes across inner updates
  int max_backtrack = 0;
  double min_step = std::numeric_limits<double>::infinity();
  double gamma_first = 0.0;     // certified decrease of the first update
  double grad_norm_after = 0.0; // |grad J(U(k+1), x+)|
};

/// One sampling instant: returns the applied input u(k) = Pi_0 U(k) and
/// advances the optimizer state with the shift followed by i_T optimizer
/// updates, all evaluated at the frozen one-step-ahead prediction
/// x+ = A x + B u(k). Remaining updates are skipped once the gradient norm
/// falls below the stationarity tolerance.
Vector controller_step(ControllerState& state, const Vector& x, int i_T,
                       const LineSearchConfig& cfg, const CondensedProblem& cp,
                       StepDiagnostics* diag = nullptr);

enum class InitMode { Zero, GainRollout, Optimal };

/// Gain-rollout initialization matrix Kbar: U0 = Kbar x0 stacks the inputs
/// of the closed loop x+ = (A + BK) x started at x0.
Matrix gain_rollout_matrix(const CondensedProblem& cp);

/// Minimizer of J(., x) by damped Newton iterations to |grad| <= grad_tol.
Vector solve_to_optimum(const CondensedProblem& cp, const Vector& x, double grad_tol = 1e-9);

/// Initial controller state for the requested warm-start mode.
ControllerState initialize(InitMode mode, const Vector& x0, const CondensedProblem& cp);

}  // namespace rbmpc
