#pragma once

#include "rbmpc/condensed.hpp"

namespace rbmpc {

/// Lyapunov surplus alpha(U, x) = J(U, x) - x' P_uc x, clamped at zero.
/// Along closed-loop trajectories it bounds eps * (barrier values) and
/// decreases monotonically.
double alpha_hat(const CondensedProblem& cp, const Vector& U, const Vector& x);

/// Certified worst-case violation of facet `row`:
///   max { C_i xi - d_i  :  eps * B(xi) <= alpha },
/// solved by bisection on the dual multiplier with an inner Newton solve.
/// alpha = 0 degenerates to the origin and returns -d_i.
double max_violation(const RecenteredBarrier& barrier, double epsilon, double alpha, int row);

/// max_violation for every facet of the polytope.
Vector violation_bounds(const RecenteredBarrier& barrier, double epsilon, double alpha);

/// Smallest barrier value attained on the hyperplane C_i xi = d_i.
double facet_min_barrier(const RecenteredBarrier& barrier, int row);

struct BoundaryLevels {
  double beta_x = 0.0;
  double beta_u = 0.0;
  double beta = 0.0;  // min of the two
};

/// Minimal barrier values on the constraint-set boundaries. The beta-sublevel
/// sets of the two barriers are contained in their polytopes.
BoundaryLevels beta_bar(const RecenteredBarrier& barrier_x, const RecenteredBarrier& barrier_u);

/// True iff alpha(U0, x0) <= eps * beta: trajectories started inside this
/// set satisfy the state and input constraints at every step.
bool z_n_membership(const CondensedProblem& cp, double beta, const Vector& U0, const Vector& x0);

}  // namespace rbmpc
