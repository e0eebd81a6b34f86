#include "rbmpc/scheme.hpp"

#include <cmath>
#include <stdexcept>

namespace rbmpc {

IterationSchedule IterationSchedule::fixed(int count) {
  if (count < 0) throw std::invalid_argument("IterationSchedule: count must be >= 0");
  IterationSchedule s;
  s.counts_ = {count};
  return s;
}

IterationSchedule IterationSchedule::per_step(std::vector<int> counts) {
  if (counts.empty()) throw std::invalid_argument("IterationSchedule: empty list");
  for (int c : counts)
    if (c < 0) throw std::invalid_argument("IterationSchedule: entries must be >= 0");
  IterationSchedule s;
  s.counts_ = std::move(counts);
  return s;
}

int IterationSchedule::at(int k) const { return counts_[static_cast<size_t>(k) % counts_.size()]; }

Vector shift(const CondensedProblem& cp, const Vector& U, const Vector& x) {
  const int m = cp.m();
  const int N = cp.N();
  if (U.size() != cp.nm() || x.size() != cp.n())
    throw std::invalid_argument("shift: dimension mismatch");

  // x_N via the plant recursion; cheaper than the stacked form for small n.
  Vector xk = x;
  for (int k = 0; k < N; ++k)
    xk = cp.setup.plant.A * xk + cp.setup.plant.B * U.segment(k * m, m);

  Vector shifted(U.size());
  shifted.head((N - 1) * m) = U.tail((N - 1) * m);
  shifted.tail(m) = cp.terminal.K * xk;
  return shifted;
}

Vector controller_step(ControllerState& state, const Vector& x, int i_T,
                       const LineSearchConfig& cfg, const CondensedProblem& cp,
                       StepDiagnostics* diag) {
  if (i_T < 0) throw std::invalid_argument("controller_step: i_T must be >= 0");
  const Vector u = cp.first_input(state.U);
  const Vector x_next = cp.setup.plant.A * x + cp.setup.plant.B * u;

  Vector Ubar = shift(cp, state.U, x);
  state.carry.invalidate_direction_memory();  // the landscape moved to x_next

  StepDiagnostics local;
  for (int i = 0; i < i_T; ++i) {
    UpdateResult res = optimizer_update(cfg, state.carry, cp, Ubar, x_next);
    if (res.stationary) break;
    if (i == 0) local.gamma_first = res.gamma;
    ++local.inner_updates;
    local.ls_iters += res.ls_iters;
    local.max_backtrack = std::max(local.max_backtrack, res.ls_iters);
    local.min_step = std::min(local.min_step, res.step);
    Ubar = std::move(res.U);
  }

  state.U = std::move(Ubar);
  state.k += 1;
  if (diag) {
    local.grad_norm_after = cp.gradient(state.U, x_next).norm();
    *diag = local;
  }
  return u;
}

Matrix gain_rollout_matrix(const CondensedProblem& cp) {
  const int n = cp.n();
  const int m = cp.m();
  const int N = cp.N();
  const Matrix A_K = cp.setup.plant.A + cp.setup.plant.B * cp.terminal.K;
  Matrix Kbar(N * m, n);
  Matrix phi = Matrix::Identity(n, n);  // (A+BK)^k
  for (int k = 0; k < N; ++k) {
    Kbar.middleRows(k * m, m) = cp.terminal.K * phi;
    phi = A_K * phi;
  }
  return Kbar;
}

Vector solve_to_optimum(const CondensedProblem& cp, const Vector& x, double grad_tol) {
  // Damped Newton. Once cost differences sink below the evaluation noise the
  // Armijo test becomes meaningless; from there the full step is taken as
  // long as it keeps shrinking the gradient residual (local quadratic
  // convergence needs no damping).
  Vector U = Vector::Zero(cp.nm());
  Vector g = cp.gradient(U, x);
  constexpr int kMaxIters = 300;
  for (int it = 0; it < kMaxIters; ++it) {
    if (g.norm() <= grad_tol) return U;
    const Matrix hess = cp.hessian(U, x);
    Eigen::LLT<Matrix> llt(hess);
    if (llt.info() != Eigen::Success) throw SingularHessian("solve_to_optimum: LLT failed");
    const Vector p = -llt.solve(g);
    const double d0 = g.dot(p);
    const double fp_floor =
        64.0 * std::numeric_limits<double>::epsilon() * (1.0 + cp.cost_scale(U, x));
    if (-d0 > fp_floor) {
      const double cost0 = cp.cost(U, x);
      double s = 1.0;
      bool accepted = false;
      for (int j = 0; j < 40; ++j) {
        if (cp.cost(U + s * p, x) <= cost0 + 1e-4 * s * d0) {
          accepted = true;
          break;
        }
        s *= 0.5;
      }
      // A step far below the Newton backtracking bound means the comparison
      // was decided by round-off, not by an actual decrease.
      if (accepted && s > 1e-3 * cp.sigma / cp.L) {
        U += s * p;
        g = cp.gradient(U, x);
        continue;
      }
    }
    const Vector U_try = U + p;
    const Vector g_try = cp.gradient(U_try, x);
    if (g_try.norm() < g.norm()) {
      U = U_try;
      g = g_try;
      continue;
    }
    break;  // floating-point floor reached
  }
  if (g.norm() <= grad_tol) return U;
  throw LineSearchStall("solve_to_optimum: Newton iterations did not reach the tolerance");
}

ControllerState initialize(InitMode mode, const Vector& x0, const CondensedProblem& cp) {
  if (x0.size() != cp.n()) throw std::invalid_argument("initialize: x0 has wrong length");
  ControllerState state;
  switch (mode) {
    case InitMode::Zero:
      state.U = Vector::Zero(cp.nm());
      break;
    case InitMode::GainRollout:
      state.U = gain_rollout_matrix(cp) * x0;
      break;
    case InitMode::Optimal:
      state.U = solve_to_optimum(cp, x0);
      break;
  }
  return state;
}

}  // namespace rbmpc
