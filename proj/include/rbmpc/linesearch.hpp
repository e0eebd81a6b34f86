#pragma once

#include "rbmpc/condensed.hpp"

#include <optional>
#include <stdexcept>

namespace rbmpc {

enum class SearchMethod { Gradient, ConjugateGradient, Newton, QuasiNewton };

struct LineSearchConfig {
  SearchMethod method = SearchMethod::Newton;
  double c1 = 1e-3;          // Armijo constant, 0 < c1 < c2 < 1
  double c2 = 0.9;           // curvature constant
  double rho = 0.5;          // backtracking ratio in (0,1)
  double s_init = 1.0;       // initial trial step
  int max_ls_iters = 100;
  double stationary_tol = 1e-12;  // gradient norm treated as converged
  bool check_conditions = false;  // re-verify accepted steps (test builds)
};

struct SingularHessian : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LineSearchStall : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Optimizer memory carried across updates. Direction memory (previous
/// direction/gradient, used by the conjugate gradient rule) is wiped by the
/// shift at every sampling instant; the BFGS inverse-Hessian approximation
/// is handed over between instants.
struct DirectionCarry {
  std::optional<Vector> prev_direction;
  std::optional<Vector> prev_gradient;
  std::optional<Matrix> inv_hessian;

  void invalidate_direction_memory() {
    prev_direction.reset();
    prev_gradient.reset();
  }
};

/// Search direction for the configured method. Always a descent direction:
/// falls back to the negative gradient when a carried CG/QN direction fails
/// the descent test. Lazily seeds the BFGS matrix with H^-1.
Vector direction(const LineSearchConfig& cfg, DirectionCarry& carry, const CondensedProblem& cp,
                 const Vector& U, const Vector& x, const Vector& grad);

struct StepSelection {
  double step = 0.0;
  int iterations = 0;       // j for backtracking, probe count for Wolfe search
  bool wolfe_pair = true;   // false when round-off exhausted the zoom interval
                            // and only sufficient decrease is certified
};

/// Step selection along the descent direction p. Gradient and Newton use
/// Armijo backtracking s = s_init * rho^j; conjugate gradient and
/// quasi-Newton use a bracketing search satisfying the strong Wolfe pair.
StepSelection step_size(const LineSearchConfig& cfg, const CondensedProblem& cp, const Vector& U,
                        const Vector& x, const Vector& p, const Vector& grad);

struct UpdateResult {
  Vector U;            // updated optimizer state
  double gamma = 0.0;  // certified decrease -c1 * s * g'p (0 iff stationary)
  double step = 0.0;
  int ls_iters = 0;
  bool stationary = false;
};

/// One optimizer update U+ = U + s p with guaranteed cost decrease
/// J(U+, x) - J(U, x) <= -gamma. Updates the carry (CG memory, BFGS matrix).
UpdateResult optimizer_update(const LineSearchConfig& cfg, DirectionCarry& carry,
                              const CondensedProblem& cp, const Vector& U, const Vector& x);

}  // namespace rbmpc
