#include "rbmpc/linesearch.hpp"

#include <cmath>
#include <limits>

namespace rbmpc {

namespace {

// Restriction of the condensed cost to the ray U + s p. The quadratic part
// collapses to three scalars and the barrier part needs only the slack
// z(s) = z0 - s * Gp, so each probe costs O(q) instead of O(q * Nm).
class RayEvaluator {
 public:
  RayEvaluator(const CondensedProblem& cp, const Vector& U, const Vector& x, const Vector& p)
      : cp_(cp), z0_(cp.slack(U, x)), Gp_(cp.G * p) {
    const Vector HU = cp.H * U;
    const Vector Fx = cp.F.transpose() * x;
    value0_ = 0.5 * U.dot(HU) + x.dot(cp.F * U) + 0.5 * x.dot(cp.Y * x);
    linear_ = p.dot(HU) + p.dot(Fx);
    curv_ = p.dot(cp.H * p);
  }

  double value(double s) const {
    const RelaxedLogBarrier bar{cp_.delta};
    double b = 0.0;
    for (int i = 0; i < z0_.size(); ++i)
      b += (1.0 + cp_.wbar(i)) * (bar.value(z0_(i) - s * Gp_(i)) + std::log(cp_.dbar(i)));
    return value0_ + s * linear_ + 0.5 * s * s * curv_ + cp_.epsilon * b;
  }

  double slope(double s) const {
    const RelaxedLogBarrier bar{cp_.delta};
    double b = 0.0;
    for (int i = 0; i < z0_.size(); ++i)
      b -= (1.0 + cp_.wbar(i)) * bar.derivative(z0_(i) - s * Gp_(i)) * Gp_(i);
    return linear_ + s * curv_ + cp_.epsilon * b;
  }

 private:
  const CondensedProblem& cp_;
  Vector z0_, Gp_;
  double value0_ = 0.0, linear_ = 0.0, curv_ = 0.0;
};

StepSelection backtracking(const LineSearchConfig& cfg, const RayEvaluator& ray, double d0) {
  const double phi0 = ray.value(0.0);
  double s = cfg.s_init;
  for (int j = 0; j < cfg.max_ls_iters; ++j) {
    if (ray.value(s) <= phi0 + cfg.c1 * s * d0) return {s, j};
    s *= cfg.rho;
  }
  throw LineSearchStall("backtracking exceeded the iteration cap");
}

// Bracketing strong-Wolfe search. The zoom stage places trial points by
// safeguarded quadratic interpolation (bisection fallback), so accepted
// steps land near the one-dimensional minimizer instead of at the first
// admissible point. Returns nothing when round-off prevents any certified
// progress.
std::optional<StepSelection> strong_wolfe(const LineSearchConfig& cfg, const RayEvaluator& ray,
                                          double d0) {
  const double phi0 = ray.value(0.0);
  int evals = 0;

  auto zoom = [&](double lo, double hi, double phi_lo, double dphi_lo,
                  double phi_hi) -> std::optional<StepSelection> {
    while (evals < cfg.max_ls_iters) {
      const double width = hi - lo;
      if (std::abs(width) <= 1e-14 * std::max(1.0, std::abs(lo))) break;
      // quadratic model through (lo, phi_lo, dphi_lo) and (hi, phi_hi)
      double a = lo + 0.5 * width;
      const double denom = phi_hi - phi_lo - dphi_lo * width;
      if (denom != 0.0) {
        const double interp = lo - 0.5 * dphi_lo * width * width / denom;
        const double guard = 0.1 * std::abs(width);
        if (interp > std::min(lo, hi) + guard && interp < std::max(lo, hi) - guard) a = interp;
      }
      const double phi_a = ray.value(a);
      ++evals;
      if (phi_a > phi0 + cfg.c1 * a * d0 || phi_a >= phi_lo) {
        hi = a;
        phi_hi = phi_a;
      } else {
        const double d_a = ray.slope(a);
        if (std::abs(d_a) <= -cfg.c2 * d0) return StepSelection{a, evals};
        if (d_a * (hi - lo) >= 0.0) {
          hi = lo;
          phi_hi = phi_lo;
        }
        lo = a;
        phi_lo = phi_a;
        dphi_lo = d_a;
      }
    }
    // Interval exhausted by round-off: fall back to the best point with
    // certified sufficient decrease, if any.
    if (lo > 0.0) return StepSelection{lo, evals, false};
    return std::nullopt;
  };

  double a_prev = 0.0;
  double phi_prev = phi0;
  double dphi_prev = d0;
  double a = cfg.s_init;
  for (int i = 1; evals < cfg.max_ls_iters; ++i) {
    const double phi_a = ray.value(a);
    ++evals;
    if (phi_a > phi0 + cfg.c1 * a * d0 || (i > 1 && phi_a >= phi_prev))
      return zoom(a_prev, a, phi_prev, dphi_prev, phi_a);
    const double d_a = ray.slope(a);
    if (std::abs(d_a) <= -cfg.c2 * d0) return StepSelection{a, evals};
    if (d_a >= 0.0) return zoom(a, a_prev, phi_a, d_a, phi_prev);
    a_prev = a;
    phi_prev = phi_a;
    dphi_prev = d_a;
    a = std::min(2.0 * a, 1e10);
  }
  return std::nullopt;
}

Vector newton_direction(const CondensedProblem& cp, const Vector& U, const Vector& x,
                        const Vector& grad) {
  const Matrix hess = cp.hessian(U, x);
  Eigen::LLT<Matrix> llt(hess);
  if (llt.info() == Eigen::Success) return -llt.solve(grad);
  Eigen::LDLT<Matrix> ldlt(hess);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw SingularHessian("Newton system factorization failed");
  return -ldlt.solve(grad);
}

Matrix seed_inverse_hessian(const CondensedProblem& cp) {
  Eigen::LLT<Matrix> llt(cp.H);
  if (llt.info() != Eigen::Success)
    throw SingularHessian("H is not positive definite; cannot seed the BFGS matrix");
  return llt.solve(Matrix::Identity(cp.nm(), cp.nm()));
}

}  // namespace

Vector direction(const LineSearchConfig& cfg, DirectionCarry& carry, const CondensedProblem& cp,
                 const Vector& U, const Vector& x, const Vector& grad) {
  switch (cfg.method) {
    case SearchMethod::Gradient:
      return -grad;
    case SearchMethod::Newton:
      return newton_direction(cp, U, x, grad);
    case SearchMethod::ConjugateGradient: {
      if (carry.prev_direction && carry.prev_gradient) {
        const Vector& g_old = *carry.prev_gradient;
        const double denom = g_old.squaredNorm();
        if (denom > 0.0) {
          const double beta = std::max(0.0, grad.dot(grad - g_old) / denom);  // PR+
          Vector p = -grad + beta * (*carry.prev_direction);
          if (grad.dot(p) < 0.0) return p;
        }
      }
      return -grad;
    }
    case SearchMethod::QuasiNewton: {
      if (!carry.inv_hessian) carry.inv_hessian = seed_inverse_hessian(cp);
      Vector p = -(*carry.inv_hessian) * grad;
      if (grad.dot(p) < 0.0) return p;
      return -grad;
    }
  }
  throw std::logic_error("direction: unknown method");
}

namespace {

std::optional<StepSelection> try_step(const LineSearchConfig& cfg, const CondensedProblem& cp,
                                      const Vector& U, const Vector& x, const Vector& p,
                                      const Vector& grad) {
  const double d0 = grad.dot(p);
  if (!(d0 < 0.0)) throw std::invalid_argument("step_size: p is not a descent direction");
  const RayEvaluator ray(cp, U, x, p);
  const bool wolfe = cfg.method == SearchMethod::ConjugateGradient ||
                     cfg.method == SearchMethod::QuasiNewton;
  std::optional<StepSelection> sel =
      wolfe ? strong_wolfe(cfg, ray, d0) : std::optional<StepSelection>(backtracking(cfg, ray, d0));
  if (!sel) return sel;

  if (cfg.check_conditions) {
    const double slack = 1e-9 * (1.0 + std::abs(ray.value(0.0)));
    if (ray.value(sel->step) > ray.value(0.0) + cfg.c1 * sel->step * d0 + slack)
      throw LineSearchStall("accepted step violates the Armijo condition");
    if (wolfe && sel->wolfe_pair && std::abs(ray.slope(sel->step)) > -cfg.c2 * d0 + slack)
      throw LineSearchStall("accepted step violates the curvature condition");
  }
  return sel;
}

}  // namespace

StepSelection step_size(const LineSearchConfig& cfg, const CondensedProblem& cp, const Vector& U,
                        const Vector& x, const Vector& p, const Vector& grad) {
  const std::optional<StepSelection> sel = try_step(cfg, cp, U, x, p, grad);
  if (!sel) throw LineSearchStall("no step with certifiable decrease exists at this point");
  return *sel;
}

UpdateResult optimizer_update(const LineSearchConfig& cfg, DirectionCarry& carry,
                              const CondensedProblem& cp, const Vector& U, const Vector& x) {
  UpdateResult out;
  const Vector grad = cp.gradient(U, x);
  if (grad.norm() <= cfg.stationary_tol) {
    out.U = U;
    out.stationary = true;
    return out;
  }

  const Vector p = direction(cfg, carry, cp, U, x, grad);
  const double d0 = grad.dot(p);

  // Decrease below the floating-point resolution of the cost cannot be
  // certified by a line search; treat the point as stationary.
  if (-d0 * std::max(1.0, cfg.s_init) <= 64.0 * std::numeric_limits<double>::epsilon() *
                                             (1.0 + cp.cost_scale(U, x))) {
    out.U = U;
    out.stationary = true;
    return out;
  }

  const std::optional<StepSelection> sel = try_step(cfg, cp, U, x, p, grad);
  if (!sel) {  // round-off prevents any certified decrease
    out.U = U;
    out.stationary = true;
    return out;
  }
  out.U = U + sel->step * p;
  out.gamma = -cfg.c1 * sel->step * d0;
  out.step = sel->step;
  out.ls_iters = sel->iterations;

  if (cfg.method == SearchMethod::ConjugateGradient) {
    carry.prev_direction = p;
    carry.prev_gradient = grad;
  } else if (cfg.method == SearchMethod::QuasiNewton) {
    const Vector grad_next = cp.gradient(out.U, x);
    const Vector s_vec = out.U - U;
    const Vector y_vec = grad_next - grad;
    const double sy = s_vec.dot(y_vec);
    if (sy > 1e-12 * s_vec.norm() * y_vec.norm()) {  // curvature safeguard keeps B PD
      Matrix& Binv = *carry.inv_hessian;
      const double rho_bfgs = 1.0 / sy;
      const Vector By = Binv * y_vec;
      Binv -= rho_bfgs * (By * s_vec.transpose() + s_vec * By.transpose());
      Binv += (rho_bfgs * rho_bfgs * y_vec.dot(By) + rho_bfgs) * (s_vec * s_vec.transpose());
      Binv = 0.5 * (Binv + Binv.transpose());
    }
  }
  return out;
}

}  // namespace rbmpc
