#include "rbmpc/certify.hpp"

#include <cmath>
#include <stdexcept>

namespace rbmpc {

namespace {

// Minimizes the smooth strongly convex function given by eval (value,
// gradient, Hessian callbacks) with damped Newton steps.
template <typename Value, typename Grad, typename Hess>
Vector newton_minimize(Vector xi, Value value, Grad grad, Hess hess, double grad_tol,
                       int max_iters = 100) {
  for (int it = 0; it < max_iters; ++it) {
    const Vector g = grad(xi);
    if (g.norm() <= grad_tol) return xi;
    Eigen::LLT<Matrix> llt(hess(xi));
    Vector p;
    if (llt.info() == Eigen::Success) {
      p = -llt.solve(g);
    } else {
      p = -g;  // barely-PD fallback
    }
    double d0 = g.dot(p);
    if (d0 >= 0.0) {
      p = -g;
      d0 = g.dot(p);
    }
    const double f0 = value(xi);
    const double slop = 1e-14 * (1.0 + std::abs(f0));
    double s = 1.0;
    for (int j = 0; j < 60; ++j) {
      if (value(xi + s * p) <= f0 + 1e-4 * s * d0 + slop) break;
      s *= 0.5;
    }
    xi += s * p;
  }
  return xi;
}

}  // namespace

double alpha_hat(const CondensedProblem& cp, const Vector& U, const Vector& x) {
  const double a = cp.cost(U, x) - x.dot(cp.terminal.P_uc * x);
  return std::max(0.0, a);  // clamp floating-point dips below zero
}

double max_violation(const RecenteredBarrier& barrier, double epsilon, double alpha, int row) {
  if (row < 0 || row >= barrier.set().rows())
    throw std::invalid_argument("max_violation: row out of range");
  if (!(epsilon > 0.0)) throw std::invalid_argument("max_violation: epsilon must be positive");
  if (alpha < 0.0) throw std::invalid_argument("max_violation: alpha must be nonnegative");

  const Vector c = barrier.set().C.row(row).transpose();
  const double d = barrier.set().d(row);
  const double tau = alpha / epsilon;  // sublevel value of the barrier
  if (tau <= 0.0) return -d;

  const int r = barrier.dim();
  const double grad_tol = 1e-11 * (1.0 + c.norm());

  // Inner problem for a fixed multiplier lam: maximize c'xi - lam*B(xi),
  // i.e. minimize lam*B(xi) - c'xi. The maximizer moves inward as lam grows,
  // so B(xi*(lam)) is monotone and the level B = tau can be bisected.
  Vector xi = Vector::Zero(r);
  auto inner = [&](double lam) {
    xi = newton_minimize(
        xi, [&](const Vector& v) { return lam * barrier.value(v) - c.dot(v); },
        [&](const Vector& v) { return (lam * barrier.gradient(v) - c).eval(); },
        [&](const Vector& v) { return (lam * barrier.eval(v).hessian).eval(); },
        grad_tol * std::max(1.0, lam));
    return barrier.value(xi);
  };

  double lam_hi = 1.0;
  double level = inner(lam_hi);
  int guard = 0;
  while (level > tau && guard++ < 200) {
    lam_hi *= 4.0;
    level = inner(lam_hi);
  }
  double z_inner = c.dot(xi) - d;  // feasible side, lower bound on the optimum

  double lam_lo = lam_hi;
  Vector xi_hi = xi;
  guard = 0;
  while (inner(lam_lo) <= tau && guard++ < 200) {
    lam_lo /= 4.0;
    if (lam_lo < 1e-300) break;
  }
  double z_outer = c.dot(xi) - d;  // infeasible side, upper bound
  xi = xi_hi;

  for (int it = 0; it < 200 && z_outer - z_inner > 1e-9 * (1.0 + std::abs(z_inner)); ++it) {
    const double lam = 0.5 * (lam_lo + lam_hi);
    if (inner(lam) <= tau) {
      lam_hi = lam;
      z_inner = c.dot(xi) - d;
    } else {
      lam_lo = lam;
      z_outer = c.dot(xi) - d;
    }
  }
  return 0.5 * (z_inner + z_outer);
}

Vector violation_bounds(const RecenteredBarrier& barrier, double epsilon, double alpha) {
  Vector z(barrier.set().rows());
  for (int i = 0; i < z.size(); ++i) z(i) = max_violation(barrier, epsilon, alpha, i);
  return z;
}

double facet_min_barrier(const RecenteredBarrier& barrier, int row) {
  if (row < 0 || row >= barrier.set().rows())
    throw std::invalid_argument("facet_min_barrier: row out of range");
  const Vector c = barrier.set().C.row(row).transpose();
  const double d = barrier.set().d(row);
  const int r = barrier.dim();

  const Vector xi0 = c * (d / c.squaredNorm());  // point on the hyperplane
  if (r == 1) return barrier.value(xi0);

  // Null-space parameterization xi = xi0 + Z t, reduced Newton over t.
  Eigen::HouseholderQR<Matrix> qr(c);
  const Matrix Z = qr.householderQ() * Matrix::Identity(r, r).rightCols(r - 1);

  Vector t = newton_minimize(
      Vector::Zero(r - 1),
      [&](const Vector& v) { return barrier.value(xi0 + Z * v); },
      [&](const Vector& v) { return (Z.transpose() * barrier.gradient(xi0 + Z * v)).eval(); },
      [&](const Vector& v) {
        return (Z.transpose() * barrier.eval(xi0 + Z * v).hessian * Z).eval();
      },
      1e-10);
  return barrier.value(xi0 + Z * t);
}

BoundaryLevels beta_bar(const RecenteredBarrier& barrier_x, const RecenteredBarrier& barrier_u) {
  BoundaryLevels out;
  out.beta_x = std::numeric_limits<double>::infinity();
  for (int i = 0; i < barrier_x.set().rows(); ++i)
    out.beta_x = std::min(out.beta_x, facet_min_barrier(barrier_x, i));
  out.beta_u = std::numeric_limits<double>::infinity();
  for (int i = 0; i < barrier_u.set().rows(); ++i)
    out.beta_u = std::min(out.beta_u, facet_min_barrier(barrier_u, i));
  out.beta = std::min(out.beta_x, out.beta_u);
  return out;
}

bool z_n_membership(const CondensedProblem& cp, double beta, const Vector& U0, const Vector& x0) {
  return alpha_hat(cp, U0, x0) <= cp.epsilon * beta;
}

}  // namespace rbmpc
