// Test-only reference implementations, kept independent of the library
// evaluation paths they are used to check.
#pragma once

#include "rbmpc/condensed.hpp"
#include "rbmpc/rng.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

using rbmpc::Matrix;
using rbmpc::Vector;

/// The double-integrator benchmark problem (sampling time 0.1).
inline rbmpc::ProblemSetup integrator_setup(double delta = 1e-3, double epsilon = 1e-3,
                                            int N = 30) {
  rbmpc::ProblemSetup setup;
  setup.plant.A = Matrix{{1.0, 0.1}, {0.0, 1.0}};
  setup.plant.B = Matrix{{0.01}, {0.1}};
  setup.Q = Matrix{{1.0, 0.0}, {0.0, 0.1}};
  setup.R = Matrix{{0.1}};
  setup.N = N;
  setup.epsilon = epsilon;
  setup.delta = delta;
  setup.state_set.C = Matrix{{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
  setup.state_set.d = Vector{{3.0, 2.0, 1.0, 1.0}};
  setup.input_set.C = Matrix{{1.0}, {-1.0}};
  setup.input_set.d = Vector{{1.0, 1.0}};
  return setup;
}

/// Stage-sum evaluation of the cost: explicit rollout plus per-stage
/// quadratic and barrier terms plus the terminal cost. Never touches the
/// condensed matrices.
inline double stage_sum_cost(const rbmpc::ProblemSetup& setup, const rbmpc::RecenteredBarrier& bx,
                             const rbmpc::RecenteredBarrier& bu, const Matrix& P, const Vector& U,
                             const Vector& x) {
  const int m = setup.plant.m();
  double total = 0.0;
  Vector xk = x;
  for (int k = 0; k < setup.N; ++k) {
    const Vector uk = U.segment(k * m, m);
    total += xk.dot(setup.Q * xk) + uk.dot(setup.R * uk);
    total += setup.epsilon * (bx.value(xk) + bu.value(uk));
    xk = setup.plant.A * xk + setup.plant.B * uk;
  }
  return total + xk.dot(P * xk);
}

/// Central finite-difference gradient of f at v.
inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& v,
                          double h = 1e-6) {
  Vector g(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    Vector vp = v, vm = v;
    const double step = h * std::max(1.0, std::abs(v(i)));
    vp(i) += step;
    vm(i) -= step;
    g(i) = (f(vp) - f(vm)) / (2.0 * step);
  }
  return g;
}

/// Central finite-difference Jacobian of a vector map (used for Hessians).
inline Matrix fd_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& v,
                          double h = 1e-6) {
  const Vector f0 = f(v);
  Matrix J(f0.size(), v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    Vector vp = v, vm = v;
    const double step = h * std::max(1.0, std::abs(v(i)));
    vp(i) += step;
    vm(i) -= step;
    J.col(i) = (f(vp) - f(vm)) / (2.0 * step);
  }
  return J;
}

/// Structure-preserving doubling iteration for the DARE; an algebraically
/// different route than the fixed-point recursion in the library.
inline Matrix dare_doubling(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R) {
  const Eigen::Index n = A.rows();
  Matrix Ak = A;
  Matrix Gk = B * R.ldlt().solve(B.transpose());
  Matrix Hk = Q;
  for (int it = 0; it < 200; ++it) {
    const Matrix I = Matrix::Identity(n, n);
    const Matrix W = I + Gk * Hk;
    const Eigen::PartialPivLU<Matrix> lu(W);
    const Matrix WA = lu.solve(Ak);
    const Matrix Hn = Hk + Ak.transpose() * Hk * WA;
    const Matrix Gn = Gk + Ak * lu.solve(Gk * Ak.transpose());
    const Matrix An = Ak * WA;
    const double change = (Hn - Hk).cwiseAbs().maxCoeff();
    Ak = An;
    Gk = Gn;
    Hk = 0.5 * (Hn + Hn.transpose());
    if (change <= 1e-14 * std::max(1.0, Hk.cwiseAbs().maxCoeff())) break;
  }
  return Hk;
}

/// Random stabilizable problem with box constraint sets. Resamples until the
/// Riccati solves go through.
inline rbmpc::ProblemSetup random_setup(rbmpc::Rng& rng, int n_max = 4, int m_max = 2,
                                        int N_max = 8) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    rbmpc::ProblemSetup setup;
    const int n = 1 + static_cast<int>(rng.uniform01() * n_max) % n_max;
    const int m = 1 + static_cast<int>(rng.uniform01() * m_max) % m_max;
    setup.N = 1 + static_cast<int>(rng.uniform01() * N_max) % N_max;

    Matrix A(n, n), B(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = rng.uniform(-1.0, 1.0);
    A *= 1.1 / std::max(1.0, A.cwiseAbs().rowwise().sum().maxCoeff());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) B(i, j) = rng.uniform(-1.0, 1.0);
    setup.plant.A = A;
    setup.plant.B = B;

    Matrix Mq(n, n), Mr(m, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) Mq(i, j) = rng.uniform(-1.0, 1.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) Mr(i, j) = rng.uniform(-1.0, 1.0);
    setup.Q = Mq.transpose() * Mq;
    setup.R = Mr.transpose() * Mr + 0.1 * Matrix::Identity(m, m);

    auto box = [&](int r) {
      rbmpc::Polytope set;
      set.C.resize(2 * r, r);
      set.C << Matrix::Identity(r, r), -Matrix::Identity(r, r);
      set.d.resize(2 * r);
      for (int i = 0; i < 2 * r; ++i) set.d(i) = rng.uniform(0.5, 3.0);
      return set;
    };
    setup.state_set = box(n);
    setup.input_set = box(m);
    const double dmin = std::min(setup.state_set.d.minCoeff(), setup.input_set.d.minCoeff());
    setup.epsilon = rng.uniform(1e-4, 1e-2);
    setup.delta = rng.uniform(0.05, 0.5) * dmin;

    try {
      (void)rbmpc::assemble(setup);
      return setup;
    } catch (const rbmpc::NoStabilizingSolution&) {
      continue;
    }
  }
  throw std::runtime_error("random_setup: failed to produce a stabilizable problem");
}

/// Dense-grid solver for the facet violation problem
///   max { C_i xi - d_i : eps * B(xi) <= alpha },
/// scanning a box with the given resolution. Returns one value per facet;
/// facets whose sublevel set misses every grid point fall back to -d_i.
inline Vector grid_violation_bounds(const rbmpc::RecenteredBarrier& barrier, double epsilon,
                                    double alpha, const Vector& lo, const Vector& hi, double step) {
  const int q = barrier.set().rows();
  Vector best = -barrier.set().d;
  const int r = barrier.dim();
  if (r == 1) {
    const long count = static_cast<long>((hi(0) - lo(0)) / step) + 1;
    for (long i = 0; i <= count; ++i) {
      Vector xi(1);
      xi(0) = lo(0) + static_cast<double>(i) * step;
      if (epsilon * barrier.value(xi) <= alpha + 1e-15) {
        for (int row = 0; row < q; ++row)
          best(row) = std::max(best(row),
                               barrier.set().C.row(row).dot(xi) - barrier.set().d(row));
      }
    }
    return best;
  }
  if (r != 2) throw std::runtime_error("grid_violation_bounds: only 1-D and 2-D supported");
  const long count0 = static_cast<long>((hi(0) - lo(0)) / step) + 1;
  const long count1 = static_cast<long>((hi(1) - lo(1)) / step) + 1;
  for (long i = 0; i <= count0; ++i) {
    Vector xi(2);
    xi(0) = lo(0) + static_cast<double>(i) * step;
    for (long j = 0; j <= count1; ++j) {
      xi(1) = lo(1) + static_cast<double>(j) * step;
      if (epsilon * barrier.value(xi) <= alpha + 1e-15) {
        for (int row = 0; row < q; ++row)
          best(row) = std::max(best(row),
                               barrier.set().C.row(row).dot(xi) - barrier.set().d(row));
      }
    }
  }
  return best;
}

/// grid_violation_bounds for many alpha levels in one sweep over the grid
/// (the barrier value at each point is computed once).
inline std::vector<Vector> grid_violation_bounds_multi(const rbmpc::RecenteredBarrier& barrier,
                                                       double epsilon,
                                                       const std::vector<double>& alphas,
                                                       const Vector& lo, const Vector& hi,
                                                       double step) {
  if (barrier.dim() != 2)
    throw std::runtime_error("grid_violation_bounds_multi: 2-D sets only");
  const int q = barrier.set().rows();
  std::vector<Vector> best(alphas.size(), -barrier.set().d);
  const long count0 = static_cast<long>((hi(0) - lo(0)) / step) + 1;
  const long count1 = static_cast<long>((hi(1) - lo(1)) / step) + 1;
  Vector xi(2);
  Vector cxi(q);
  for (long i = 0; i <= count0; ++i) {
    xi(0) = lo(0) + static_cast<double>(i) * step;
    for (long j = 0; j <= count1; ++j) {
      xi(1) = lo(1) + static_cast<double>(j) * step;
      const double value = epsilon * barrier.value(xi);
      cxi = barrier.set().C * xi - barrier.set().d;
      for (size_t a = 0; a < alphas.size(); ++a) {
        if (value <= alphas[a] + 1e-15) {
          for (int row = 0; row < q; ++row) best[a](row) = std::max(best[a](row), cxi(row));
        }
      }
    }
  }
  return best;
}

}  // namespace oracles
