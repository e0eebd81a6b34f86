#include "rbmpc/barrier.hpp"

#include <cmath>
#include <sstream>

namespace rbmpc {

double RelaxedLogBarrier::value(double z) const {
  if (z > delta) return -std::log(z);
  const double t = (z - 2.0 * delta) / delta;
  return 0.5 * (t * t - 1.0) - std::log(delta);
}

double RelaxedLogBarrier::derivative(double z) const {
  if (z > delta) return -1.0 / z;
  return (z - 2.0 * delta) / (delta * delta);
}

double RelaxedLogBarrier::second_derivative(double z) const {
  if (z > delta) return 1.0 / (z * z);
  return 1.0 / (delta * delta);
}

namespace {

// Dense two-phase tableau simplex with Bland's rule for
//   min c'v  s.t.  A v = b, v >= 0.
// Problems here are tiny (a handful of facets), so no effort is spent on
// factorization reuse.
struct LpResult {
  bool feasible = false;
  Vector v;
  double infeasibility = 0.0;
};

LpResult solve_equality_lp(Matrix A, Vector b, const Vector& c) {
  const int rows = static_cast<int>(A.rows());
  const int nvar = static_cast<int>(A.cols());
  constexpr double kTol = 1e-11;

  for (int i = 0; i < rows; ++i) {
    if (b(i) < 0.0) {
      A.row(i) = -A.row(i);
      b(i) = -b(i);
    }
  }

  const int ncol = nvar + rows;  // original + artificial
  Matrix T(rows, ncol + 1);
  T.leftCols(nvar) = A;
  T.block(0, nvar, rows, rows) = Matrix::Identity(rows, rows);
  T.col(ncol) = b;
  std::vector<int> basis(rows);
  for (int i = 0; i < rows; ++i) basis[i] = nvar + i;

  auto pivot = [&](int prow, int pcol, Vector& obj, double& obj_val) {
    const double piv = T(prow, pcol);
    T.row(prow) /= piv;
    for (int i = 0; i < rows; ++i) {
      if (i == prow) continue;
      const double f = T(i, pcol);
      if (f != 0.0) T.row(i) -= f * T.row(prow);
    }
    const double f = obj(pcol);
    if (f != 0.0) {
      obj -= f * T.row(prow).head(ncol).transpose();
      obj_val -= f * T(prow, ncol);
    }
    basis[prow] = pcol;
  };

  auto iterate = [&](Vector& obj, double& obj_val, int allowed_cols) {
    for (int guard = 0; guard < 10000; ++guard) {
      int enter = -1;
      for (int j = 0; j < allowed_cols; ++j) {  // Bland: smallest index
        if (obj(j) < -kTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return;
      int leave = -1;
      double best_ratio = 0.0;
      for (int i = 0; i < rows; ++i) {
        if (T(i, enter) > kTol) {
          const double ratio = T(i, ncol) / T(i, enter);
          if (leave < 0 || ratio < best_ratio - kTol ||
              (ratio < best_ratio + kTol && basis[i] < basis[leave])) {
            leave = i;
            best_ratio = ratio;
          }
        }
      }
      if (leave < 0) throw std::runtime_error("simplex: unbounded subproblem");
      pivot(leave, enter, obj, obj_val);
    }
    throw std::runtime_error("simplex: pivot limit exceeded");
  };

  // Phase 1: minimize the artificial sum.
  Vector obj = Vector::Zero(ncol);
  obj.tail(rows).setOnes();
  double obj_val = 0.0;
  for (int i = 0; i < rows; ++i) {
    obj -= T.row(i).head(ncol).transpose();
    obj_val -= T(i, ncol);
  }
  iterate(obj, obj_val, ncol);

  LpResult result;
  result.infeasibility = -obj_val;  // phase-1 optimum
  if (result.infeasibility > 1e-9) return result;

  // Pivot leftover artificials out of the basis where possible.
  for (int i = 0; i < rows; ++i) {
    if (basis[i] >= nvar) {
      for (int j = 0; j < nvar; ++j) {
        if (std::abs(T(i, j)) > kTol) {
          pivot(i, j, obj, obj_val);
          break;
        }
      }
    }
  }

  // Phase 2 over the original columns only.
  obj.setZero();
  obj.head(nvar) = c;
  obj_val = 0.0;
  for (int i = 0; i < rows; ++i) {
    if (basis[i] < nvar && c(basis[i]) != 0.0) {
      obj -= c(basis[i]) * T.row(i).head(ncol).transpose();
      obj_val -= c(basis[i]) * T(i, ncol);
    }
  }
  iterate(obj, obj_val, nvar);

  result.feasible = true;
  result.v = Vector::Zero(nvar);
  for (int i = 0; i < rows; ++i) {
    if (basis[i] < nvar) result.v(basis[i]) = T(i, ncol);
  }
  return result;
}

}  // namespace

Vector compute_recentering_weights(const Polytope& set) {
  const int q = set.rows();
  const int r = set.dim();
  for (int i = 0; i < q; ++i) {
    if (!(set.d(i) > 0.0))
      throw std::invalid_argument("compute_recentering_weights: d must be strictly positive");
  }

  // Gradient condition at the origin: C' diag(1/d) (1 + w) = 0.
  Matrix A(r, q);
  for (int i = 0; i < q; ++i) A.col(i) = set.C.row(i).transpose() / set.d(i);
  const Vector b = -A * Vector::Ones(q);

  LpResult lp = solve_equality_lp(A, b, Vector::Ones(q));
  if (!lp.feasible) {
    std::ostringstream os;
    os << "no nonnegative recentering weights exist for this polytope "
       << "(minimal equality residual " << lp.infeasibility << ")";
    throw InfeasibleRecentering(os.str());
  }
  Vector w = lp.v.cwiseMax(0.0);  // clip simplex round-off
  const double residual = (A * (Vector::Ones(q) + w)).cwiseAbs().maxCoeff();
  if (residual > 1e-10) {
    std::ostringstream os;
    os << "recentering weight solve left residual " << residual;
    throw InfeasibleRecentering(os.str());
  }
  return w;
}

RecenteredBarrier::RecenteredBarrier(Polytope set, double delta, Vector weights)
    : set_(std::move(set)), scalar_{delta}, weights_(std::move(weights)) {
  if (!(delta > 0.0)) throw std::invalid_argument("RecenteredBarrier: delta must be positive");
  if (weights_.size() != set_.rows())
    throw std::invalid_argument("RecenteredBarrier: weight vector must have one entry per facet");
  if (weights_.minCoeff() < 0.0)
    throw std::invalid_argument("RecenteredBarrier: weights must be nonnegative");
  if (set_.d.minCoeff() < delta)
    throw std::invalid_argument("RecenteredBarrier: delta must not exceed min(d)");
  Matrix scaled(set_.dim(), set_.rows());
  for (int i = 0; i < set_.rows(); ++i)
    scaled.col(i) = set_.C.row(i).transpose() * (1.0 + weights_(i)) / set_.d(i);
  const double grad0 = (scaled * Vector::Ones(set_.rows())).cwiseAbs().maxCoeff();
  if (grad0 > 1e-8)
    throw std::invalid_argument("RecenteredBarrier: weights do not cancel the gradient at 0");
  log_d_ = set_.d.array().log();
}

RecenteredBarrier RecenteredBarrier::make(Polytope set, double delta) {
  Vector w = compute_recentering_weights(set);
  return RecenteredBarrier(std::move(set), delta, std::move(w));
}

double RecenteredBarrier::value(const Vector& xi) const {
  const Vector z = set_.d - set_.C * xi;
  double v = 0.0;
  for (int i = 0; i < set_.rows(); ++i)
    v += (1.0 + weights_(i)) * (scalar_.value(z(i)) + log_d_(i));
  return v;
}

Vector RecenteredBarrier::gradient(const Vector& xi) const {
  const Vector z = set_.d - set_.C * xi;
  Vector g = Vector::Zero(set_.dim());
  for (int i = 0; i < set_.rows(); ++i)
    g -= (1.0 + weights_(i)) * scalar_.derivative(z(i)) * set_.C.row(i).transpose();
  return g;
}

PolyBarrierEval RecenteredBarrier::eval(const Vector& xi) const {
  const Vector z = set_.d - set_.C * xi;
  PolyBarrierEval out;
  out.gradient = Vector::Zero(set_.dim());
  Vector D(set_.rows());
  for (int i = 0; i < set_.rows(); ++i) {
    const double wi = 1.0 + weights_(i);
    out.value += wi * (scalar_.value(z(i)) + log_d_(i));
    out.gradient -= wi * scalar_.derivative(z(i)) * set_.C.row(i).transpose();
    D(i) = wi * scalar_.second_derivative(z(i));
  }
  out.hessian = set_.C.transpose() * D.asDiagonal() * set_.C;
  return out;
}

Matrix RecenteredBarrier::quadratic_upper_bound() const {
  const Vector scale = (Vector::Ones(set_.rows()) + weights_) / (2.0 * scalar_.delta * scalar_.delta);
  return set_.C.transpose() * scale.asDiagonal() * set_.C;
}

}  // namespace rbmpc
