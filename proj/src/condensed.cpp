#include "rbmpc/condensed.hpp"

#include <cmath>
#include <stdexcept>

namespace rbmpc {

namespace {

void check_dims(const CondensedProblem& cp, const Vector& U, const Vector& x, const char* who) {
  if (U.size() != cp.nm()) throw std::invalid_argument(std::string(who) + ": U has wrong length");
  if (x.size() != cp.n()) throw std::invalid_argument(std::string(who) + ": x has wrong length");
}

}  // namespace

Vector CondensedProblem::slack(const Vector& U, const Vector& x) const {
  check_dims(*this, U, x, "slack");
  return dbar - G * U + E * x;
}

double CondensedProblem::cost(const Vector& U, const Vector& x) const {
  check_dims(*this, U, x, "cost");
  const double quad = 0.5 * U.dot(H * U) + x.dot(F * U) + 0.5 * x.dot(Y * x);
  const Vector z = dbar - G * U + E * x;
  const RelaxedLogBarrier bar{delta};
  double b = 0.0;
  for (int i = 0; i < q(); ++i)
    b += (1.0 + wbar(i)) * (bar.value(z(i)) + std::log(dbar(i)));
  return quad + epsilon * b;
}

Vector CondensedProblem::gradient(const Vector& U, const Vector& x) const {
  check_dims(*this, U, x, "gradient");
  const Vector z = dbar - G * U + E * x;
  const RelaxedLogBarrier bar{delta};
  Vector coeff(q());
  for (int i = 0; i < q(); ++i) coeff(i) = -(1.0 + wbar(i)) * bar.derivative(z(i));
  return H * U + F.transpose() * x + epsilon * (G.transpose() * coeff);
}

Matrix CondensedProblem::hessian(const Vector& U, const Vector& x) const {
  check_dims(*this, U, x, "hessian");
  const Vector z = dbar - G * U + E * x;
  const RelaxedLogBarrier bar{delta};
  Vector D(q());
  for (int i = 0; i < q(); ++i) D(i) = (1.0 + wbar(i)) * bar.second_derivative(z(i));
  Matrix hess = H + epsilon * (G.transpose() * D.asDiagonal() * G);
  return 0.5 * (hess + hess.transpose());
}

double CondensedProblem::cost_scale(const Vector& U, const Vector& x) const {
  const double quad = 0.5 * std::abs(U.dot(H * U)) + std::abs(x.dot(F * U)) +
                      0.5 * std::abs(x.dot(Y * x));
  const Vector z = dbar - G * U + E * x;
  const RelaxedLogBarrier bar{delta};
  double b = 0.0;
  for (int i = 0; i < q(); ++i)
    b += (1.0 + wbar(i)) * std::abs(bar.value(z(i)) + std::log(dbar(i)));
  return quad + epsilon * b;
}

double CondensedProblem::stage_cost(const Vector& x, const Vector& u) const {
  return x.dot(setup.Q * x) + u.dot(setup.R * u) +
         epsilon * (barrier_x.value(x) + barrier_u.value(u));
}

double CondensedProblem::terminal_cost(const Vector& xN) const {
  return xN.dot(terminal.P * xN);
}

CondensedProblem assemble(const ProblemSetup& setup, const RecenteredBarrier& barrier_x,
                          const RecenteredBarrier& barrier_u, const TerminalDesign& terminal) {
  const int n = setup.plant.n();
  const int m = setup.plant.m();
  const int N = setup.N;
  const int qx = setup.state_set.rows();
  const int qu = setup.input_set.rows();
  const Matrix& A = setup.plant.A;
  const Matrix& B = setup.plant.B;

  if (barrier_x.dim() != n || barrier_u.dim() != m)
    throw std::invalid_argument("assemble: barrier dimensions do not match the plant");

  CondensedProblem cp(barrier_x, barrier_u, terminal);
  cp.epsilon = setup.epsilon;
  cp.delta = setup.delta;
  cp.setup = setup;

  // Prediction matrices: [x_1; ...; x_N] = Omega x + Gamma U.
  cp.Omega.resize(N * n, n);
  cp.Gamma = Matrix::Zero(N * n, N * m);
  Matrix Ak = A;  // A^{k+1} at block row k
  for (int k = 0; k < N; ++k) {
    cp.Omega.middleRows(k * n, n) = Ak;
    cp.Gamma.block(k * n, k * m, n, m) = B;
    if (k > 0)
      cp.Gamma.middleRows(k * n, n).leftCols(k * m) =
          A * cp.Gamma.middleRows((k - 1) * n, n).leftCols(k * m);
    Ak = A * Ak;
  }

  // Qtilde = blkdiag(Q, ..., Q, P): N-1 stage weights plus the terminal P.
  Matrix Qt = Matrix::Zero(N * n, N * n);
  for (int k = 0; k < N - 1; ++k) Qt.block(k * n, k * n, n, n) = setup.Q;
  Qt.block((N - 1) * n, (N - 1) * n, n, n) = terminal.P;
  Matrix Rt = Matrix::Zero(N * m, N * m);
  for (int k = 0; k < N; ++k) Rt.block(k * m, k * m, m, m) = setup.R;

  cp.H = 2.0 * (Rt + cp.Gamma.transpose() * Qt * cp.Gamma);
  cp.H = 0.5 * (cp.H + cp.H.transpose());
  cp.F = 2.0 * cp.Omega.transpose() * Qt * cp.Gamma;
  cp.Y = 2.0 * (setup.Q + cp.Omega.transpose() * Qt * cp.Omega);
  cp.Y = 0.5 * (cp.Y + cp.Y.transpose());

  // Constraint stack: x_0 rows, predicted-state rows for x_1..x_{N-1},
  // then input rows, with slacks z = -G U + E x + dbar.
  const int q = N * (qx + qu);
  cp.G = Matrix::Zero(q, N * m);
  cp.E = Matrix::Zero(q, n);
  cp.dbar.resize(q);
  cp.wbar.resize(q);

  cp.E.topRows(qx) = -setup.state_set.C;
  cp.dbar.head(qx) = setup.state_set.d;
  cp.wbar.head(qx) = barrier_x.weights();
  for (int k = 1; k < N; ++k) {
    const int row = k * qx;
    cp.G.middleRows(row, qx) = setup.state_set.C * cp.Gamma.middleRows((k - 1) * n, n);
    cp.E.middleRows(row, qx) = -setup.state_set.C * cp.Omega.middleRows((k - 1) * n, n);
    cp.dbar.segment(row, qx) = setup.state_set.d;
    cp.wbar.segment(row, qx) = barrier_x.weights();
  }
  for (int k = 0; k < N; ++k) {
    const int row = N * qx + k * qu;
    cp.G.block(row, k * m, qu, m) = setup.input_set.C;
    cp.dbar.segment(row, qu) = setup.input_set.d;
    cp.wbar.segment(row, qu) = barrier_u.weights();
  }

  std::tie(cp.sigma, cp.L) = constants_sigma_L(cp);
  return cp;
}

CondensedProblem assemble(const ProblemSetup& setup) {
  RecenteredBarrier bx = RecenteredBarrier::make(setup.state_set, setup.delta);
  RecenteredBarrier bu = RecenteredBarrier::make(setup.input_set, setup.delta);
  TerminalDesign terminal =
      solve_modified_dare(setup, bx.quadratic_upper_bound(), bu.quadratic_upper_bound());
  return assemble(setup, bx, bu, terminal);
}

std::pair<double, double> constants_sigma_L(const CondensedProblem& cp) {
  Eigen::SelfAdjointEigenSolver<Matrix> es_h(cp.H, Eigen::EigenvaluesOnly);
  const double sigma = es_h.eigenvalues().minCoeff();
  const double dmax = cp.epsilon * (1.0 + cp.wbar.maxCoeff()) / (cp.delta * cp.delta);
  Matrix upper = cp.H + dmax * (cp.G.transpose() * cp.G);
  Eigen::SelfAdjointEigenSolver<Matrix> es_u(0.5 * (upper + upper.transpose()),
                                             Eigen::EigenvaluesOnly);
  return {sigma, es_u.eigenvalues().maxCoeff()};
}

}  // namespace rbmpc
