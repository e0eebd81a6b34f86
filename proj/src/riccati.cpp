#include "rbmpc/riccati.hpp"

#include <cmath>
#include <sstream>

namespace rbmpc {

namespace {

constexpr double kStepTol = 1e-11;
constexpr long kMaxIterations = 1000000;

Matrix dare_fixed_point(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R) {
  Matrix P = Q;
  double prev_step = std::numeric_limits<double>::infinity();
  for (long j = 0; j < kMaxIterations; ++j) {
    const Matrix BtP = B.transpose() * P;
    const Matrix S = R + BtP * B;                       // PD for R PD, P PSD
    const Matrix K = -S.ldlt().solve(BtP * A);          // u = K x
    Matrix Pn = A.transpose() * P * A + (A.transpose() * BtP.transpose()) * K + Q;
    Pn = 0.5 * (Pn + Pn.transpose());
    if (!Pn.allFinite() || Pn.cwiseAbs().maxCoeff() > 1e14)
      throw NoStabilizingSolution("DARE iteration diverged; (A,B) not stabilizable?");
    const double step = (Pn - P).cwiseAbs().maxCoeff();
    P = Pn;
    if (step <= std::max(kStepTol, 1e-15 * P.cwiseAbs().maxCoeff())) return P;
    // Floating-point floor: the iterate stopped improving.
    if (j > 100 && step >= prev_step && step <= 1e-9 * std::max(1.0, P.cwiseAbs().maxCoeff()))
      return P;
    prev_step = step;
  }
  throw NoStabilizingSolution("DARE iteration did not converge within the iteration cap");
}

double spectral_radius(const Matrix& M) {
  return Eigen::EigenSolver<Matrix>(M, false).eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

Matrix solve_standard_dare(const PlantModel& plant, const Matrix& Q, const Matrix& R) {
  if (Q.rows() != plant.n() || Q.cols() != plant.n())
    throw std::invalid_argument("solve_standard_dare: Q must be n x n");
  if (R.rows() != plant.m() || R.cols() != plant.m())
    throw std::invalid_argument("solve_standard_dare: R must be m x m");
  return dare_fixed_point(plant.A, plant.B, Q, R);
}

TerminalDesign solve_modified_dare(const ProblemSetup& setup, const Matrix& M_x, const Matrix& M_u) {
  const Matrix& A = setup.plant.A;
  const Matrix& B = setup.plant.B;
  const Matrix Qm = setup.Q + setup.epsilon * M_x;
  const Matrix Rm = setup.R + setup.epsilon * M_u;

  TerminalDesign design;
  design.M_x = M_x;
  design.M_u = M_u;
  design.P = dare_fixed_point(A, B, Qm, Rm);
  const Matrix S = Rm + B.transpose() * design.P * B;
  design.K = -S.ldlt().solve(B.transpose() * design.P * A);
  design.P_uc = dare_fixed_point(A, B, setup.Q, setup.R);

  const Matrix A_K = A + B * design.K;
  const Matrix residual = A_K.transpose() * design.P * A_K +
                          design.K.transpose() * Rm * design.K + Qm - design.P;
  const double res_norm = residual.cwiseAbs().maxCoeff();
  if (res_norm > 1e-8) {
    std::ostringstream os;
    os << "modified DARE residual " << res_norm << " exceeds tolerance";
    throw NoStabilizingSolution(os.str());
  }
  const double rho = spectral_radius(A_K);
  if (rho >= 1.0) {
    std::ostringstream os;
    os << "closed loop A+BK not Schur stable (spectral radius " << rho << ")";
    throw NoStabilizingSolution(os.str());
  }
  return design;
}

}  // namespace rbmpc
