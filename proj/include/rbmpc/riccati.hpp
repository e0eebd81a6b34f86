#pragma once

#include "rbmpc/model.hpp"

#include <stdexcept>

namespace rbmpc {

struct NoStabilizingSolution : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Terminal design for the barrier-augmented problem: value matrix P and
/// feedback K from the modified Riccati equation with weights
/// (Q + eps*M_x, R + eps*M_u), plus the plain LQR value matrix P_uc.
struct TerminalDesign {
  Matrix P;     // n x n, symmetric PD
  Matrix K;     // m x n, u = K x, A + B K Schur stable
  Matrix P_uc;  // n x n, DARE solution for (A,B,Q,R)
  Matrix M_x;   // quadratic upper bound on the state barrier
  Matrix M_u;   // quadratic upper bound on the input barrier
};

/// Stabilizing solution of P = A'PA - A'PB (R + B'PB)^-1 B'PA + Q by
/// fixed-point iteration of the Riccati difference equation.
Matrix solve_standard_dare(const PlantModel& plant, const Matrix& Q, const Matrix& R);

/// Solves the modified equation with the barrier curvature bounds folded
/// into the weights and returns the full terminal design. Throws
/// NoStabilizingSolution when the iteration diverges or fails to converge.
TerminalDesign solve_modified_dare(const ProblemSetup& setup, const Matrix& M_x, const Matrix& M_u);

}  // namespace rbmpc
