#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace rbmpc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Discrete-time LTI plant x(k+1) = A x(k) + B u(k).
struct PlantModel {
  Matrix A;  // n x n state transition
  Matrix B;  // n x m input map

  int n() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(B.cols()); }
};

/// Polytopic set {xi in R^r : C xi <= d}. The origin must be strictly
/// interior, i.e. every entry of d is positive.
struct Polytope {
  Matrix C;  // q x r
  Vector d;  // q, strictly positive

  int rows() const { return static_cast<int>(C.rows()); }
  int dim() const { return static_cast<int>(C.cols()); }
};

/// Regulation problem data: plant, constraint sets, stage weights, horizon
/// and the barrier parameters (weight epsilon, relaxation delta).
struct ProblemSetup {
  PlantModel plant;
  Polytope state_set;  // subset of R^n
  Polytope input_set;  // subset of R^m
  Matrix Q;            // n x n, symmetric PSD
  Matrix R;            // m x m, symmetric PD
  int N = 1;           // prediction horizon
  double epsilon = 1e-3;
  double delta = 1e-3;
};

struct ValidationReport {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
  std::string to_string() const;
};

/// Checks every structural invariant of the setup: dimensions, d > 0,
/// definiteness of Q and R, 0 < delta <= min(d), stabilizability of (A,B).
/// Empty report iff the setup is usable by the downstream modules.
ValidationReport validate_setup(const ProblemSetup& setup);

/// Predicted states x_1..x_N under the stacked input U (length N*m) from
/// initial state x: x_k = A^k x + sum_i A^i B u_{k-1-i}.
std::vector<Vector> rollout_states(const ProblemSetup& setup, const Vector& U, const Vector& x);

}  // namespace rbmpc
