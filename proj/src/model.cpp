#include "rbmpc/model.hpp"

#include "rbmpc/riccati.hpp"

#include <sstream>
#include <stdexcept>

namespace rbmpc {

namespace {

constexpr double kDefinitenessTol = 1e-10;

bool is_symmetric(const Matrix& M, double tol) {
  return (M - M.transpose()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, M.cwiseAbs().maxCoeff());
}

double min_eigenvalue(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (M + M.transpose()));
  return es.eigenvalues().minCoeff();
}

void check_polytope(const Polytope& set, int expected_dim, const std::string& name,
                    std::vector<std::string>& issues) {
  if (set.rows() < 1) {
    issues.push_back(name + ": at least one constraint row required");
    return;
  }
  if (set.dim() != expected_dim) {
    std::ostringstream os;
    os << name << ": C has " << set.dim() << " columns, expected " << expected_dim;
    issues.push_back(os.str());
  }
  if (set.d.size() != set.rows()) {
    issues.push_back(name + ": d length does not match the number of rows of C");
    return;
  }
  for (int i = 0; i < set.rows(); ++i) {
    if (!(set.d(i) > 0.0)) {
      std::ostringstream os;
      os << name << ": d(" << i << ") = " << set.d(i) << " is not strictly positive";
      issues.push_back(os.str());
    }
    if (set.C.row(i).cwiseAbs().maxCoeff() == 0.0) {
      std::ostringstream os;
      os << name << ": row " << i << " of C is identically zero";
      issues.push_back(os.str());
    }
  }
}

}  // namespace

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& issue : issues) os << issue << "\n";
  return os.str();
}

ValidationReport validate_setup(const ProblemSetup& setup) {
  ValidationReport report;
  auto& issues = report.issues;

  const int n = setup.plant.n();
  const int m = setup.plant.m();
  if (n < 1) issues.push_back("plant: state dimension must be >= 1");
  if (m < 1) issues.push_back("plant: input dimension must be >= 1");
  if (setup.plant.A.rows() != setup.plant.A.cols())
    issues.push_back("plant: A must be square");
  if (setup.plant.B.rows() != setup.plant.A.rows())
    issues.push_back("plant: B must have as many rows as A");
  if (!issues.empty()) return report;  // dimensions broken, nothing below applies

  check_polytope(setup.state_set, n, "state_set", issues);
  check_polytope(setup.input_set, m, "input_set", issues);

  if (setup.Q.rows() != n || setup.Q.cols() != n) {
    issues.push_back("Q: must be n x n");
  } else if (!is_symmetric(setup.Q, kDefinitenessTol)) {
    issues.push_back("Q: not symmetric");
  } else if (min_eigenvalue(setup.Q) < -kDefinitenessTol) {
    issues.push_back("Q: not positive semi-definite");
  }

  if (setup.R.rows() != m || setup.R.cols() != m) {
    issues.push_back("R: must be m x m");
  } else if (!is_symmetric(setup.R, kDefinitenessTol)) {
    issues.push_back("R: not symmetric");
  } else if (min_eigenvalue(setup.R) <= kDefinitenessTol) {
    issues.push_back("R: not positive definite");
  }

  if (setup.N < 1) issues.push_back("N: horizon must be >= 1");
  if (!(setup.epsilon > 0.0)) issues.push_back("epsilon: must be strictly positive");
  if (!(setup.delta > 0.0)) {
    issues.push_back("delta: must be strictly positive");
  } else if (setup.state_set.d.size() > 0 && setup.input_set.d.size() > 0) {
    const double dmin = std::min(setup.state_set.d.minCoeff(), setup.input_set.d.minCoeff());
    if (setup.delta > dmin) {
      std::ostringstream os;
      os << "delta: " << setup.delta << " exceeds min(d) = " << dmin
         << "; recentered barrier would lose positive definiteness";
      issues.push_back(os.str());
    }
  }

  // Stabilizability, probed with unit weights (weight-independent property).
  try {
    solve_standard_dare(setup.plant, Matrix::Identity(n, n), Matrix::Identity(m, m));
  } catch (const NoStabilizingSolution&) {
    issues.push_back("plant: (A,B) appears not to be stabilizable (DARE probe failed)");
  }

  return report;
}

std::vector<Vector> rollout_states(const ProblemSetup& setup, const Vector& U, const Vector& x) {
  const int n = setup.plant.n();
  const int m = setup.plant.m();
  const int N = setup.N;
  if (U.size() != static_cast<Eigen::Index>(N) * m)
    throw std::invalid_argument("rollout_states: U must have length N*m");
  if (x.size() != n) throw std::invalid_argument("rollout_states: x must have length n");

  std::vector<Vector> states;
  states.reserve(N);
  Vector xk = x;
  for (int k = 0; k < N; ++k) {
    xk = setup.plant.A * xk + setup.plant.B * U.segment(static_cast<Eigen::Index>(k) * m, m);
    states.push_back(xk);
  }
  return states;
}

}  // namespace rbmpc
