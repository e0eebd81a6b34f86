#include "rbmpc/model.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace rbmpc;

TEST_CASE("benchmark setup validates cleanly") {
  const ValidationReport report = validate_setup(oracles::integrator_setup());
  CAPTURE(report.to_string());
  CHECK(report.ok());
}

TEST_CASE("delta above min(d) is flagged") {
  ProblemSetup setup = oracles::integrator_setup();
  setup.delta = 2.0;  // min(du) = 1
  const ValidationReport report = validate_setup(setup);
  REQUIRE_FALSE(report.ok());
  bool found = false;
  for (const auto& issue : report.issues) found |= issue.find("delta") != std::string::npos;
  CHECK(found);
}

TEST_CASE("singular R is flagged") {
  ProblemSetup setup = oracles::integrator_setup();
  setup.R.setZero();
  const ValidationReport report = validate_setup(setup);
  REQUIRE_FALSE(report.ok());
  bool found = false;
  for (const auto& issue : report.issues) found |= issue.find("R:") != std::string::npos;
  CHECK(found);
}

TEST_CASE("non-stabilizable pair is flagged") {
  ProblemSetup setup = oracles::integrator_setup();
  setup.plant.A = Matrix{{2.0, 0.0}, {0.0, 0.5}};
  setup.plant.B = Matrix{{0.0}, {1.0}};  // unstable mode unreachable
  const ValidationReport report = validate_setup(setup);
  REQUIRE_FALSE(report.ok());
  bool found = false;
  for (const auto& issue : report.issues) found |= issue.find("stabilizable") != std::string::npos;
  CHECK(found);
}

TEST_CASE("zero constraint rows and nonpositive d are flagged") {
  ProblemSetup setup = oracles::integrator_setup();
  setup.state_set.C.row(1).setZero();
  setup.state_set.d(2) = 0.0;
  const ValidationReport report = validate_setup(setup);
  CHECK(report.issues.size() >= 2);
}

TEST_CASE("rollout examples") {
  const ProblemSetup setup = oracles::integrator_setup();
  const int Nm = setup.N * setup.plant.m();

  SUBCASE("zero input, zero state stays at zero") {
    const auto states = rollout_states(setup, Vector::Zero(Nm), Vector::Zero(2));
    for (const auto& xk : states) CHECK(xk.norm() == 0.0);
  }
  SUBCASE("pure position, zero input drifts nowhere") {
    const auto states = rollout_states(setup, Vector::Zero(Nm), Vector{{1.0, 0.0}});
    CHECK(states[0].isApprox(Vector{{1.0, 0.0}}, 1e-15));
  }
  SUBCASE("first state from a unit input equals B") {
    Vector U = Vector::Zero(Nm);
    U(0) = 1.0;
    const auto states = rollout_states(setup, U, Vector::Zero(2));
    CHECK(states[0].isApprox(Vector{{0.01, 0.1}}, 1e-15));
  }
  SUBCASE("dimension mismatch throws") {
    CHECK_THROWS_AS(rollout_states(setup, Vector::Zero(Nm - 1), Vector::Zero(2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(rollout_states(setup, Vector::Zero(Nm), Vector::Zero(3)),
                    std::invalid_argument);
  }
}

TEST_CASE("rollout matches the power-series form and is linear") {
  const ProblemSetup setup = oracles::integrator_setup();
  const int n = 2, m = 1;
  const int Nm = setup.N * m;
  Rng rng(7);

  for (int trial = 0; trial < 20; ++trial) {
    Vector U(Nm), x(n);
    for (int i = 0; i < Nm; ++i) U(i) = rng.uniform(-2.0, 2.0);
    for (int i = 0; i < n; ++i) x(i) = rng.uniform(-2.0, 2.0);

    const auto states = rollout_states(setup, U, x);
    // x_k = A^k x + sum_i A^i B u_{k-1-i}
    for (int k = 1; k <= setup.N; ++k) {
      Matrix Ak = Matrix::Identity(n, n);
      for (int i = 0; i < k; ++i) Ak = setup.plant.A * Ak;
      Vector expected = Ak * x;
      Matrix Ai = Matrix::Identity(n, n);
      for (int i = 0; i < k; ++i) {
        expected += Ai * setup.plant.B * U.segment((k - 1 - i) * m, m);
        Ai = setup.plant.A * Ai;
      }
      CHECK((states[k - 1] - expected).cwiseAbs().maxCoeff() <= 1e-12);
    }

    Vector U2(Nm), x2(n);
    for (int i = 0; i < Nm; ++i) U2(i) = rng.uniform(-2.0, 2.0);
    for (int i = 0; i < n; ++i) x2(i) = rng.uniform(-2.0, 2.0);
    const auto sum = rollout_states(setup, U + U2, x + x2);
    const auto first = rollout_states(setup, U, x);
    const auto second = rollout_states(setup, U2, x2);
    for (int k = 0; k < setup.N; ++k)
      CHECK((sum[k] - first[k] - second[k]).cwiseAbs().maxCoeff() <= 1e-10);
  }
}
