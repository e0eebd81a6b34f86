#include "rbmpc/condensed.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace rbmpc;

namespace {

Vector random_U(Rng& rng, int nm, double scale = 2.0) {
  Vector U(nm);
  for (int i = 0; i < nm; ++i) U(i) = rng.uniform(-scale, scale);
  return U;
}

Vector random_x(Rng& rng, double s1 = 4.0, double s2 = 2.0) {
  Vector x(2);
  x << rng.uniform(-s1, s1), rng.uniform(-s2, s2);
  return x;
}

}  // namespace

TEST_CASE("single-stage closed form") {
  // scalar plant, N = 1: H = 2(R + b^2 P), F = 2 a b P, Y = 2(Q + a^2 P)
  ProblemSetup setup;
  const double a = 1.3, b = 0.7;
  setup.plant.A = Matrix{{a}};
  setup.plant.B = Matrix{{b}};
  setup.Q = Matrix{{2.0}};
  setup.R = Matrix{{0.5}};
  setup.N = 1;
  setup.epsilon = 1e-3;
  setup.delta = 0.1;
  setup.state_set.C = Matrix{{1.0}, {-1.0}};
  setup.state_set.d = Vector{{1.0, 1.0}};
  setup.input_set.C = Matrix{{1.0}, {-1.0}};
  setup.input_set.d = Vector{{2.0, 2.0}};

  const CondensedProblem cp = assemble(setup);
  const double P = cp.terminal.P(0, 0);
  CHECK(cp.H(0, 0) == doctest::Approx(2.0 * (0.5 + b * b * P)).epsilon(1e-12));
  CHECK(cp.F(0, 0) == doctest::Approx(2.0 * a * b * P).epsilon(1e-12));
  CHECK(cp.Y(0, 0) == doctest::Approx(2.0 * (2.0 + a * a * P)).epsilon(1e-12));
}

TEST_CASE("benchmark dimensions and constants") {
  const CondensedProblem cp = assemble(oracles::integrator_setup());
  CHECK(cp.H.rows() == 30);
  CHECK(cp.H.cols() == 30);
  CHECK(cp.q() == 180);  // N (q_x + q_u) = 30 * 6
  CHECK(cp.sigma > 0.0);
  CHECK(cp.sigma <= cp.L);
  // regression fixtures from the assembly eigensolves
  CHECK(cp.sigma == doctest::Approx(0.200513957037).epsilon(1e-8));
  CHECK(cp.L == doctest::Approx(98184.5588665).epsilon(1e-8));
}

TEST_CASE("slacks reproduce the per-stage constraint evaluations") {
  const CondensedProblem cp = assemble(oracles::integrator_setup());
  const ProblemSetup& setup = cp.setup;
  Rng rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector U = random_U(rng, cp.nm());
    const Vector x = random_x(rng);
    const Vector z = cp.slack(U, x);
    const auto states = rollout_states(setup, U, x);
    const int qx = setup.state_set.rows(), qu = setup.input_set.rows();

    CHECK((z.head(qx) - (setup.state_set.d - setup.state_set.C * x)).cwiseAbs().maxCoeff() <= 1e-12);
    for (int k = 1; k < setup.N; ++k) {
      const Vector expect = setup.state_set.d - setup.state_set.C * states[k - 1];
      CHECK((z.segment(k * qx, qx) - expect).cwiseAbs().maxCoeff() <= 1e-10);
    }
    for (int k = 0; k < setup.N; ++k) {
      const Vector expect = setup.input_set.d - setup.input_set.C * U.segment(k, 1);
      CHECK((z.segment(setup.N * qx + k * qu, qu) - expect).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("condensed cost equals the stage-sum oracle") {
  Rng rng(103);
  SUBCASE("benchmark problem") {
    const CondensedProblem cp = assemble(oracles::integrator_setup());
    for (int trial = 0; trial < 100; ++trial) {
      const Vector U = random_U(rng, cp.nm());
      const Vector x = random_x(rng);
      const double expect = oracles::stage_sum_cost(cp.setup, cp.barrier_x, cp.barrier_u,
                                                    cp.terminal.P, U, x);
      CHECK(cp.cost(U, x) == doctest::Approx(expect).epsilon(1e-9));
    }
  }
  SUBCASE("random problems") {
    for (int p = 0; p < 5; ++p) {
      const ProblemSetup setup = oracles::random_setup(rng);
      const CondensedProblem cp = assemble(setup);
      for (int trial = 0; trial < 20; ++trial) {
        const Vector U = random_U(rng, cp.nm());
        Vector x(cp.n());
        for (int i = 0; i < cp.n(); ++i) x(i) = rng.uniform(-2.0, 2.0);
        const double expect = oracles::stage_sum_cost(cp.setup, cp.barrier_x, cp.barrier_u,
                                                      cp.terminal.P, U, x);
        CHECK(cp.cost(U, x) == doctest::Approx(expect).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("cost is zero at the origin and nonnegative everywhere") {
  const CondensedProblem cp = assemble(oracles::integrator_setup());
  CHECK(cp.cost(Vector::Zero(cp.nm()), Vector::Zero(2)) == doctest::Approx(0.0).epsilon(1e-14));
  Rng rng(107);
  for (int trial = 0; trial < 200; ++trial)
    CHECK(cp.cost(random_U(rng, cp.nm(), 3.0), random_x(rng)) >= 0.0);
}

TEST_CASE("cost grows along rays") {
  const CondensedProblem cp = assemble(oracles::integrator_setup());
  Rng rng(109);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector U = random_U(rng, cp.nm()).normalized();
    Vector x = random_x(rng);
    x.normalize();
    double prev = cp.cost(4.0 * U, 4.0 * x);
    for (double t : {8.0, 16.0, 32.0}) {
      const double cur = cp.cost(t * U, t * x);
      CHECK(cur > prev);
      prev = cur;
    }
  }
}

TEST_CASE("gradient and Hessian match finite differences") {
  const CondensedProblem cp = assemble(oracles::integrator_setup(1e-2));
  Rng rng(113);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector U = random_U(rng, cp.nm());
    const Vector x = random_x(rng);
    const Vector g = cp.gradient(U, x);
    const Vector fd_g = oracles::fd_gradient([&](const Vector& v) { return cp.cost(v, x); }, U);
    CHECK((g - fd_g).norm() <= 1e-5 * (1.0 + g.norm()));
    const Matrix h = cp.hessian(U, x);
    const Matrix fd_h =
        oracles::fd_jacobian([&](const Vector& v) { return cp.gradient(v, x); }, U);
    CHECK((h - fd_h).norm() <= 1e-5 * (1.0 + h.norm()));
  }
}

TEST_CASE("Hessian spectrum lies inside [sigma, L]") {
  const CondensedProblem cp = assemble(oracles::integrator_setup());
  Rng rng(127);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix h = cp.hessian(random_U(rng, cp.nm(), 3.0), random_x(rng));
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= cp.sigma - 1e-9);
    CHECK(es.eigenvalues().maxCoeff() <= cp.L + 1e-9);
  }
}

TEST_CASE("sigma and L constants") {
  SUBCASE("barrier-free problem collapses to the spectrum of H") {
    ProblemSetup setup = oracles::integrator_setup();
    CondensedProblem cp = assemble(setup);
    cp.epsilon = 0.0;  // recompute with the barrier influence removed
    const auto [sigma, L] = constants_sigma_L(cp);
    Eigen::SelfAdjointEigenSolver<Matrix> es(cp.H, Eigen::EigenvaluesOnly);
    CHECK(sigma == doctest::Approx(es.eigenvalues().minCoeff()).epsilon(1e-10));
    CHECK(L == doctest::Approx(es.eigenvalues().maxCoeff()).epsilon(1e-10));
  }
  SUBCASE("gradient map is L-Lipschitz") {
    const CondensedProblem cp = assemble(oracles::integrator_setup());
    Rng rng(131);
    for (int trial = 0; trial < 10000; ++trial) {
      const Vector U1 = random_U(rng, cp.nm(), 3.0);
      const Vector U2 = random_U(rng, cp.nm(), 3.0);
      const Vector x = random_x(rng);
      const double lhs = (cp.gradient(U1, x) - cp.gradient(U2, x)).norm();
      CHECK(lhs <= cp.L * (U1 - U2).norm() * (1.0 + 1e-12) + 1e-12);
    }
  }
}

TEST_CASE("strong convexity along segments") {
  const CondensedProblem cp = assemble(oracles::integrator_setup());
  Rng rng(137);
  for (int trial = 0; trial < 500; ++trial) {
    const Vector U1 = random_U(rng, cp.nm());
    const Vector U2 = random_U(rng, cp.nm());
    const Vector x = random_x(rng);
    const double lambda = rng.uniform01();
    const double lhs = cp.cost(lambda * U1 + (1.0 - lambda) * U2, x);
    const double rhs = lambda * cp.cost(U1, x) + (1.0 - lambda) * cp.cost(U2, x) -
                       0.5 * cp.sigma * lambda * (1.0 - lambda) * (U1 - U2).squaredNorm();
    CHECK(lhs <= rhs + 1e-8);
  }
}
