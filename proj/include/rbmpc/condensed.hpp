#pragma once

#include "rbmpc/barrier.hpp"
#include "rbmpc/riccati.hpp"

#include <utility>

namespace rbmpc {

/// Condensed cost over the stacked input vector U (length N*m):
///
///   J(U, x) = 1/2 U'HU + x'FU + 1/2 x'Yx + eps * B(U, x),
///
/// where B stacks the recentered relaxed barriers of every stage constraint
/// through the slacks z(U,x) = -G U + E x + dbar. All matrices are dense;
/// the object is immutable after assembly and evaluation is thread-safe.
struct CondensedProblem {
  CondensedProblem(RecenteredBarrier bx, RecenteredBarrier bu, TerminalDesign term)
      : barrier_x(std::move(bx)), barrier_u(std::move(bu)), terminal(std::move(term)) {}

  Matrix H;     // Nm x Nm, symmetric PD
  Matrix F;     // n x Nm
  Matrix Y;     // n x n, symmetric PSD
  Matrix G;     // q x Nm
  Matrix E;     // q x n
  Vector dbar;  // q
  Vector wbar;  // q, stacked recentering weights
  Matrix Omega;  // Nn x n, stacked powers of A
  Matrix Gamma;  // Nn x Nm, lower block-triangular impulse response

  double epsilon = 0.0;
  double delta = 0.0;
  double sigma = 0.0;  // lambda_min(H), strong convexity modulus
  double L = 0.0;      // global Hessian upper bound

  ProblemSetup setup;
  RecenteredBarrier barrier_x;
  RecenteredBarrier barrier_u;
  TerminalDesign terminal;

  int n() const { return setup.plant.n(); }
  int m() const { return setup.plant.m(); }
  int N() const { return setup.N; }
  int nm() const { return static_cast<int>(H.rows()); }
  int q() const { return static_cast<int>(G.rows()); }

  /// Stage constraint slacks z = -G U + E x + dbar.
  Vector slack(const Vector& U, const Vector& x) const;

  double cost(const Vector& U, const Vector& x) const;
  Vector gradient(const Vector& U, const Vector& x) const;
  Matrix hessian(const Vector& U, const Vector& x) const;

  /// Sum of term magnitudes entering cost(); bounds the cancellation-driven
  /// round-off of a cost evaluation at (U, x).
  double cost_scale(const Vector& U, const Vector& x) const;

  /// Barrier-augmented stage cost l(x,u) = |x|_Q^2 + |u|_R^2 + eps(Bx + Bu).
  double stage_cost(const Vector& x, const Vector& u) const;
  /// Terminal cost x'Px.
  double terminal_cost(const Vector& xN) const;

  /// First input of the stacked vector (the applied control).
  Vector first_input(const Vector& U) const { return U.head(m()); }
};

/// Builds every condensed matrix plus the constants (sigma, L) from a
/// validated setup, the two recentered barriers and the terminal design.
CondensedProblem assemble(const ProblemSetup& setup, const RecenteredBarrier& barrier_x,
                          const RecenteredBarrier& barrier_u, const TerminalDesign& terminal);

/// Convenience: weights, terminal design and assembly in one call.
CondensedProblem assemble(const ProblemSetup& setup);

/// Recomputes (sigma, L) from the assembled matrices; used after changing
/// the barrier parameters of an otherwise identical problem.
std::pair<double, double> constants_sigma_L(const CondensedProblem& cp);

}  // namespace rbmpc
