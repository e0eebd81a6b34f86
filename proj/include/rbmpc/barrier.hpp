#pragma once

#include "rbmpc/model.hpp"

#include <stdexcept>

namespace rbmpc {

/// Relaxed logarithmic barrier for the scalar constraint z >= 0:
/// -ln(z) for z > delta, glued C^2-smoothly to a quadratic penalty below.
struct RelaxedLogBarrier {
  double delta = 1.0;

  double value(double z) const;
  double derivative(double z) const;
  double second_derivative(double z) const;
};

struct InfeasibleRecentering : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Nonnegative facet weights w solving C^T diag(1/d) (1 + w) = 0 with
/// minimal sum(w). Throws InfeasibleRecentering (with the attained residual)
/// when no nonnegative solution exists.
Vector compute_recentering_weights(const Polytope& set);

struct PolyBarrierEval {
  double value = 0.0;
  Vector gradient;
  Matrix hessian;
};

/// Recentered relaxed logarithmic barrier for a polytope: zero value and
/// zero gradient at the origin, positive definite, globally defined.
class RecenteredBarrier {
 public:
  RecenteredBarrier(Polytope set, double delta, Vector weights);

  /// Builds the barrier with weights from compute_recentering_weights.
  static RecenteredBarrier make(Polytope set, double delta);

  double value(const Vector& xi) const;
  Vector gradient(const Vector& xi) const;
  PolyBarrierEval eval(const Vector& xi) const;

  /// M = (1 / (2 delta^2)) C^T diag(1 + w) C, a global quadratic upper
  /// bound: value(xi) <= xi' M xi for all xi.
  Matrix quadratic_upper_bound() const;

  const Polytope& set() const { return set_; }
  double delta() const { return scalar_.delta; }
  const Vector& weights() const { return weights_; }
  int dim() const { return set_.dim(); }

 private:
  Polytope set_;
  RelaxedLogBarrier scalar_;
  Vector weights_;   // q
  Vector log_d_;     // ln(d_i), cached recentering offsets
};

}  // namespace rbmpc
