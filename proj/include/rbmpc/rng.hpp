#pragma once

#include "rbmpc/model.hpp"

#include <cstdint>
#include <random>

namespace rbmpc {

/// Seeded PRNG with a fully specified uniform double mapping, so sampled
/// experiments are reproducible bit-for-bit across runs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  Vector uniform_vector(const Vector& lo, const Vector& hi) {
    Vector v(lo.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = uniform(lo(i), hi(i));
    return v;
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rbmpc
