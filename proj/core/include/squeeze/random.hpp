#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/Dense>

namespace squeeze {

/// Seeded generator with portable conversions. std::*_distribution output is
/// implementation defined, so reports built on it would not be byte-stable
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return mag * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Uniform point on the unit sphere of C^n.
  Eigen::VectorXcd sphere(Eigen::Index n) {
    Eigen::VectorXcd v(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double re = normal();
      const double im = normal();
      v[k] = {re, im};
    }
    return v / v.norm();
  }

  /// Uniform point in the open unit ball of C^n scaled by `radius`.
  Eigen::VectorXcd ball(Eigen::Index n, double radius = 1.0) {
    const double u = uniform();
    return sphere(n) * (radius * std::pow(u, 1.0 / static_cast<double>(2 * n)));
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace squeeze
