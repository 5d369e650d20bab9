#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "squeeze/domain.hpp"

namespace squeeze {

/// Conformal map of a ring domain onto the standard annulus
/// A_rho = {rho < |w| < 1}: outer curve to |w| = 1, hole to |w| = rho.
///
/// The harmonic measure u (u = 1 outer, u = 0 hole) is written as
/// Re Phi(z) + A log|z - z1| with Phi a Cauchy integral of a real density and
/// z1 inside the hole. The density and A solve a second-kind Nystrom system
/// (trapezoid rule on equispaced parameters, dense LU). Then
/// rho = exp(-1/A) and w = (z - z1) exp((Phi(z) - 1)/A).
class AnnulusMap {
 public:
  /// Throws ConfigError unless dom has exactly one hole, ConvergenceError if
  /// the solve is inconsistent (A <= 0).
  explicit AnnulusMap(const PlanarDomain& dom, std::size_t nodes_per_curve = 1024);

  double modulus() const { return modulus_; }
  /// A = flux of u around the hole / (2 pi).
  double flux_constant() const { return a_; }
  /// Conjugate period of u around the hole, 2 pi A.
  double period() const;
  std::size_t nodes_per_curve() const { return n_; }
  std::string solver() const { return "nystrom-trapezoid-lu"; }
  Complex hole_point() const { return z1_; }

  /// u(z) for z in the closed domain.
  double harmonic_measure(Complex z) const;
  /// log|forward(z)| = (u - 1)/A, accurate relative to the boundary distance.
  double log_modulus(Complex z) const;
  /// 1 - |forward(z)| without cancellation near the outer curve.
  double deficit(Complex z) const;
  Complex forward(Complex z) const;
  /// Inverse of forward by Newton iteration from the nearest tabulated image.
  /// Throws DomainError for w outside the annulus, ConvergenceError when
  /// Newton fails.
  Complex backward(Complex w) const;

  /// Largest deviation of the computed boundary values of u from the data.
  double boundary_residual() const { return residual_; }

 private:
  struct Local {
    std::size_t m = 0;   // nearest node
    Complex dphi;        // Phi(z) - Phi_m
  };
  Local local(Complex z) const;

  PlanarDomain dom_;
  std::size_t n_ = 0;
  std::vector<Complex> zeta_, dzeta_, weight_;  // weight_ = zeta' * trapezoid weight
  std::vector<Complex> phi_;                    // boundary values of Phi
  std::vector<double> data_;                    // 1 outer, 0 hole
  Complex z1_;
  double a_ = 0.0;
  double modulus_ = 0.0;
  double residual_ = 0.0;
  double scale_ = 1.0;
  std::vector<std::pair<Complex, Complex>> table_;  // (z, forward(z)) starting points
};

}  // namespace squeeze
