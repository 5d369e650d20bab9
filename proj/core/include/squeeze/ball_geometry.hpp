#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace squeeze {

using Complex = std::complex<double>;
/// A point of C^n.
using PointCn = Eigen::VectorXcd;
using UnitaryMatrix = Eigen::MatrixXcd;

/// Builds a point of C^n from its coordinates.
PointCn point(std::initializer_list<Complex> coords);

/// Additive constant C > 0 in the boundary estimate
/// d_K(0, p) <= 1/2 log(1/d(p)) + C.
class KobayashiConstant {
 public:
  explicit KobayashiConstant(double value);
  double value() const { return value_; }

 private:
  double value_;
};

// ---------------------------------------------------------------------------
// Axis Moebius automorphism
//
//   Psi_r(z) = ((z1 - r) / (1 - z1 r), s z2 / (1 - z1 r), ..., s zn / (1 - z1 r)),
//   s = sqrt(1 - r^2).
//
// Psi_r sends (r, 0, ..., 0) to the origin and its inverse is Psi_{-r}.
// ---------------------------------------------------------------------------

/// Psi_r(z) for 0 <= r < 1 and |z| < 1. Throws DomainError otherwise.
PointCn psi_apply(double r, const PointCn& z);

/// Inverse of psi_apply. Throws DomainError when |w| >= 1.
PointCn psi_invert(double r, const PointCn& w);

/// Psi_r(z) for any |r| < 1 and z in the closed ball, without domain checks.
/// Used to push boundary samples (|z| = 1) through the automorphism.
PointCn psi_eval(double r, const PointCn& z);

/// Unitary U with U p = (|p|, 0, ..., 0). Throws DomainError for p = 0
/// (undefined direction).
UnitaryMatrix unitary_align(const PointCn& p);

/// True when U U^* = I entrywise to `tol`.
bool is_unitary(const UnitaryMatrix& u, double tol = 1e-12);

/// Composition Psi_r o U. `centering(a)` is the automorphism with a -> 0.
struct BallAutomorphism {
  double r = 0.0;
  UnitaryMatrix align;

  static BallAutomorphism identity(Eigen::Index n);
  static BallAutomorphism centering(const PointCn& a);

  Eigen::Index dim() const { return align.rows(); }
  /// Checked on the open ball.
  PointCn apply(const PointCn& z) const;
  /// Unchecked; valid on the closed ball.
  PointCn eval(const PointCn& z) const;
  PointCn invert(const PointCn& w) const;
};

/// Kobayashi distance of the unit ball from the origin, 1/2 log((1+t)/(1-t)),
/// as a function of t = |z|.
double kobayashi_ball_radial(double t);

/// Kobayashi distance between two points of the unit ball, computed by moving
/// w to the origin with an automorphism.
double kobayashi_ball(const PointCn& z, const PointCn& w);

struct NormIdentity {
  double lhs = 0.0;  ///< |Psi_r(z)|^2 evaluated directly
  double rhs = 0.0;  ///< 1 - (1 - r^2)(1 - |z|^2) / |1 - z1 r|^2
};

NormIdentity norm_psi_identity(double r, const PointCn& z);

// ---------------------------------------------------------------------------
// Sphere-image bound
//
// If 1 - r >= d / K and |z| = 1 - 2 eps d, then |Psi_r(z)| >= 1 - 6 K eps
// provided K eps <= 1/18. K is the confinement constant: the printed chain
// uses K = C, while the confinement proved from the Kobayashi chain gives
// K = e^{2C}.
// ---------------------------------------------------------------------------

enum class Confinement {
  stated,  ///< r <= 1 - d/C
  proved,  ///< r <= 1 - d/e^{2C}
};

/// Confinement radius 1 - d/K for the given form.
double confinement_radius(const KobayashiConstant& c, double d, Confinement form);
double confinement_constant(const KobayashiConstant& c, Confinement form);

struct SphereImageStats {
  std::size_t samples = 0;
  double sphere_radius = 0.0;  ///< 1 - 2 eps d
  double min_norm = 0.0;       ///< min |Psi_r(z)| over samples
  double min_norm_sq = 0.0;
  Eigen::VectorXcd argmin;     ///< sample attaining min_norm
};

/// Raw evaluation of min |Psi_r(z)| over `samples` uniform points of the
/// sphere |z| = 1 - 2 eps d in C^dim. The real-axis point (|z|, 0, ..., 0),
/// where the minimum is attained, is always included.
SphereImageStats sphere_image_min(double r, double eps, double d, std::size_t samples,
                                  Eigen::Index dim, std::uint64_t seed);

struct Lemma25Options {
  Confinement confinement = Confinement::stated;
  Eigen::Index dim = 2;
  std::uint64_t seed = 1;
};

struct Lemma25Report {
  double constant_k = 0.0;      ///< K
  double r = 0.0;
  double eps = 0.0;
  double d = 0.0;
  double target = 0.0;          ///< 1 - 6 K eps
  double intermediate = 0.0;    ///< 1 - 10 K eps, bound on |Psi|^2
  SphereImageStats stats;
  double margin = 0.0;          ///< min |Psi| - target
  double intermediate_margin = 0.0;  ///< min |Psi|^2 - intermediate
  bool pass() const { return margin >= 0.0 && intermediate_margin >= 0.0; }
};

/// Checks the sphere-image bound after validating r <= 1 - d/K,
/// eps <= 1/(18 K) and 1 - 2 eps d > 0 (ConfigError otherwise).
Lemma25Report lemma25_bound(const KobayashiConstant& c, double eps, double d, double r,
                            std::size_t sphere_samples, const Lemma25Options& options = {});

}  // namespace squeeze
