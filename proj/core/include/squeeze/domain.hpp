#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "squeeze/ball_geometry.hpp"
#include "squeeze/curve.hpp"

namespace squeeze {

enum class Smoothness { C1, C2, Cinf };

std::string to_string(Smoothness s);
Smoothness smoothness_from_string(const std::string& s);

/// Bounded planar domain: a counterclockwise outer curve minus the interiors
/// of clockwise holes. The domain lies to the left of every boundary curve.
class PlanarDomain {
 public:
  /// Validates orientation (signed areas), that every hole lies inside the
  /// outer curve, and that no two boundary polylines intersect.
  PlanarDomain(ClosedCurve outer, std::vector<ClosedCurve> holes, Smoothness smoothness,
               std::string name = "planar");

  const ClosedCurve& outer() const { return outer_; }
  const std::vector<ClosedCurve>& holes() const { return holes_; }
  Smoothness smoothness() const { return smoothness_; }
  const std::string& name() const { return name_; }
  /// Number of boundary components.
  int connectivity() const { return 1 + static_cast<int>(holes_.size()); }

  /// Boundary curve by index: 0 is the outer curve, 1.. are holes.
  const ClosedCurve& boundary(std::size_t index) const {
    return index == 0 ? outer_ : holes_[index - 1];
  }
  std::size_t boundary_count() const { return 1 + holes_.size(); }

 private:
  ClosedCurve outer_;
  std::vector<ClosedCurve> holes_;
  Smoothness smoothness_;
  std::string name_;
};

/// Disc inside a complex line z + zeta v (|v| = 1), in the zeta coordinate.
struct SliceDisc {
  Complex center;
  double radius = 0.0;
};

/// Domain {rho < 0} in C^n. The gradient is returned as a complex vector with
/// entries d rho/dx_k + i d rho/dy_k, so the outward normal is grad/|grad|.
class DefiningFunctionDomain {
 public:
  using Rho = std::function<double(const PointCn&)>;
  using Gradient = std::function<PointCn(const PointCn&)>;
  using Slicer = std::function<std::optional<SliceDisc>(const PointCn& z, const PointCn& v)>;

  DefiningFunctionDomain(Rho rho, Gradient gradient, PointCn interior_witness, double bbox_radius,
                         std::string name, Slicer slicer = {});

  /// Complex ellipsoid sum |z_k - c_k|^2 / a_k^2 < 1. Slices by complex lines
  /// are discs and are computed in closed form.
  static DefiningFunctionDomain ellipsoid(const std::vector<double>& axes, PointCn center = {});
  static DefiningFunctionDomain ball(Eigen::Index n, double radius = 1.0);

  double rho(const PointCn& z) const { return rho_(z); }
  PointCn gradient(const PointCn& z) const { return gradient_(z); }
  const PointCn& interior_witness() const { return witness_; }
  double bbox_radius() const { return bbox_radius_; }
  Eigen::Index dim() const { return witness_.size(); }
  const std::string& name() const { return name_; }
  const std::vector<double>& axes() const { return axes_; }

  /// Slice of the domain by the complex line through z in direction v, when
  /// it is a disc with a closed form.
  std::optional<SliceDisc> slice_disc(const PointCn& z, const PointCn& v) const;

  /// Boundary point on the ray from the interior witness in direction u.
  PointCn radial_boundary_point(const PointCn& u) const;

  /// Newton projection of a near-boundary point onto {rho = 0} along the
  /// gradient.
  PointCn project(const PointCn& y) const;

 private:
  Rho rho_;
  Gradient gradient_;
  PointCn witness_;
  double bbox_radius_;
  std::string name_;
  Slicer slicer_;
  std::vector<double> axes_;
};

using Domain = std::variant<PlanarDomain, DefiningFunctionDomain>;

Eigen::Index dimension(const Domain& dom);
std::string domain_name(const Domain& dom);

enum class Containment { inside, outside, boundary };

/// Containment test: winding number (planar, refined by the local normal near
/// the boundary) or sign of rho. Points within `tol` of the boundary are
/// reported as `boundary`.
Containment classify(const Domain& dom, const PointCn& z, double tol = 1e-13);
bool contains(const Domain& dom, const PointCn& z);

struct DomainPoint {
  PointCn z;
  double d = 0.0;       ///< Euclidean boundary distance
  PointCn nearest;      ///< a nearest boundary point
  std::size_t component = 0;  ///< planar: boundary curve index
  double param = 0.0;         ///< planar: curve parameter of `nearest`
};

/// Boundary distance of an interior point. Throws DomainError with the signed
/// distance when z is outside or on the boundary.
DomainPoint boundary_distance(const Domain& dom, const PointCn& z);

/// Unsigned distance to the boundary with no containment check; the
/// computation behind boundary_distance.
DomainPoint nearest_boundary_point(const Domain& dom, const PointCn& z);

/// Outward unit normal at a boundary point (as found by nearest_boundary_point).
PointCn outward_normal(const Domain& dom, const DomainPoint& at);

/// Random boundary samples: uniform in curve parameter (planar) or radial
/// projections of uniform directions (defining function).
std::vector<PointCn> boundary_samples(const Domain& dom, std::size_t count, std::uint64_t seed);

/// Random interior samples by rejection from the bounding box.
std::vector<PointCn> interior_samples(const Domain& dom, std::size_t count, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

PlanarDomain unit_disc(std::size_t samples = 1024);
PlanarDomain disc(Complex center, double radius, std::size_t samples = 1024);
/// {inner < |z - center| < outer}.
PlanarDomain annulus(double inner, double outer, Complex center = 0.0, std::size_t samples = 1024);

/// Ring domain in the right half plane whose outer boundary contains a flat
/// segment {iy : |y| <= half_length} of the imaginary axis.
///
/// The outer curve is a polar graph about `center` (on the positive real
/// axis): the flat segment for |theta - pi| <= atan(half_length/center), the
/// circle of radius `far_radius` for |theta - pi| >= blend_end, and a
/// C-infinity blend of the two radii in between.
///
/// z log z has a critical point at 1/e and identifies iy with -iy at |y| = 1,
/// so the defaults keep the whole domain inside |z| < 1/e.
struct OmegaPrimeParams {
  double half_length = 0.09;
  double center = 0.1;
  double far_radius = 0.1;
  double blend_end = 1.25;
  Complex hole_center = 0.1;
  double hole_radius = 0.03;
  std::size_t samples = 4096;
};

PlanarDomain build_omega_prime(const OmegaPrimeParams& params = {});

/// Parametrization of the outer curve of build_omega_prime (exposed for
/// solvers that need exact derivatives). The curve passes through 0 at t = pi.
ClosedCurve::Parametrization omega_prime_outer(const OmegaPrimeParams& params);

struct PhiValue {
  Complex value;
  bool removable_singularity = false;  ///< z = 0, limit value returned
};

/// z log z with the principal logarithm, defined for Re z >= 0.
PhiValue phi_map(Complex z);
/// log z + 1.
Complex phi_derivative(Complex z);
/// z log z, log z + 1, 1/z as a HolomorphicMap (no domain checks).
HolomorphicMap phi_holomorphic();

/// Image of omega_prime under z log z. Boundary curves are pushed forward with
/// samples clustered around the preimage of 0. Throws DomainError when an
/// image polyline self-intersects.
PlanarDomain build_omega(const PlanarDomain& omega_prime);

}  // namespace squeeze
