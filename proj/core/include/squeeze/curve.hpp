#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace squeeze {

using Complex = std::complex<double>;

/// Position and first two parameter derivatives of a closed curve at t.
struct CurveSample {
  Complex z;
  Complex dz;
  Complex ddz;
};

struct NearestPoint {
  double t = 0.0;       ///< curve parameter of the nearest point
  Complex point;        ///< nearest point
  double distance = 0.0;
};

/// A holomorphic map with its first two derivatives, used to push curves
/// forward while keeping derivative information.
struct HolomorphicMap {
  std::function<Complex(Complex)> f;
  std::function<Complex(Complex)> df;
  std::function<Complex(Complex)> ddf;
};

struct CurveSampling {
  std::size_t base = 4096;
  double chord_tol = 1e-6;     ///< relative to the polyline's bounding size
  int max_depth = 10;
  std::vector<double> focus;   ///< parameters to cluster samples around
  int focus_levels = 56;       ///< geometric halvings around each focus
};

/// Closed C^2 curve t -> z(t), t in [0, 2pi), together with a polyline
/// approximation used for winding numbers and coarse nearest-point search.
///
/// The polyline starts from `base` uniform parameters, is refined where the
/// chord deviates from the curve, and is clustered geometrically around any
/// `focus` parameters (points where the image curve is singular, such as the
/// preimage of 0 under z log z).
class ClosedCurve {
 public:
  using Parametrization = std::function<CurveSample(double)>;

  using Sampling = CurveSampling;

  ClosedCurve(Parametrization param, const Sampling& sampling);
  ClosedCurve(Parametrization param) : ClosedCurve(std::move(param), Sampling{}) {}

  /// Circle through center + radius e^{+-it}.
  static ClosedCurve circle(Complex center, double radius, bool counterclockwise,
                            const Sampling& sampling = {});

  /// Trigonometric interpolant of equispaced samples z_j = z(2 pi j / m).
  static ClosedCurve from_samples(std::span<const Complex> samples, const Sampling& sampling = {});

  /// The image curve f o z with derivatives by the chain rule.
  ClosedCurve mapped(const HolomorphicMap& map, const Sampling& sampling) const;

  CurveSample eval(double t) const { return (*param_)(t); }
  Complex at(double t) const { return (*param_)(t).z; }

  std::span<const double> params() const { return params_; }
  std::span<const Complex> vertices() const { return vertices_; }

  /// Shoelace area of the polyline; positive for counterclockwise curves.
  double signed_area() const;
  double length() const;
  /// Largest distance from the origin over polyline vertices.
  double extent() const { return extent_; }

  /// Nearest curve point: coarse polyline search followed by Brent
  /// refinement on the parametrization around the best segments.
  NearestPoint nearest(Complex z) const;

  /// Winding number of the polyline around z.
  int winding_number(Complex z) const;

  /// Distance from z to the polyline (no refinement).
  double polyline_distance(Complex z) const;

  /// Equispaced samples of the exact curve (not the adaptive polyline).
  std::vector<CurveSample> equispaced(std::size_t count) const;

 private:
  void build(const Sampling& sampling);

  std::shared_ptr<const Parametrization> param_;
  std::vector<double> params_;
  std::vector<Complex> vertices_;
  double extent_ = 0.0;
};

/// True when two polylines have a proper segment crossing, or a polyline
/// crosses itself (pass the same curve twice). Uses a uniform grid over
/// segment bounding boxes.
bool polylines_intersect(const ClosedCurve& a, const ClosedCurve& b);

}  // namespace squeeze
