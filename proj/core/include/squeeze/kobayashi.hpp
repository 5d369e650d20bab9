#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "squeeze/ball_geometry.hpp"
#include "squeeze/domain.hpp"

namespace squeeze {

/// Piecewise linear path a -> waypoints... -> b. With `terminal_normal` the
/// last piece runs along the inward normal line into b and is evaluated in
/// closed form in a disc tangent to the boundary.
struct PathSpec {
  std::vector<PointCn> waypoints;
  bool terminal_normal = false;
  int refinement = 2;  ///< initial Gauss-Legendre panels per segment
  /// Boundary point and outward normal the terminal piece is anchored at.
  /// Empty: the nearest boundary point of b.
  PointCn anchor;
  PointCn anchor_normal;
};

enum class BoundKind { upper, exact };

struct SegmentContribution {
  std::string label;
  double value = 0.0;
  double quadrature_error = 0.0;
};

struct DistanceBound {
  double value = 0.0;
  BoundKind kind = BoundKind::upper;
  std::vector<SegmentContribution> decomposition;
  double quadrature_error = 0.0;  ///< sum over segments
};

/// Poincare (Kobayashi) distance between x and y in the disc D(c, R).
double disc_distance(Complex x, Complex y, Complex c, double radius);

/// True when the analytic disc {center + zeta v : |zeta| < radius} (|v| = 1)
/// lies in dom. Planar: exact boundary distance. Defining function: 64
/// samples on the circle, doubled until two passes agree.
bool analytic_disc_inside(const Domain& dom, const PointCn& center, const PointCn& v, double radius);

/// Largest radius rho with {z + zeta v/|v| : |zeta| < rho} inside dom.
/// Planar domains use the exact boundary distance; defining-function domains
/// bisect on the radius with sampled circles.
double inscribed_radius(const Domain& dom, const PointCn& z, const PointCn& v);

/// Centered-disc bound kappa(z; v) <= |v| / rho(z, v).
double infinitesimal_upper(const Domain& dom, const PointCn& z, const PointCn& v);

/// A disc in the complex line through z (direction v, |v| = 1) containing z,
/// in the line coordinate zeta with z at zeta = 0.
struct LineDisc {
  Complex center;
  double radius = 0.0;
};

/// Best available disc through z in direction v: the closed-form slice for
/// quadric domains, otherwise the largest disc tangent to the boundary at the
/// nearest boundary point (planar) or the centered disc.
LineDisc best_line_disc(const Domain& dom, const PointCn& z, const PointCn& v);

/// kappa(z; v) <= |v| R / (R^2 - |c|^2) from best_line_disc.
double metric_upper(const Domain& dom, const PointCn& z, const PointCn& v);

/// Largest disc in the complex normal line at boundary point q, tangent at q
/// (radius R0, center q - R0 n for the outward unit normal n).
double tangent_disc_radius(const Domain& dom, const PointCn& q, const PointCn& normal);

/// Upper bound for d_K(a, b) by integrating metric_upper along the path
/// (composite Gauss-Legendre, panels doubled until the relative change is
/// below 1e-8) plus the closed-form terminal piece.
DistanceBound distance_upper(const Domain& dom, const PointCn& a, const PointCn& b, const PathSpec& path = {});

// ---------------------------------------------------------------------------
// Boundary estimate d_K(base, p) <= 1/2 log(1/d(p)) + C
// ---------------------------------------------------------------------------

struct Lemma22Row {
  int k = 0;
  double d = 0.0;      ///< boundary distance of p_k
  double bound = 0.0;  ///< distance_upper(base, p_k)
  double u = 0.0;      ///< bound - 1/2 log(1/d)
  double quadrature_error = 0.0;
};

struct Lemma22Options {
  double step0 = 1.0;  ///< p_k = target - step0 2^-k n
  int first_scale = 1;
  double slope_tol = 1e-2;
};

struct Lemma22Report {
  std::string domain;
  std::vector<Lemma22Row> rows;
  double c_fit = 0.0;       ///< max u_k
  double tail_slope = 0.0;  ///< least-squares slope of u_k over the final third
  double tangent_radius = 0.0;
  bool bounded = false;     ///< finite C_fit and tail_slope <= slope_tol
};

/// p_k = target - step0 2^-k n, k = first_scale .. first_scale+num_scales-1.
/// Throws DomainError when the inward normal segment leaves the domain.
Lemma22Report lemma22_verify(const Domain& dom, const PointCn& base, const PointCn& target, int num_scales,
                             const Lemma22Options& options = {});

// ---------------------------------------------------------------------------
// Inclusion monotonicity d_{K,B}(0, z) <= d_{K,inner}(0, z) for inner in B
// ---------------------------------------------------------------------------

/// B(0, R) in C^n; exact distance 1/2 log((R + |z|)/(R - |z|)).
struct BallOracle {
  double radius = 1.0;
  Eigen::Index dim = 1;
};

/// Unit disc minus the slit [r, 1).
struct SlitDiscOracle {
  double r = 0.5;
};

/// Conformal map of D \ [r, 1) onto D fixing 0 with positive derivative.
Complex slit_disc_map(double r, Complex z);
/// Exact Kobayashi distance from 0 in D \ [r, 1).
double slit_disc_kobayashi(double r, Complex z);

using InnerDomain = std::variant<BallOracle, SlitDiscOracle, Domain>;

struct MonotonicityRow {
  PointCn z;
  double ball_formula = 0.0;
  double inner_value = 0.0;
  bool exact = false;
  double margin = 0.0;   ///< inner_value - ball_formula
  bool flagged = false;  ///< upper bound below the ball formula (no conclusion)
};

struct MonotonicityReport {
  std::vector<MonotonicityRow> rows;
  int violations = 0;  ///< exact rows with margin < -1e-12
  int flagged = 0;
  bool pass() const { return violations == 0; }
};

/// Samples `pairs` points z of the inner domain and compares the unit-ball
/// formula with the inner distance from 0. Throws ConfigError when a sample
/// of the inner domain is not in the unit ball.
MonotonicityReport inclusion_monotonicity_check(const InnerDomain& inner, std::size_t pairs, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Confinement chain: each displayed step as an evaluable inequality
// ---------------------------------------------------------------------------

struct ChainLine {
  std::string label;
  std::string relation;  ///< ">=", ">", "="
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  ///< lhs - rhs; for "=" the tolerance minus |lhs - rhs|
  bool holds = false;
};

/// Lines of the chain with |z| = 1 - d/e^{2C}: the ball formula, its
/// rewrites, the strict step, and (when given) the comparison with a
/// computed d_{K,Omega}(0, p) upper bound.
std::vector<ChainLine> lemma24_chain(const KobayashiConstant& c, double d,
                                     std::optional<double> distance_to_p = std::nullopt);

}  // namespace squeeze
