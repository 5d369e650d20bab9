#include "squeeze/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "squeeze/errors.hpp"
#include "squeeze/random.hpp"

namespace squeeze {

namespace {

constexpr double kPi = std::numbers::pi;

double real_dot(const PointCn& a, const PointCn& b) { return a.dot(b).real(); }

// Second-order forward-mode jet for the blended polar radius.
struct Jet {
  double v = 0.0, d = 0.0, dd = 0.0;
};
Jet operator+(Jet a, Jet b) { return {a.v + b.v, a.d + b.d, a.dd + b.dd}; }
Jet operator-(Jet a, Jet b) { return {a.v - b.v, a.d - b.d, a.dd - b.dd}; }
Jet operator*(Jet a, Jet b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d, a.dd * b.v + 2.0 * a.d * b.d + a.v * b.dd};
}

Jet operator/(Jet a, Jet b) {
  const double q = a.v / b.v;
  const double qd = (a.d - q * b.d) / b.v;
  return {q, qd, (a.dd - 2.0 * qd * b.d - q * b.dd) / b.v};
}
Jet jexp(Jet a) {
  const double e = std::exp(a.v);
  return {e, e * a.d, e * (a.dd + a.d * a.d)};
}
Jet jcos(Jet a) {
  const double c = std::cos(a.v), s = std::sin(a.v);
  return {c, -s * a.d, -c * a.d * a.d - s * a.dd};
}
Jet constant(double c) { return {c, 0.0, 0.0}; }

// Smooth step: 0 for t <= 0, 1 for t >= 1, C-infinity in between.
Jet smooth_step(Jet t) {
  constexpr double cut = 1.0 / 700.0;
  if (t.v <= cut) return constant(0.0);
  if (t.v >= 1.0 - cut) return constant(1.0);
  const Jet one = constant(1.0);
  const Jet f = jexp(constant(-1.0) / t);
  const Jet g = jexp(constant(-1.0) / (one - t));
  return f / (f + g);
}

void validate_omega_prime(const OmegaPrimeParams& p) {
  std::ostringstream err;
  if (!(p.half_length > 0.0)) err << "half_length must be positive; ";
  if (!(p.center > 0.0)) err << "center must be positive; ";
  if (!(p.far_radius > 0.0 && p.far_radius <= p.center)) {
    err << "far_radius must lie in (0, center] to keep the arc in the right half plane; ";
  }
  const double alpha = std::atan(p.half_length / p.center);
  if (!(p.blend_end > alpha && p.blend_end < 0.5 * kPi)) {
    err << "blend_end must lie in (atan(half_length/center), pi/2); ";
  }
  if (!(p.hole_radius > 0.0)) err << "hole radius must be positive (connectivity 2 required); ";
  if (p.samples < 64) err << "need at least 64 samples per curve; ";
  if (!err.str().empty()) throw ConfigError("omega_prime: " + err.str());
}

}  // namespace

std::string to_string(Smoothness s) {
  switch (s) {
    case Smoothness::C1: return "C1";
    case Smoothness::C2: return "C2";
    case Smoothness::Cinf: return "Cinf";
  }
  return "C2";
}

Smoothness smoothness_from_string(const std::string& s) {
  if (s == "C1") return Smoothness::C1;
  if (s == "C2") return Smoothness::C2;
  if (s == "Cinf") return Smoothness::Cinf;
  throw ConfigError("unknown smoothness tag '" + s + "'");
}

// ---------------------------------------------------------------------------
// PlanarDomain
// ---------------------------------------------------------------------------

PlanarDomain::PlanarDomain(ClosedCurve outer, std::vector<ClosedCurve> holes, Smoothness smoothness,
                           std::string name)
    : outer_(std::move(outer)), holes_(std::move(holes)), smoothness_(smoothness), name_(std::move(name)) {
  if (!(outer_.signed_area() > 0.0)) {
    throw ConfigError(name_ + ": outer curve must be counterclockwise (positive signed area)");
  }
  if (polylines_intersect(outer_, outer_)) throw ConfigError(name_ + ": outer curve self-intersects");
  for (std::size_t i = 0; i < holes_.size(); ++i) {
    const ClosedCurve& h = holes_[i];
    if (!(h.signed_area() < 0.0)) {
      throw ConfigError(name_ + ": hole curves must be clockwise (negative signed area)");
    }
    if (polylines_intersect(h, h)) throw ConfigError(name_ + ": hole curve self-intersects");
    if (polylines_intersect(outer_, h)) throw ConfigError(name_ + ": hole touches the outer curve");
    // No crossings, so one vertex decides containment.
    if (outer_.winding_number(h.vertices()[0]) == 0) throw ConfigError(name_ + ": hole leaves the outer curve");
    for (std::size_t j = 0; j < i; ++j) {
      if (polylines_intersect(holes_[j], h) || holes_[j].winding_number(h.vertices()[0]) != 0 ||
          h.winding_number(holes_[j].vertices()[0]) != 0) {
        throw ConfigError(name_ + ": holes overlap");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// DefiningFunctionDomain
// ---------------------------------------------------------------------------

DefiningFunctionDomain::DefiningFunctionDomain(Rho rho, Gradient gradient, PointCn interior_witness,
                                               double bbox_radius, std::string name, Slicer slicer)
    : rho_(std::move(rho)),
      gradient_(std::move(gradient)),
      witness_(std::move(interior_witness)),
      bbox_radius_(bbox_radius),
      name_(std::move(name)),
      slicer_(std::move(slicer)) {
  if (witness_.size() < 1) throw ConfigError(name_ + ": dimension must be >= 1");
  if (!(rho_(witness_) < 0.0)) throw ConfigError(name_ + ": interior witness has rho >= 0");
  if (!(bbox_radius_ > 0.0)) throw ConfigError(name_ + ": bounding radius must be positive");
}

DefiningFunctionDomain DefiningFunctionDomain::ellipsoid(const std::vector<double>& axes, PointCn center) {
  const auto n = static_cast<Eigen::Index>(axes.size());
  if (n < 1) throw ConfigError("ellipsoid: need at least one axis");
  for (double a : axes) {
    if (!(a > 0.0)) throw ConfigError("ellipsoid: axes must be positive");
  }
  if (center.size() == 0) center = PointCn::Zero(n);
  if (center.size() != n) throw ConfigError("ellipsoid: center dimension mismatch");

  Eigen::VectorXd inv2(n);
  for (Eigen::Index k = 0; k < n; ++k) inv2[k] = 1.0 / (axes[k] * axes[k]);
  auto rho = [inv2, center](const PointCn& z) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < z.size(); ++k) s += std::norm(z[k] - center[k]) * inv2[k];
    return s - 1.0;
  };
  auto grad = [inv2, center](const PointCn& z) {
    PointCn g(z.size());
    for (Eigen::Index k = 0; k < z.size(); ++k) g[k] = 2.0 * (z[k] - center[k]) * inv2[k];
    return g;
  };
  // Restricted to a complex line the defining function is gamma |zeta|^2 +
  // 2 Re(zeta b) + rho(z), so the slice is a disc.
  auto slicer = [inv2, center](const PointCn& z, const PointCn& v) -> std::optional<SliceDisc> {
    double gamma = 0.0, rho0 = -1.0;
    Complex b = 0.0;
    for (Eigen::Index k = 0; k < z.size(); ++k) {
      const Complex w = z[k] - center[k];
      gamma += std::norm(v[k]) * inv2[k];
      b += std::conj(w) * v[k] * inv2[k];
      rho0 += std::norm(w) * inv2[k];
    }
    const double r2 = (std::norm(b) / gamma - rho0) / gamma;
    if (!(r2 > 0.0)) return std::nullopt;
    return SliceDisc{-std::conj(b) / gamma, std::sqrt(r2)};
  };
  const double bbox = center.norm() + *std::max_element(axes.begin(), axes.end());
  std::ostringstream nm;
  nm << "ellipsoid(";
  for (std::size_t k = 0; k < axes.size(); ++k) nm << (k ? "," : "") << axes[k];
  nm << ")";
  DefiningFunctionDomain dom(rho, grad, center, bbox, nm.str(), slicer);
  dom.axes_ = axes;
  return dom;
}

DefiningFunctionDomain DefiningFunctionDomain::ball(Eigen::Index n, double radius) {
  DefiningFunctionDomain dom = ellipsoid(std::vector<double>(static_cast<std::size_t>(n), radius));
  dom.name_ = "ball";
  return dom;
}

std::optional<SliceDisc> DefiningFunctionDomain::slice_disc(const PointCn& z, const PointCn& v) const {
  if (!slicer_) return std::nullopt;
  return slicer_(z, v / v.norm());
}

PointCn DefiningFunctionDomain::project(const PointCn& y) const {
  PointCn x = y;
  for (int it = 0; it < 100; ++it) {
    const double r = rho_(x);
    const PointCn g = gradient_(x);
    const double g2 = g.squaredNorm();
    if (g2 == 0.0) throw ConvergenceError(name_ + ": vanishing gradient during projection");
    const PointCn step = (r / g2) * g;
    x -= step;
    if (step.norm() <= 1e-16 * std::max(1.0, x.norm())) break;
  }
  return x;
}

PointCn DefiningFunctionDomain::radial_boundary_point(const PointCn& u) const {
  const PointCn dir = u / u.norm();
  double lo = 0.0, hi = 2.0 * bbox_radius_ + witness_.norm();
  while (rho_(witness_ + hi * dir) < 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (rho_(witness_ + mid * dir) < 0.0 ? lo : hi) = mid;
  }
  return project(witness_ + 0.5 * (lo + hi) * dir);
}

// ---------------------------------------------------------------------------
// Generic queries
// ---------------------------------------------------------------------------

Eigen::Index dimension(const Domain& dom) {
  return std::visit(
      [](const auto& d) -> Eigen::Index {
        if constexpr (std::is_same_v<std::decay_t<decltype(d)>, PlanarDomain>) {
          return 1;
        } else {
          return d.dim();
        }
      },
      dom);
}

std::string domain_name(const Domain& dom) {
  return std::visit([](const auto& d) { return d.name(); }, dom);
}

namespace {

DomainPoint planar_nearest(const PlanarDomain& dom, Complex z) {
  DomainPoint out;
  out.z = point({z});
  out.d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < dom.boundary_count(); ++c) {
    const NearestPoint np = dom.boundary(c).nearest(z);
    if (np.distance < out.d) {
      out.d = np.distance;
      out.nearest = point({np.point});
      out.component = c;
      out.param = np.t;
    }
  }
  return out;
}

// Projected gradient descent of |x - z|^2 over {rho = 0}, from several
// radial starting points.
DomainPoint defining_nearest(const DefiningFunctionDomain& dom, const PointCn& z) {
  const Eigen::Index n = z.size();
  std::vector<PointCn> starts;
  {
    const PointCn g = dom.gradient(z);
    if (g.norm() > 0.0) {
      // March along the gradient until rho changes sign.
      const PointCn dir = g / g.norm();
      double lo = 0.0, hi = std::max(1e-3 * dom.bbox_radius(), std::abs(dom.rho(z)) / g.norm());
      while (dom.rho(z + hi * dir) < 0.0 && hi < 1e6 * dom.bbox_radius()) hi *= 2.0;
      for (int it = 0; it < 200 && hi - lo > 1e-17 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (dom.rho(z + mid * dir) < 0.0 ? lo : hi) = mid;
      }
      starts.push_back(dom.project(z + hi * dir));
    }
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Complex unit : {Complex(1.0), Complex(-1.0), Complex(0.0, 1.0), Complex(0.0, -1.0)}) {
      PointCn u = PointCn::Zero(n);
      u[k] = unit;
      double lo = 0.0, hi = 2.0 * dom.bbox_radius() + z.norm();
      if (!(dom.rho(z + hi * u) > 0.0)) continue;
      for (int it = 0; it < 200 && hi - lo > 1e-17 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (dom.rho(z + mid * u) < 0.0 ? lo : hi) = mid;
      }
      starts.push_back(dom.project(z + hi * u));
    }
  }

  DomainPoint best;
  best.z = z;
  best.d = std::numeric_limits<double>::infinity();
  for (PointCn x : starts) {
    double fx = (x - z).norm();
    double step = 1.0;
    for (int it = 0; it < 2000; ++it) {
      const PointCn g = dom.gradient(x);
      const PointCn nrm = g / g.norm();
      const PointCn r = x - z;
      const PointCn tang = r - real_dot(r, nrm) * nrm;
      if (tang.norm() <= 1e-13 * std::max(r.norm(), 1e-300)) break;
      bool improved = false;
      while (step > 1e-12) {
        const PointCn cand = dom.project(x - step * tang);
        const double fc = (cand - z).norm();
        if (fc < fx) {
          x = cand;
          fx = fc;
          improved = true;
          step = std::min(1.0, step * 2.0);
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    if (fx < best.d) {
      best.d = fx;
      best.nearest = x;
    }
  }
  return best;
}

}  // namespace

DomainPoint nearest_boundary_point(const Domain& dom, const PointCn& z) {
  if (const auto* pd = std::get_if<PlanarDomain>(&dom)) {
    if (z.size() != 1) throw DomainError("planar domain query needs a point of C^1");
    return planar_nearest(*pd, z[0]);
  }
  const auto& dd = std::get<DefiningFunctionDomain>(dom);
  if (z.size() != dd.dim()) throw DomainError(dd.name() + ": dimension mismatch");
  return defining_nearest(dd, z);
}

Containment classify(const Domain& dom, const PointCn& z, double tol) {
  if (!z.allFinite()) return Containment::outside;
  if (const auto* pd = std::get_if<PlanarDomain>(&dom)) {
    if (z.size() != 1) throw DomainError("planar domain query needs a point of C^1");
    const Complex w = z[0];
    double poly = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < pd->boundary_count(); ++c) {
      poly = std::min(poly, pd->boundary(c).polyline_distance(w));
    }
    const double scale = std::max(1.0, pd->outer().extent());
    if (poly < 1e-3 * scale) {
      // Near the boundary the chord error of the polyline matters; decide by
      // the side of the exact nearest point.
      const DomainPoint np = planar_nearest(*pd, w);
      if (np.d <= tol * scale) return Containment::boundary;
      const CurveSample s = pd->boundary(np.component).eval(np.param);
      const Complex rel = w - s.z;
      const double side = s.dz.real() * rel.imag() - s.dz.imag() * rel.real();
      return side > 0.0 ? Containment::inside : Containment::outside;
    }
    if (pd->outer().winding_number(w) == 0) return Containment::outside;
    for (const ClosedCurve& h : pd->holes()) {
      if (h.winding_number(w) != 0) return Containment::outside;
    }
    return Containment::inside;
  }
  const auto& dd = std::get<DefiningFunctionDomain>(dom);
  if (z.size() != dd.dim()) throw DomainError(dd.name() + ": dimension mismatch");
  const double r = dd.rho(z);
  const double g = dd.gradient(z).norm();
  if (std::abs(r) <= tol * std::max(g, 1.0)) return Containment::boundary;
  return r < 0.0 ? Containment::inside : Containment::outside;
}

bool contains(const Domain& dom, const PointCn& z) { return classify(dom, z) == Containment::inside; }

DomainPoint boundary_distance(const Domain& dom, const PointCn& z) {
  const Containment c = classify(dom, z);
  if (c != Containment::inside) {
    const DomainPoint np = nearest_boundary_point(dom, z);
    std::ostringstream os;
    os << domain_name(dom) << ": boundary_distance needs an interior point; signed distance "
       << (c == Containment::boundary ? 0.0 : -np.d) << (c == Containment::boundary ? " (on boundary)" : " (outside)");
    throw DomainError(os.str());
  }
  return nearest_boundary_point(dom, z);
}

PointCn outward_normal(const Domain& dom, const DomainPoint& at) {
  if (const auto* pd = std::get_if<PlanarDomain>(&dom)) {
    const CurveSample s = pd->boundary(at.component).eval(at.param);
    // The domain lies to the left of the tangent.
    return point({Complex(0.0, -1.0) * s.dz / std::abs(s.dz)});
  }
  const auto& dd = std::get<DefiningFunctionDomain>(dom);
  const PointCn g = dd.gradient(at.nearest);
  return g / g.norm();
}

std::vector<PointCn> boundary_samples(const Domain& dom, std::size_t count, std::uint64_t seed) {
  std::vector<PointCn> out;
  out.reserve(count);
  Rng rng(seed);
  if (const auto* pd = std::get_if<PlanarDomain>(&dom)) {
    // Split samples between curves in proportion to length.
    std::vector<double> lengths;
    double total = 0.0;
    for (std::size_t c = 0; c < pd->boundary_count(); ++c) {
      lengths.push_back(pd->boundary(c).length());
      total += lengths.back();
    }
    for (std::size_t i = 0; i < count; ++i) {
      double pick = rng.uniform() * total;
      std::size_t c = 0;
      while (c + 1 < lengths.size() && pick > lengths[c]) pick -= lengths[c++];
      out.push_back(point({pd->boundary(c).at(rng.uniform(0.0, 2.0 * kPi))}));
    }
    return out;
  }
  const auto& dd = std::get<DefiningFunctionDomain>(dom);
  for (std::size_t i = 0; i < count; ++i) out.push_back(dd.radial_boundary_point(rng.sphere(dd.dim())));
  return out;
}

std::vector<PointCn> interior_samples(const Domain& dom, std::size_t count, std::uint64_t seed) {
  std::vector<PointCn> out;
  out.reserve(count);
  Rng rng(seed);
  const Eigen::Index n = dimension(dom);
  PointCn center;
  double radius = 0.0;
  if (const auto* pd = std::get_if<PlanarDomain>(&dom)) {
    center = PointCn::Zero(1);
    radius = pd->outer().extent();
  } else {
    const auto& dd = std::get<DefiningFunctionDomain>(dom);
    center = dd.interior_witness();
    radius = dd.bbox_radius() + dd.interior_witness().norm();
  }
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > 1000 * (count + 10)) throw ConvergenceError("interior_samples: rejection rate too high");
    PointCn z(n);
    for (Eigen::Index k = 0; k < n; ++k) z[k] = {rng.uniform(-radius, radius), rng.uniform(-radius, radius)};
    z += center;
    if (contains(dom, z)) out.push_back(z);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

PlanarDomain disc(Complex center, double radius, std::size_t samples) {
  ClosedCurve::Sampling s;
  s.base = samples;
  return PlanarDomain(ClosedCurve::circle(center, radius, true, s), {}, Smoothness::Cinf, "disc");
}

PlanarDomain unit_disc(std::size_t samples) { return disc(0.0, 1.0, samples); }

PlanarDomain annulus(double inner, double outer, Complex center, std::size_t samples) {
  if (!(inner > 0.0 && inner < outer)) throw ConfigError("annulus: need 0 < inner < outer");
  ClosedCurve::Sampling s;
  s.base = samples;
  std::vector<ClosedCurve> holes;
  holes.push_back(ClosedCurve::circle(center, inner, false, s));
  return PlanarDomain(ClosedCurve::circle(center, outer, true, s), std::move(holes), Smoothness::Cinf, "annulus");
}

ClosedCurve::Parametrization omega_prime_outer(const OmegaPrimeParams& p) {
  validate_omega_prime(p);
  const double alpha = std::atan(p.half_length / p.center);
  const double beta = p.blend_end;
  const double c = p.center;
  const double rf = p.far_radius;
  return [alpha, beta, c, rf](double theta) {
    const double off = theta - kPi;
    const double aoff = std::abs(off);
    if (aoff <= alpha) {
      // Flat segment, evaluated exactly on the imaginary axis.
      // tan has period pi; using the offset keeps zeta(pi) = 0 exactly.
      const double t = std::tan(off);
      const double sec2 = 1.0 + t * t;
      return CurveSample{Complex(0.0, -c * t), Complex(0.0, -c * sec2), Complex(0.0, -2.0 * c * sec2 * t)};
    }
    Jet radius;
    if (aoff >= beta) {
      radius = constant(rf);
    } else {
      const Jet th{theta, 1.0, 0.0};
      const Jet line = constant(-c) / jcos(th);
      const double sgn = off > 0.0 ? 1.0 : -1.0;
      const Jet s{(aoff - alpha) / (beta - alpha), sgn / (beta - alpha), 0.0};
      const Jet chi = smooth_step(s);
      radius = (constant(1.0) - chi) * line + chi * constant(rf);
    }
    const Complex e = std::polar(1.0, theta);
    const Complex i(0.0, 1.0);
    return CurveSample{c + radius.v * e, (radius.d + i * radius.v) * e,
                       (radius.dd + 2.0 * i * radius.d - radius.v) * e};
  };
}

PlanarDomain build_omega_prime(const OmegaPrimeParams& p) {
  ClosedCurve::Sampling s;
  s.base = p.samples;
  s.focus = {kPi};
  ClosedCurve outer(omega_prime_outer(p), s);

  // The hole must sit strictly inside the open right half plane part of the
  // domain, away from the outer curve.
  const NearestPoint np = outer.nearest(p.hole_center);
  if (outer.winding_number(p.hole_center) == 0 || !(np.distance > p.hole_radius)) {
    throw ConfigError("omega_prime: hole disc must lie strictly inside the outer curve");
  }
  ClosedCurve::Sampling hs;
  hs.base = p.samples;
  std::vector<ClosedCurve> holes;
  holes.push_back(ClosedCurve::circle(p.hole_center, p.hole_radius, false, hs));
  return PlanarDomain(std::move(outer), std::move(holes), Smoothness::Cinf, "omega_prime");
}

PhiValue phi_map(Complex z) {
  if (z == Complex(0.0)) return {0.0, true};
  if (z.real() < -1e-14 * std::abs(z)) {
    std::ostringstream os;
    os << "phi_map: z = " << z << " is in the left half plane (principal branch undefined there)";
    throw DomainError(os.str());
  }
  return {z * std::log(z), false};
}

Complex phi_derivative(Complex z) {
  if (z == Complex(0.0)) throw DomainError("phi_derivative: log z + 1 is unbounded at 0");
  return std::log(z) + 1.0;
}

HolomorphicMap phi_holomorphic() {
  return {[](Complex z) { return z == Complex(0.0) ? Complex(0.0) : z * std::log(z); },
          [](Complex z) { return std::log(z) + 1.0; }, [](Complex z) { return 1.0 / z; }};
}

PlanarDomain build_omega(const PlanarDomain& omega_prime) {
  const HolomorphicMap phi = phi_holomorphic();
  auto sampling_for = [&](const ClosedCurve& c) {
    ClosedCurve::Sampling s;
    s.base = c.params().size() > 0 ? std::max<std::size_t>(1024, c.vertices().size() / 2) : 4096;
    s.base = std::min<std::size_t>(s.base, 8192);
    // Cluster around boundary points that touch the origin, where z log z is
    // not smooth.
    const NearestPoint np = c.nearest(0.0);
    if (np.distance < 1e-12) s.focus = {np.t};
    s.chord_tol = 1e-8;
    return s;
  };
  for (Complex v : omega_prime.outer().vertices()) {
    if (v.real() < -1e-12) throw ConfigError("build_omega: omega_prime leaves the closed right half plane");
  }
  ClosedCurve outer = omega_prime.outer().mapped(phi, sampling_for(omega_prime.outer()));
  std::vector<ClosedCurve> holes;
  for (const ClosedCurve& h : omega_prime.holes()) holes.push_back(h.mapped(phi, sampling_for(h)));
  try {
    return PlanarDomain(std::move(outer), std::move(holes), Smoothness::C1, "omega_zlogz");
  } catch (const ConfigError& e) {
    throw DomainError(std::string("build_omega: image boundary is not a valid ring domain (") + e.what() +
                      "); z log z is not injective at this resolution");
  }
}

}  // namespace squeeze
