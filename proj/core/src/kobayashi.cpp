#include "squeeze/kobayashi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "squeeze/errors.hpp"
#include "squeeze/random.hpp"

namespace squeeze {

namespace {

constexpr double kFitSlack = 1e-9;  // relative slack when testing a disc against the boundary
constexpr double kShrink = 1e-6;    // final shrink of bisected radii

const PlanarDomain* as_planar(const Domain& dom) { return std::get_if<PlanarDomain>(&dom); }

double domain_scale(const Domain& dom) {
  if (const auto* pd = as_planar(dom)) return pd->outer().extent();
  const auto& dd = std::get<DefiningFunctionDomain>(dom);
  return dd.bbox_radius() + dd.interior_witness().norm();
}

bool sampled_circle_inside(const DefiningFunctionDomain& dd, const PointCn& center, const PointCn& v,
                           double radius, std::size_t m) {
  for (std::size_t j = 0; j < m; ++j) {
    const Complex e = std::polar(radius, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m));
    if (!(dd.rho(center + e * v) < 0.0)) return false;
  }
  return true;
}

// Largest feasible value in [lo, hi] of a monotone predicate (true at lo).
template <class Pred>
double bisect_feasible(double lo, double hi, Pred&& ok) {
  if (ok(hi)) return hi;
  for (int it = 0; it < 60 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

struct TerminalDisc {
  PointCn q;       // boundary point
  PointCn normal;  // outward unit normal at q
  Complex center;  // disc center in the coordinate q + zeta n
  double radius = 0.0;
};

TerminalDisc terminal_disc(const Domain& dom, const PointCn& q, const PointCn& normal) {
  TerminalDisc out;
  out.q = q;
  out.normal = normal / normal.norm();
  if (const auto* dd = std::get_if<DefiningFunctionDomain>(&dom)) {
    if (auto sd = dd->slice_disc(out.q, out.normal)) {
      out.center = sd->center;
      out.radius = sd->radius;
      return out;
    }
  }
  out.radius = tangent_disc_radius(dom, out.q, out.normal);
  out.center = -out.radius;
  return out;
}

void check_segment(const Domain& dom, const PointCn& a, const PointCn& b, std::size_t index) {
  constexpr int samples = 64;
  for (int j = 0; j <= samples; ++j) {
    const double t = static_cast<double>(j) / samples;
    if (!contains(dom, a + t * (b - a))) {
      std::ostringstream os;
      os << "distance_upper: path segment " << index << " leaves " << domain_name(dom) << " near t = " << t;
      throw DomainError(os.str());
    }
  }
}

SegmentContribution integrate_segment(const Domain& dom, const PointCn& a, const PointCn& b, int panels0,
                                      const std::string& label) {
  const PointCn v = b - a;
  auto f = [&](double t) { return metric_upper(dom, a + t * v, v); };
  using GL = boost::math::quadrature::gauss<double, 10>;
  auto composite = [&](int panels) {
    double s = 0.0;
    for (int p = 0; p < panels; ++p) {
      s += GL::integrate(f, static_cast<double>(p) / panels, static_cast<double>(p + 1) / panels);
    }
    return s;
  };
  int panels = std::max(1, panels0);
  double prev = composite(panels);
  double err = std::numeric_limits<double>::infinity();
  while (panels < 1024) {
    panels *= 2;
    const double cur = composite(panels);
    err = std::abs(cur - prev);
    prev = cur;
    if (err <= 1e-8 * std::abs(cur)) break;
  }
  return {label, prev, err};
}

}  // namespace

double disc_distance(Complex x, Complex y, Complex c, double radius) {
  const Complex a = (x - c) / radius;
  const Complex b = (y - c) / radius;
  const Complex den = 1.0 - std::conj(a) * b;
  const double t = std::abs(a - b) / std::abs(den);
  if (t == 0.0) return 0.0;
  // 1 - t^2 = (1 - |a|^2)(1 - |b|^2) / |1 - conj(a) b|^2, without cancellation.
  const double ra = std::abs(x - c), rb = std::abs(y - c);
  const double ga = (radius - ra) * (radius + ra) / (radius * radius);
  const double gb = (radius - rb) * (radius + rb) / (radius * radius);
  if (!(ga > 0.0) || !(gb > 0.0)) throw DomainError("disc_distance: point outside the disc");
  return std::log1p(t) - 0.5 * std::log(ga * gb / std::norm(den));
}

bool analytic_disc_inside(const Domain& dom, const PointCn& center, const PointCn& v, double radius) {
  if (!contains(dom, center)) return false;
  if (radius <= 0.0) return true;
  if (as_planar(dom)) return nearest_boundary_point(dom, center).d >= radius * (1.0 - kFitSlack);
  const auto& dd = std::get<DefiningFunctionDomain>(dom);
  std::size_t m = 64;
  bool prev = sampled_circle_inside(dd, center, v, radius, m);
  while (m < 8192) {
    m *= 2;
    const bool cur = sampled_circle_inside(dd, center, v, radius, m);
    if (cur == prev) return cur;
    prev = cur;
  }
  return prev;
}

double inscribed_radius(const Domain& dom, const PointCn& z, const PointCn& v) {
  if (!contains(dom, z)) throw DomainError("inscribed_radius: point is not interior");
  if (as_planar(dom)) return nearest_boundary_point(dom, z).d;
  const PointCn u = v / v.norm();
  if (auto sd = std::get<DefiningFunctionDomain>(dom).slice_disc(z, u)) return sd->radius - std::abs(sd->center);
  const double hi = 2.0 * domain_scale(dom) + z.norm();
  return bisect_feasible(0.0, hi, [&](double r) { return analytic_disc_inside(dom, z, u, r); }) * (1.0 - kShrink);
}

double infinitesimal_upper(const Domain& dom, const PointCn& z, const PointCn& v) {
  const double nv = v.norm();
  if (!(nv > 0.0)) throw DomainError("infinitesimal_upper: zero direction");
  const double rho = inscribed_radius(dom, z, v);
  if (!(rho > 0.0)) return std::numeric_limits<double>::infinity();
  return nv / rho;
}

LineDisc best_line_disc(const Domain& dom, const PointCn& z, const PointCn& v) {
  const PointCn u = v / v.norm();
  if (const auto* dd = std::get_if<DefiningFunctionDomain>(&dom)) {
    if (auto sd = dd->slice_disc(z, u)) return {sd->center, sd->radius};
    return {0.0, inscribed_radius(dom, z, u)};
  }
  // Planar: grow the disc tangent at the nearest boundary point.
  const DomainPoint np = nearest_boundary_point(dom, z);
  const double d = np.d;
  const Complex zz = z[0];
  const Complex inward = (zz - np.nearest[0]) / d;
  const double hi = 2.0 * (domain_scale(dom) + std::abs(zz));
  const double r = bisect_feasible(d, hi, [&](double rr) {
    const Complex c = np.nearest[0] + rr * inward;
    return analytic_disc_inside(dom, point({c}), point({1.0}), rr);
  });
  const double rr = std::max(d, r * (1.0 - kShrink));
  const Complex c = np.nearest[0] + rr * inward;
  return {(c - zz) * std::conj(u[0]), rr};
}

double metric_upper(const Domain& dom, const PointCn& z, const PointCn& v) {
  const double nv = v.norm();
  if (nv == 0.0) return 0.0;
  const LineDisc ld = best_line_disc(dom, z, v);
  const double den = ld.radius * ld.radius - std::norm(ld.center);
  if (!(den > 0.0)) return std::numeric_limits<double>::infinity();
  return nv * ld.radius / den;
}

double tangent_disc_radius(const Domain& dom, const PointCn& q, const PointCn& normal) {
  const PointCn n = normal / normal.norm();
  const double hi = 2.0 * domain_scale(dom);
  const double r = bisect_feasible(0.0, hi, [&](double rr) {
    if (rr == 0.0) return true;
    return analytic_disc_inside(dom, q - rr * n, n, rr);
  });
  if (!(r > 0.0)) throw DomainError("tangent_disc_radius: no interior tangent disc (boundary not C^2 here?)");
  return r * (1.0 - kShrink);
}

DistanceBound distance_upper(const Domain& dom, const PointCn& a, const PointCn& b, const PathSpec& path) {
  DistanceBound out;
  if (!contains(dom, a) || !contains(dom, b)) throw DomainError("distance_upper: endpoints must be interior");
  if ((a - b).norm() == 0.0 && path.waypoints.empty()) return out;

  std::vector<PointCn> nodes{a};
  for (const PointCn& w : path.waypoints) nodes.push_back(w);
  std::optional<TerminalDisc> term;
  if (path.terminal_normal) {
    if (path.anchor.size() > 0) {
      term = terminal_disc(dom, path.anchor, path.anchor_normal);
    } else {
      const DomainPoint np = nearest_boundary_point(dom, b);
      term = terminal_disc(dom, np.nearest, outward_normal(dom, np));
    }
    nodes.push_back(term->q + term->center * term->normal);
  } else {
    nodes.push_back(b);
  }

  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    if ((nodes[i + 1] - nodes[i]).norm() == 0.0) continue;
    check_segment(dom, nodes[i], nodes[i + 1], i);
    std::ostringstream lbl;
    lbl << "segment " << i;
    out.decomposition.push_back(integrate_segment(dom, nodes[i], nodes[i + 1], path.refinement, lbl.str()));
  }
  if (term) {
    const Complex zb = term->normal.dot(b - term->q);
    const PointCn off = b - term->q - zb * term->normal;
    if (off.norm() > 1e-9 * std::max(1.0, b.norm())) {
      throw DomainError("distance_upper: endpoint is not on the terminal normal line");
    }
    out.decomposition.push_back({"terminal normal", disc_distance(term->center, zb, term->center, term->radius), 0.0});
  }
  for (const auto& s : out.decomposition) {
    out.value += s.value;
    out.quadrature_error += s.quadrature_error;
  }
  return out;
}

Lemma22Report lemma22_verify(const Domain& dom, const PointCn& base, const PointCn& target, int num_scales,
                             const Lemma22Options& options) {
  if (num_scales < 3) throw ConfigError("lemma22_verify: need at least 3 scales");
  if (!contains(dom, base)) throw DomainError("lemma22_verify: base point is not interior");
  const DomainPoint tp = nearest_boundary_point(dom, target);
  if (tp.d > 1e-9 * std::max(1.0, target.norm())) throw DomainError("lemma22_verify: target is not on the boundary");
  const PointCn n = outward_normal(dom, tp);

  // The inward normal segment out to the first scale must stay inside.
  const double reach = options.step0 * std::ldexp(1.0, -options.first_scale);
  for (int j = 1; j <= 64; ++j) {
    if (!contains(dom, target - (reach * j / 64.0) * n)) {
      throw DomainError("lemma22_verify: inward normal segment leaves the domain; target skipped");
    }
  }

  Lemma22Report rep;
  rep.domain = domain_name(dom);
  rep.tangent_radius = terminal_disc(dom, tp.nearest, n).radius;
  PathSpec path;
  path.terminal_normal = true;
  path.anchor = tp.nearest;
  path.anchor_normal = n;
  for (int i = 0; i < num_scales; ++i) {
    const int k = options.first_scale + i;
    const PointCn p = target - (options.step0 * std::ldexp(1.0, -k)) * n;
    Lemma22Row row;
    row.k = k;
    row.d = boundary_distance(dom, p).d;
    const DistanceBound db = distance_upper(dom, base, p, path);
    row.bound = db.value;
    row.quadrature_error = db.quadrature_error;
    row.u = row.bound - 0.5 * std::log(1.0 / row.d);
    rep.rows.push_back(row);
  }
  rep.c_fit = -std::numeric_limits<double>::infinity();
  for (const auto& r : rep.rows) rep.c_fit = std::max(rep.c_fit, r.u);

  const std::size_t tail = std::max<std::size_t>(3, rep.rows.size() / 3);
  const std::size_t start = rep.rows.size() - tail;
  double mk = 0.0, mu = 0.0;
  for (std::size_t i = start; i < rep.rows.size(); ++i) {
    mk += rep.rows[i].k;
    mu += rep.rows[i].u;
  }
  mk /= static_cast<double>(tail);
  mu /= static_cast<double>(tail);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = start; i < rep.rows.size(); ++i) {
    sxy += (rep.rows[i].k - mk) * (rep.rows[i].u - mu);
    sxx += (rep.rows[i].k - mk) * (rep.rows[i].k - mk);
  }
  rep.tail_slope = sxy / sxx;
  rep.bounded = std::isfinite(rep.c_fit) && rep.tail_slope <= options.slope_tol;
  return rep;
}

Complex slit_disc_map(double r, Complex z) {
  if (!(r > 0.0 && r < 1.0)) throw ConfigError("slit_disc_map: need 0 < r < 1");
  if (!(std::abs(z) < 1.0) || (z.imag() == 0.0 && z.real() >= r)) {
    throw DomainError("slit_disc_map: point not in the slit disc");
  }
  // h(z) = z/(1+z)^2 maps the slit disc onto C \ [h(r), inf); rescale so the
  // slit starts at 1/4 and pull back with the root of modulus < 1.
  auto h = [](Complex w) { return w / ((1.0 + w) * (1.0 + w)); };
  const Complex s = h(z) / (4.0 * h(Complex(r)));
  if (s == Complex(0.0)) return 0.0;
  return 2.0 * s / ((1.0 - 2.0 * s) + std::sqrt(1.0 - 4.0 * s));
}

double slit_disc_kobayashi(double r, Complex z) { return std::atanh(std::abs(slit_disc_map(r, z))); }

MonotonicityReport inclusion_monotonicity_check(const InnerDomain& inner, std::size_t pairs, std::uint64_t seed) {
  MonotonicityReport rep;
  Rng rng(seed);
  auto add = [&](const PointCn& z, double value, bool exact) {
    MonotonicityRow row;
    row.z = z;
    const double t = z.norm();
    if (!(t < 1.0)) throw ConfigError("inclusion_monotonicity_check: inner domain leaves the unit ball");
    row.ball_formula = kobayashi_ball_radial(t);
    row.inner_value = value;
    row.exact = exact;
    row.margin = value - row.ball_formula;
    if (exact && row.margin < -1e-12) ++rep.violations;
    if (!exact && row.margin < 0.0) {
      row.flagged = true;
      ++rep.flagged;
    }
    rep.rows.push_back(row);
  };

  if (const auto* b = std::get_if<BallOracle>(&inner)) {
    if (!(b->radius > 0.0 && b->radius <= 1.0)) throw ConfigError("inclusion_monotonicity_check: need 0 < R <= 1");
    for (std::size_t i = 0; i < pairs; ++i) {
      const PointCn z = rng.ball(b->dim, b->radius);
      const double t = z.norm();
      add(z, 0.5 * std::log((b->radius + t) / (b->radius - t)), true);
    }
  } else if (const auto* s = std::get_if<SlitDiscOracle>(&inner)) {
    while (rep.rows.size() < pairs) {
      const PointCn z = rng.ball(1);
      if (std::abs(z[0].imag()) < 1e-12 && z[0].real() >= s->r) continue;
      add(z, slit_disc_kobayashi(s->r, z[0]), true);
    }
  } else {
    const auto& dom = std::get<Domain>(inner);
    const PointCn origin = PointCn::Zero(dimension(dom));
    if (!contains(dom, origin)) throw ConfigError("inclusion_monotonicity_check: 0 must lie in the inner domain");
    for (const PointCn& z : interior_samples(dom, pairs, seed)) {
      add(z, distance_upper(dom, origin, z).value, false);
    }
  }
  return rep;
}

std::vector<ChainLine> lemma24_chain(const KobayashiConstant& c, double d, std::optional<double> distance_to_p) {
  const double e2c = std::exp(2.0 * c.value());
  if (!(d > 0.0 && d < e2c)) throw ConfigError("lemma24_chain: need 0 < d < e^{2C}");
  const double x = d / e2c;
  const double t = 1.0 - x;
  std::vector<ChainLine> out;
  auto eq = [&](std::string label, double lhs, double rhs, double tol) {
    const double m = tol * std::max(1.0, std::abs(rhs)) - std::abs(lhs - rhs);
    out.push_back({std::move(label), "=", lhs, rhs, m, m >= 0.0});
  };
  auto ge = [&](std::string label, std::string rel, double lhs, double rhs) {
    const double m = lhs - rhs;
    out.push_back({std::move(label), rel, lhs, rhs, m, rel == ">" ? m > 0.0 : m >= 0.0});
  };
  const double ball = kobayashi_ball_radial(t);
  const double rewrite = 0.5 * std::log((2.0 - x) / x);
  // 1 - t carries the rounding of t, so the first rewrite is compared loosely.
  eq("1/2 log((1+|z|)/(1-|z|)) = 1/2 log((2 - d/e^{2C}) / (d/e^{2C}))", ball, rewrite, 1e-9);
  ge("1/2 log((2 - d/e^{2C}) / (d/e^{2C})) > 1/2 log(e^{2C}/d)", ">", rewrite, 0.5 * std::log(e2c / d));
  eq("1/2 log(e^{2C}/d) = 1/2 log(1/d) + C", 0.5 * std::log(e2c / d), 0.5 * std::log(1.0 / d) + c.value(), 1e-12);
  if (distance_to_p) {
    ge("1/2 log(1/d) + C >= d_K(0, p)", ">=", 0.5 * std::log(1.0 / d) + c.value(), *distance_to_p);
  }
  return out;
}

}  // namespace squeeze
