#include "squeeze/squeezing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "squeeze/errors.hpp"
#include "squeeze/random.hpp"

namespace squeeze {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

nlohmann::json point_json(const PointCn& z) {
  auto a = nlohmann::json::array();
  for (Eigen::Index k = 0; k < z.size(); ++k) a.push_back(complex_json(z[k]));
  return a;
}

struct ImageMin {
  double sampled = std::numeric_limits<double>::infinity();
  double refined = std::numeric_limits<double>::infinity();
  std::size_t count = 0;
  nlohmann::json where;
};

ImageMin planar_image_min(const PlanarDomain& dom, const std::function<double(Complex)>& norm_at,
                          const BoundaryImageOptions& opt) {
  ImageMin out;
  for (std::size_t c = 0; c < dom.boundary_count(); ++c) {
    const ClosedCurve& curve = dom.boundary(c);
    // Adaptive polyline parameters plus a uniform grid.
    std::vector<double> ts(curve.params().begin(), curve.params().end());
    for (std::size_t j = 0; j < opt.samples; ++j) ts.push_back(kTwoPi * static_cast<double>(j) / static_cast<double>(opt.samples));
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    std::size_t best = 0;
    double bv = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < ts.size(); ++j) {
      const double v = norm_at(curve.at(ts[j]));
      if (v < bv) {
        bv = v;
        best = j;
      }
    }
    out.count += ts.size();
    double rv = bv, rt = ts[best];
    if (opt.refine) {
      const double lo = best == 0 ? ts.back() - kTwoPi : ts[best - 1];
      const double hi = best + 1 == ts.size() ? ts.front() + kTwoPi : ts[best + 1];
      const auto g = [&](double t) { return norm_at(curve.at(std::fmod(t + kTwoPi, kTwoPi))); };
      const auto [t, v] = boost::math::tools::brent_find_minima(g, lo, hi, 52);
      if (v < rv) {
        rv = v;
        rt = std::fmod(t + kTwoPi, kTwoPi);
      }
    }
    if (bv < out.sampled) out.sampled = bv;
    if (rv < out.refined) {
      out.refined = rv;
      out.where = {{"component", c}, {"param", rt}, {"point", complex_json(curve.at(rt))}};
    }
  }
  return out;
}

ImageMin sphere_image_min(const DefiningFunctionDomain& dom, const std::function<double(const PointCn&)>& norm_at,
                          const BoundaryImageOptions& opt) {
  ImageMin out;
  const Eigen::Index n = dom.dim();
  std::vector<PointCn> dirs;
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Complex s : {Complex(1, 0), Complex(-1, 0), Complex(0, 1), Complex(0, -1)}) {
      PointCn u = PointCn::Zero(n);
      u[k] = s;
      dirs.push_back(u);
    }
  }
  Rng rng(opt.seed);
  for (std::size_t j = 0; j < opt.samples; ++j) dirs.push_back(rng.sphere(n));
  PointCn bu = dirs.front();
  for (const PointCn& u : dirs) {
    const double v = norm_at(dom.radial_boundary_point(u));
    if (v < out.sampled) {
      out.sampled = v;
      bu = u;
    }
  }
  out.count = dirs.size();
  out.refined = out.sampled;
  if (opt.refine) {
    // Compass search over the 2n real directions, step halved on failure.
    double step = 0.25;
    while (step > 1e-10) {
      bool moved = false;
      for (Eigen::Index k = 0; k < n && !moved; ++k) {
        for (Complex s : {Complex(1, 0), Complex(-1, 0), Complex(0, 1), Complex(0, -1)}) {
          PointCn u = bu;
          u[k] += step * s;
          u /= u.norm();
          const double v = norm_at(dom.radial_boundary_point(u));
          if (v < out.refined) {
            out.refined = v;
            bu = u;
            moved = true;
            break;
          }
        }
      }
      if (!moved) step *= 0.5;
    }
  }
  out.where = {{"direction", point_json(bu)}, {"point", point_json(dom.radial_boundary_point(bu))}};
  return out;
}

}  // namespace

InjectivityCertificate certify_embedding(const Domain& dom, const EmbeddingMap& f, std::size_t samples,
                                         std::uint64_t seed) {
  if (!f.forward) throw ConfigError("certify_embedding: embedding '" + f.name + "' has no forward map");
  const auto pts = interior_samples(dom, samples, seed);
  std::vector<PointCn> img;
  img.reserve(pts.size());
  InjectivityCertificate cert;
  cert.samples = pts.size();
  cert.min_separation = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) {
    img.push_back(f.forward(p));
    cert.max_image_norm = std::max(cert.max_image_norm, img.back().norm());
  }
  for (std::size_t i = 0; i < img.size(); ++i) {
    for (std::size_t j = i + 1; j < img.size(); ++j) {
      cert.min_separation = std::min(cert.min_separation, (img[i] - img[j]).norm());
    }
  }
  if (img.size() < 2) cert.min_separation = 0.0;
  return cert;
}

EmbeddingMap make_embedding(const Domain& dom, std::string name, std::function<PointCn(const PointCn&)> forward,
                            nlohmann::json params, std::size_t cert_samples) {
  EmbeddingMap f{std::move(name), std::move(forward), std::move(params), std::nullopt};
  f.certificate = certify_embedding(dom, f, cert_samples);
  return f;
}

SqueezeBound squeeze_lower_from_embedding(const Domain& dom, const PointCn& z, const EmbeddingMap& f,
                                          const BoundaryImageOptions& options) {
  if (!f.certificate) throw ConfigError("squeeze_lower_from_embedding: '" + f.name + "' has no injectivity certificate");
  if (!f.certificate->ok()) {
    std::ostringstream os;
    os << "squeeze_lower_from_embedding: certificate of '" << f.name << "' fails (min separation "
       << f.certificate->min_separation << ", max image norm " << f.certificate->max_image_norm << ")";
    throw ConfigError(os.str());
  }
  if (classify(dom, z) != Containment::inside) throw DomainError("squeeze_lower_from_embedding: point is not inside the domain");
  const PointCn fz = f.forward(z);
  if (!(fz.norm() < 1.0)) throw DomainError("squeeze_lower_from_embedding: f(z) is not in the open unit ball");
  const BallAutomorphism t = BallAutomorphism::centering(fz);

  ImageMin m;
  if (const auto* pd = std::get_if<PlanarDomain>(&dom)) {
    m = planar_image_min(*pd, [&](Complex b) { return t.eval(f.forward(point({b}))).norm(); }, options);
  } else {
    m = sphere_image_min(std::get<DefiningFunctionDomain>(dom),
                         [&](const PointCn& b) { return t.eval(f.forward(b)).norm(); }, options);
  }
  SqueezeBound out;
  out.at = z;
  out.resolution_margin = std::abs(m.sampled - m.refined);
  out.lower = std::clamp(std::min(m.sampled, m.refined) - out.resolution_margin, 0.0, 1.0);
  out.deficit = 1.0 - out.lower;
  out.certificate = "sampled";
  out.witness = {{"map", f.name},
                 {"params", f.params},
                 {"normalization", {{"r", t.r}, {"image_of_point", point_json(fz)}}},
                 {"boundary_samples", m.count},
                 {"sampled_min", m.sampled},
                 {"refined_min", m.refined},
                 {"argmin", m.where}};
  return out;
}

AnnulusFamilyValue annulus_inclusion(double r, double s) {
  // 1 - (|w| - r)/(1 - r|w|) = (1 + r) s / (1 - r|w|)
  const double w = 1.0 - s;
  const double def = (1.0 + r) * s / (1.0 - r * w);
  return {(w - r) / (1.0 - r * w), def};
}

AnnulusFamilyValue annulus_inversion(double r, double s) {
  const double w = 1.0 - s;
  const double den = w - r * r;
  const double t = w - r;
  return {r * s / den, (1.0 + r) * t / den};
}

SqueezeBound annulus_squeeze_lower_deficit(double r, double s) {
  if (!(r > 0.0 && r < 1.0)) throw ConfigError("annulus_squeeze_lower: modulus must lie in (0, 1)");
  if (!(s > 0.0 && 1.0 - s > r)) {
    std::ostringstream os;
    os << "annulus_squeeze_lower: |w| = " << 1.0 - s << " outside (" << r << ", 1)";
    throw DomainError(os.str());
  }
  const auto inc = annulus_inclusion(r, s);
  const auto inv = annulus_inversion(r, s);
  const bool use_inc = inc.lower >= inv.lower;
  SqueezeBound out;
  out.lower = use_inc ? inc.lower : inv.lower;
  out.deficit = use_inc ? inc.deficit : inv.deficit;
  out.certificate = "closed-form";
  out.witness = {{"map", "standard-annulus"},
                 {"modulus", r},
                 {"abs_w", 1.0 - s},
                 {"one_minus_abs_w", s},
                 {"family", use_inc ? "inclusion" : "inversion"},
                 {"inclusion", inc.lower},
                 {"inversion", inv.lower}};
  return out;
}

SqueezeBound annulus_squeeze_lower(double r, Complex w) {
  SqueezeBound out = annulus_squeeze_lower_deficit(r, 1.0 - std::abs(w));
  out.at = point({w});
  out.witness["w"] = complex_json(w);
  return out;
}

std::shared_ptr<const AnnulusMap> canonical_annulus_map(const PlanarDomain& dom, std::size_t nodes_per_curve) {
  return std::make_shared<const AnnulusMap>(dom, nodes_per_curve);
}

SqueezeBound squeeze_lower_planar(const PlanarDomain& dom, Complex z, std::shared_ptr<const AnnulusMap> map) {
  const Domain d = dom;
  if (classify(d, point({z})) != Containment::inside) throw DomainError("squeeze_lower_planar: point is not inside the domain");
  if (dom.connectivity() == 1) {
    SqueezeBound out;
    out.at = point({z});
    out.lower = 1.0;
    out.deficit = 0.0;
    out.certificate = "symbolic";
    out.witness = {{"map", "riemann-map"}, {"connectivity", 1}};
    return out;
  }
  if (dom.connectivity() != 2) {
    std::ostringstream os;
    os << "squeeze_lower_planar: connectivity " << dom.connectivity() << " is not supported (1 or 2)";
    throw ConfigError(os.str());
  }
  if (!map) map = canonical_annulus_map(dom);
  const Complex w = map->forward(z);
  SqueezeBound out = annulus_squeeze_lower_deficit(map->modulus(), map->deficit(z));
  out.at = point({z});
  out.witness["w"] = complex_json(w);
  out.witness["map"] = "canonical-annulus";
  out.witness["solver"] = map->solver();
  out.witness["nodes_per_curve"] = map->nodes_per_curve();
  out.witness["boundary_residual"] = map->boundary_residual();
  return out;
}

PipelineReport theorem21_pipeline(const Domain& dom, const std::vector<PipelineStage>& stages,
                                  const KobayashiConstant& c, const BoundaryImageOptions& options) {
  PipelineReport rep;
  rep.domain = domain_name(dom);
  rep.c = c.value();
  const double kp = confinement_constant(c, Confinement::proved);
  const PointCn origin = PointCn::Zero(dimension(dom));
  if (classify(dom, origin) != Containment::inside) throw ConfigError("theorem21_pipeline: the origin must lie in the domain");
  rep.confinement_ok = rep.lemma25_stated_ok = rep.lemma25_proved_ok = rep.trend_ok = true;
  int index = 0;
  for (const auto& st : stages) {
    ++index;
    if (!st.phi.certificate || !st.phi.certificate->ok()) {
      throw ConfigError("theorem21_pipeline: stage " + std::to_string(index) + " lacks a passing injectivity certificate");
    }
    const double at_p = st.phi.forward(st.p).norm();
    if (at_p > 1e-12) {
      std::ostringstream os;
      os << "theorem21_pipeline: stage " << index << " has |Phi(p)| = " << at_p << " (must vanish)";
      throw ConfigError(os.str());
    }
    PipelineRow row;
    row.index = index;
    row.d = boundary_distance(dom, st.p).d;
    const SqueezeBound sp = squeeze_lower_from_embedding(dom, st.p, st.phi, options);
    row.inscribed_phi = sp.lower;
    row.eps = std::max(0.0, sp.deficit) / row.d;
    row.r = st.phi.forward(origin).norm();
    row.confinement_radius = 1.0 - row.d / kp;
    row.confinement_margin = row.confinement_radius - row.r;
    row.stated_radius = 1.0 - row.d / c.value();
    row.stated_margin = row.stated_radius - row.r;

    // F = Psi_r o U o Phi; the normalisation inside squeeze_lower_from_embedding
    // at the origin is exactly this composition.
    row.inscribed_f = squeeze_lower_from_embedding(dom, origin, st.phi, options).lower;
    const BallAutomorphism norm = BallAutomorphism::centering(st.phi.forward(origin));
    EmbeddingMap f{"F_" + std::to_string(index), [phi = st.phi.forward, norm](const PointCn& z) { return norm.eval(phi(z)); },
                   {{"r", norm.r}, {"phi", st.phi.name}}, st.phi.certificate};
    f.certificate = certify_embedding(dom, f, st.phi.certificate->samples);
    row.inscribed_f_direct = squeeze_lower_from_embedding(dom, origin, f, options).lower;

    row.target_stated = 1.0 - 6.0 * c.value() * row.eps;
    row.margin_stated = row.inscribed_f - row.target_stated;
    row.target_proved = 1.0 - 6.0 * kp * row.eps;
    row.margin_proved = row.inscribed_f - row.target_proved;
    if (row.eps * kp > 1.0 / 18.0) {
      std::ostringstream os;
      os << "stage " << index << ": eps e^{2C} = " << row.eps * kp << " exceeds 1/18";
      rep.warnings.push_back(os.str());
    }
    rep.confinement_ok = rep.confinement_ok && row.confinement_margin >= 0.0;
    rep.lemma25_stated_ok = rep.lemma25_stated_ok && row.margin_stated >= 0.0;
    rep.lemma25_proved_ok = rep.lemma25_proved_ok && row.margin_proved >= 0.0;
    if (!rep.rows.empty() && row.inscribed_f < rep.rows.back().inscribed_f - 1e-9) rep.trend_ok = false;
    rep.rows.push_back(row);
  }
  if (rep.rows.empty()) rep.trend_ok = false;
  return rep;
}

std::vector<PipelineStage> ball_pipeline_stages(const Domain& ball, int count) {
  const Eigen::Index n = dimension(ball);
  std::vector<PipelineStage> out;
  for (int i = 1; i <= count; ++i) {
    PointCn p = PointCn::Zero(n);
    p[0] = 1.0 - std::ldexp(1.0, -i);
    const BallAutomorphism a = BallAutomorphism::centering(p);
    out.push_back({make_embedding(ball, "ball-automorphism", [a](const PointCn& z) { return a.eval(z); },
                                  {{"p1", p[0].real()}}),
                   p});
  }
  return out;
}

std::vector<PipelineStage> ellipsoid_pipeline_stages(const Domain& ellipsoid, int first, int count) {
  const auto* dd = std::get_if<DefiningFunctionDomain>(&ellipsoid);
  if (dd == nullptr || dd->axes().empty()) throw ConfigError("ellipsoid_pipeline_stages: need an ellipsoid domain");
  if (dd->interior_witness().norm() != 0.0) throw ConfigError("ellipsoid_pipeline_stages: ellipsoid must be centered at 0");
  const std::vector<double> axes = dd->axes();
  std::vector<PipelineStage> out;
  for (int i = first; i < first + count; ++i) {
    const double delta = std::ldexp(1.0, -i);
    const double lambda = 1.0 - delta * delta * delta;
    const double r = lambda * (1.0 - delta);
    PointCn p = PointCn::Zero(static_cast<Eigen::Index>(axes.size()));
    p[0] = axes[0] * (1.0 - delta);
    auto phi = [axes, lambda, r](const PointCn& z) {
      PointCn y(z.size());
      for (Eigen::Index k = 0; k < z.size(); ++k) y[k] = lambda * z[k] / axes[static_cast<std::size_t>(k)];
      return psi_eval(r, y);
    };
    out.push_back({make_embedding(ellipsoid, "scaled-ellipsoid-moebius", phi,
                                  {{"delta", delta}, {"lambda", lambda}, {"r", r}}),
                   p});
  }
  return out;
}

}  // namespace squeeze
