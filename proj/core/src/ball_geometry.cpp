#include "squeeze/ball_geometry.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "squeeze/errors.hpp"
#include "squeeze/random.hpp"

namespace squeeze {

namespace {

void require_open_ball(const PointCn& z, const char* what) {
  if (!z.allFinite()) {
    throw DomainError(std::string(what) + ": non-finite coordinate");
  }
  const double n = z.norm();
  if (!(n < 1.0)) {
    std::ostringstream os;
    os << what << ": point with norm " << n << " is not in the open unit ball";
    throw DomainError(os.str());
  }
}

void require_parameter(double r) {
  if (!(r >= 0.0 && r < 1.0)) {
    std::ostringstream os;
    os << "Moebius parameter r = " << r << " outside [0, 1)";
    throw DomainError(os.str());
  }
}

}  // namespace

PointCn point(std::initializer_list<Complex> coords) {
  PointCn p(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index k = 0;
  for (const Complex& c : coords) p[k++] = c;
  return p;
}

KobayashiConstant::KobayashiConstant(double value) : value_(value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError("Kobayashi constant must be positive and finite");
  }
}

PointCn psi_eval(double r, const PointCn& z) {
  const Complex den = 1.0 - z[0] * r;
  const double s = std::sqrt((1.0 - r) * (1.0 + r));
  PointCn w(z.size());
  w[0] = (z[0] - r) / den;
  for (Eigen::Index k = 1; k < z.size(); ++k) w[k] = s * z[k] / den;
  return w;
}

PointCn psi_apply(double r, const PointCn& z) {
  require_parameter(r);
  require_open_ball(z, "psi_apply");
  return psi_eval(r, z);
}

PointCn psi_invert(double r, const PointCn& w) {
  require_parameter(r);
  require_open_ball(w, "psi_invert");
  return psi_eval(-r, w);
}

UnitaryMatrix unitary_align(const PointCn& p) {
  const Eigen::Index n = p.size();
  const double norm = p.norm();
  if (n == 0 || !(norm > 0.0)) {
    throw DomainError("unitary_align: zero vector has no direction to align");
  }
  const Complex phase = std::abs(p[0]) > 0.0 ? p[0] / std::abs(p[0]) : Complex(1.0);

  // Householder reflection H p = -phase |p| e1, followed by a phase fix on the
  // first row.
  PointCn v = p;
  v[0] += phase * norm;
  const double vv = v.squaredNorm();
  UnitaryMatrix u = UnitaryMatrix::Identity(n, n) - (2.0 / vv) * (v * v.adjoint());
  u.row(0) *= -std::conj(phase);
  return u;
}

bool is_unitary(const UnitaryMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  const UnitaryMatrix prod = u * u.adjoint();
  return (prod - UnitaryMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

BallAutomorphism BallAutomorphism::identity(Eigen::Index n) {
  return {0.0, UnitaryMatrix::Identity(n, n)};
}

BallAutomorphism BallAutomorphism::centering(const PointCn& a) {
  require_open_ball(a, "BallAutomorphism::centering");
  const double r = a.norm();
  if (r == 0.0) return identity(a.size());
  return {r, unitary_align(a)};
}

PointCn BallAutomorphism::apply(const PointCn& z) const {
  require_open_ball(z, "BallAutomorphism::apply");
  return psi_eval(r, align * z);
}

PointCn BallAutomorphism::eval(const PointCn& z) const { return psi_eval(r, align * z); }

PointCn BallAutomorphism::invert(const PointCn& w) const {
  require_open_ball(w, "BallAutomorphism::invert");
  return align.adjoint() * psi_eval(-r, w);
}

double kobayashi_ball_radial(double t) { return std::atanh(t); }

double kobayashi_ball(const PointCn& z, const PointCn& w) {
  require_open_ball(z, "kobayashi_ball");
  require_open_ball(w, "kobayashi_ball");
  if (z.size() != w.size()) throw DomainError("kobayashi_ball: dimension mismatch");
  if (w.norm() == 0.0) return kobayashi_ball_radial(z.norm());
  const BallAutomorphism move = BallAutomorphism::centering(w);
  return kobayashi_ball_radial(move.eval(z).norm());
}

NormIdentity norm_psi_identity(double r, const PointCn& z) {
  const PointCn w = psi_apply(r, z);
  const double den = std::norm(1.0 - z[0] * r);
  return {w.squaredNorm(), 1.0 - (1.0 - r * r) * (1.0 - z.squaredNorm()) / den};
}

double confinement_constant(const KobayashiConstant& c, Confinement form) {
  return form == Confinement::stated ? c.value() : std::exp(2.0 * c.value());
}

double confinement_radius(const KobayashiConstant& c, double d, Confinement form) {
  return 1.0 - d / confinement_constant(c, form);
}

SphereImageStats sphere_image_min(double r, double eps, double d, std::size_t samples,
                                  Eigen::Index dim, std::uint64_t seed) {
  SphereImageStats out;
  out.sphere_radius = 1.0 - 2.0 * eps * d;
  out.min_norm = std::numeric_limits<double>::infinity();

  auto visit = [&](const PointCn& z) {
    const PointCn w = psi_eval(r, z);
    const double n2 = w.squaredNorm();
    if (n2 < out.min_norm_sq || out.samples == 0) {
      out.min_norm_sq = n2;
      out.min_norm = std::sqrt(n2);
      out.argmin = z;
    }
    ++out.samples;
  };

  PointCn axis = PointCn::Zero(dim);
  axis[0] = out.sphere_radius;
  visit(axis);

  Rng rng(seed);
  for (std::size_t i = 1; i < samples; ++i) visit(rng.sphere(dim) * out.sphere_radius);
  return out;
}

Lemma25Report lemma25_bound(const KobayashiConstant& c, double eps, double d, double r,
                            std::size_t sphere_samples, const Lemma25Options& options) {
  const double k = confinement_constant(c, options.confinement);
  std::ostringstream err;
  if (!(eps > 0.0) || !(d > 0.0)) err << "eps and d must be positive; ";
  if (!(r >= 0.0)) err << "r must be nonnegative; ";
  if (!(r <= 1.0 - d / k)) err << "r = " << r << " exceeds confinement radius " << 1.0 - d / k << "; ";
  // a few ulps of slack so eps = 1/(18 K) itself is admissible
  if (!(eps * k <= (1.0 / 18.0) * (1.0 + 8.0 * std::numeric_limits<double>::epsilon()))) err << "eps = " << eps << " exceeds 1/(18 K) = " << 1.0 / (18.0 * k) << "; ";
  if (!(1.0 - 2.0 * eps * d > 0.0)) err << "1 - 2 eps d must be positive; ";
  if (sphere_samples == 0) err << "need at least one sphere sample; ";
  if (options.dim < 1) err << "dimension must be >= 1; ";
  if (!err.str().empty()) throw ConfigError("lemma25_bound: " + err.str());

  Lemma25Report rep;
  rep.constant_k = k;
  rep.r = r;
  rep.eps = eps;
  rep.d = d;
  rep.target = 1.0 - 6.0 * k * eps;
  rep.intermediate = 1.0 - 10.0 * k * eps;
  rep.stats = sphere_image_min(r, eps, d, sphere_samples, options.dim, options.seed);
  rep.margin = rep.stats.min_norm - rep.target;
  rep.intermediate_margin = rep.stats.min_norm_sq - rep.intermediate;
  return rep;
}

}  // namespace squeeze
