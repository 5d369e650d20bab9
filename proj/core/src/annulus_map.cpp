#include "squeeze/annulus_map.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "squeeze/errors.hpp"

namespace squeeze {

namespace {

constexpr double kPi = std::numbers::pi;

// d/dt of a periodic real sequence sampled at 2 pi j / n.
std::vector<double> spectral_derivative(const std::vector<double>& f) {
  const std::size_t n = f.size();
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, f);
  for (std::size_t k = 0; k < n; ++k) {
    double freq = static_cast<double>(k);
    if (2 * k > n) freq -= static_cast<double>(n);
    if (2 * k == n) freq = 0.0;
    spec[k] *= Complex(0.0, freq);
  }
  std::vector<std::complex<double>> out;
  fft.inv(out, spec);
  std::vector<double> d(n);
  for (std::size_t k = 0; k < n; ++k) d[k] = out[k].real();
  return d;
}

Complex hole_interior_point(const ClosedCurve& hole) {
  // Area centroid of the polyline; fall back to the vertex mean.
  const auto v = hole.vertices();
  double a = 0.0;
  Complex c = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Complex p = v[i], q = v[(i + 1) % v.size()];
    const double cr = p.real() * q.imag() - p.imag() * q.real();
    a += cr;
    c += cr * (p + q);
  }
  Complex z1 = c / (3.0 * a);
  if (hole.winding_number(z1) == 0) {
    z1 = 0.0;
    for (Complex p : v) z1 += p;
    z1 /= static_cast<double>(v.size());
  }
  if (hole.winding_number(z1) == 0) throw ConfigError("AnnulusMap: could not find a point inside the hole");
  return z1;
}

}  // namespace

AnnulusMap::AnnulusMap(const PlanarDomain& dom, std::size_t nodes_per_curve) : dom_(dom), n_(nodes_per_curve) {
  if (dom.connectivity() != 2) {
    std::ostringstream os;
    os << "AnnulusMap: need a ring domain (connectivity 2), got connectivity " << dom.connectivity();
    throw ConfigError(os.str());
  }
  if (n_ < 16 || (n_ & (n_ - 1)) != 0) throw ConfigError("AnnulusMap: nodes per curve must be a power of two >= 16");

  z1_ = hole_interior_point(dom.holes()[0]);
  scale_ = dom.outer().extent();
  const std::size_t total = 2 * n_;
  const double h = 2.0 * kPi / static_cast<double>(n_);
  zeta_.resize(total);
  dzeta_.resize(total);
  weight_.resize(total);
  data_.resize(total);
  std::vector<Complex> ddzeta(total);
  for (std::size_t c = 0; c < 2; ++c) {
    const ClosedCurve& curve = dom.boundary(c);
    for (std::size_t j = 0; j < n_; ++j) {
      const CurveSample s = curve.eval(h * static_cast<double>(j));
      const std::size_t k = c * n_ + j;
      zeta_[k] = s.z;
      dzeta_[k] = s.dz;
      ddzeta[k] = s.ddz;
      weight_[k] = s.dz * h;
      data_[k] = c == 0 ? 1.0 : 0.0;
    }
  }

  // Unknowns: density mu (total) and A.
  const auto dim = static_cast<Eigen::Index>(total + 1);
  Eigen::MatrixXd m(dim, dim);
  Eigen::VectorXd rhs(dim);
  for (std::size_t k = 0; k < total; ++k) {
    const auto row = static_cast<Eigen::Index>(k);
    for (std::size_t j = 0; j < total; ++j) {
      double kij;
      if (j == k) {
        kij = (h / (2.0 * kPi)) * (ddzeta[k] / (2.0 * dzeta_[k])).imag();
      } else {
        kij = (1.0 / (2.0 * kPi)) * (weight_[j] / (zeta_[j] - zeta_[k])).imag();
      }
      m(row, static_cast<Eigen::Index>(j)) = kij;
    }
    m(row, row) += 0.5;
    m(row, dim - 1) = std::log(std::abs(zeta_[k] - z1_));
    rhs[row] = data_[k];
  }
  // Side condition: zero mean density on the hole.
  for (std::size_t j = 0; j < total; ++j) {
    m(dim - 1, static_cast<Eigen::Index>(j)) = j >= n_ ? std::abs(dzeta_[j]) * h : 0.0;
  }
  m(dim - 1, dim - 1) = 0.0;
  rhs[dim - 1] = 0.0;

  const Eigen::VectorXd sol = m.partialPivLu().solve(rhs);
  a_ = sol[dim - 1];
  if (!std::isfinite(a_) || !(a_ > 0.0)) {
    std::ostringstream os;
    os << "AnnulusMap: solve gave flux constant A = " << a_ << " (expected > 0)";
    throw ConvergenceError(os.str());
  }
  modulus_ = std::exp(-1.0 / a_);

  // Boundary values of Phi (interior limit).
  phi_.resize(total);
  for (std::size_t c = 0; c < 2; ++c) {
    std::vector<double> mu(n_);
    for (std::size_t j = 0; j < n_; ++j) mu[j] = sol[static_cast<Eigen::Index>(c * n_ + j)];
    const std::vector<double> dmu = spectral_derivative(mu);
    for (std::size_t j = 0; j < n_; ++j) {
      const std::size_t k = c * n_ + j;
      Complex s = dmu[j] * h;
      for (std::size_t i = 0; i < total; ++i) {
        if (i == k) continue;
        s += (sol[static_cast<Eigen::Index>(i)] - mu[j]) * weight_[i] / (zeta_[i] - zeta_[k]);
      }
      phi_[k] = mu[j] + s / Complex(0.0, 2.0 * kPi);
    }
  }
  residual_ = 0.0;
  for (std::size_t k = 0; k < total; ++k) {
    const double u = phi_[k].real() + a_ * std::log(std::abs(zeta_[k] - z1_));
    residual_ = std::max(residual_, std::abs(u - data_[k]));
  }

  // Newton starting table: nodes pushed inward at a few depths.
  for (double depth : {0.02, 0.1, 0.3}) {
    for (std::size_t k = 0; k < total; k += 4) {
      const Complex inward = Complex(0.0, 1.0) * dzeta_[k] / std::abs(dzeta_[k]);
      const Complex z = zeta_[k] + depth * scale_ * 0.25 * inward;
      if (classify(dom, point({z})) != Containment::inside) continue;
      table_.emplace_back(z, forward(z));
    }
  }
}

double AnnulusMap::period() const { return 2.0 * kPi * a_; }

AnnulusMap::Local AnnulusMap::local(Complex z) const {
  Local out;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < zeta_.size(); ++j) {
    const double d = std::norm(zeta_[j] - z);
    if (d < best) {
      best = d;
      out.m = j;
    }
  }
  if (best == 0.0) return out;
  // Barycentric Cauchy formula relative to the nearest node.
  Complex num = 0.0, den = 0.0;
  const Complex pm = phi_[out.m];
  for (std::size_t j = 0; j < zeta_.size(); ++j) {
    const Complex q = weight_[j] / (zeta_[j] - z);
    num += (phi_[j] - pm) * q;
    den += q;
  }
  out.dphi = num / den;
  return out;
}

double AnnulusMap::log_modulus(Complex z) const {
  const Local l = local(z);
  const Complex a = z - z1_;
  const Complex b = zeta_[l.m] - z1_;
  // log(|a|/|b|) via |a|^2 - |b|^2 = Re((a - b) conj(a + b)).
  const double lr = 0.5 * std::log1p(((z - zeta_[l.m]) * std::conj(a + b)).real() / std::norm(b));
  return (data_[l.m] - 1.0 + l.dphi.real() + a_ * lr) / a_;
}

double AnnulusMap::harmonic_measure(Complex z) const { return 1.0 + a_ * log_modulus(z); }

double AnnulusMap::deficit(Complex z) const { return -std::expm1(log_modulus(z)); }

Complex AnnulusMap::forward(Complex z) const {
  const Local l = local(z);
  const Complex a = z - z1_;
  const Complex b = zeta_[l.m] - z1_;
  const double lr = 0.5 * std::log1p(((z - zeta_[l.m]) * std::conj(a + b)).real() / std::norm(b));
  const double logw = (data_[l.m] - 1.0 + l.dphi.real() + a_ * lr) / a_;
  const double arg = std::arg(a) + (phi_[l.m] + l.dphi).imag() / a_;
  return std::polar(std::exp(logw), arg);
}

Complex AnnulusMap::backward(Complex w) const {
  const double r = std::abs(w);
  if (!(r > modulus_ && r < 1.0)) {
    std::ostringstream os;
    os << "AnnulusMap::backward: |w| = " << r << " outside (" << modulus_ << ", 1)";
    throw DomainError(os.str());
  }
  Complex z = table_.front().first;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [zz, ww] : table_) {
    const double d = std::abs(ww - w);
    if (d < best) {
      best = d;
      z = zz;
    }
  }
  Complex fz = forward(z);
  double res = std::abs(fz - w);
  for (int it = 0; it < 100 && res > 1e-14; ++it) {
    const double hstep = 1e-7 * scale_;
    const Complex deriv = (forward(z + hstep) - forward(z - hstep)) / (2.0 * hstep);
    Complex step = (fz - w) / deriv;
    bool moved = false;
    for (int back = 0; back < 40; ++back) {
      const Complex cand = z - step;
      if (classify(dom_, point({cand})) == Containment::inside) {
        const Complex fc = forward(cand);
        const double rc = std::abs(fc - w);
        if (rc < res) {
          z = cand;
          fz = fc;
          res = rc;
          moved = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  if (res > 1e-9) {
    std::ostringstream os;
    os << "AnnulusMap::backward: Newton stalled with residual " << res;
    throw ConvergenceError(os.str());
  }
  return z;
}

}  // namespace squeeze
