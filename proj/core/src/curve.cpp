#include "squeeze/curve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

#include <boost/math/tools/minima.hpp>

#include "squeeze/errors.hpp"

namespace squeeze {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double t) {
  double w = std::fmod(t, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w;
}

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

double segment_distance(Complex p, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double s = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + s * ab));
}

int orientation(Complex a, Complex b, Complex c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

bool segments_cross(Complex a, Complex b, Complex c, Complex d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

}  // namespace

ClosedCurve::ClosedCurve(Parametrization param, const Sampling& sampling)
    : param_(std::make_shared<const Parametrization>(std::move(param))) {
  build(sampling);
}

void ClosedCurve::build(const Sampling& sampling) {
  if (sampling.base < 8) throw ConfigError("ClosedCurve: need at least 8 base samples");
  std::vector<double> seeds;
  seeds.reserve(sampling.base + sampling.focus.size() * (2 * sampling.focus_levels + 1));
  for (std::size_t j = 0; j < sampling.base; ++j) {
    seeds.push_back(kTwoPi * static_cast<double>(j) / static_cast<double>(sampling.base));
  }
  const double h = kTwoPi / static_cast<double>(sampling.base);
  for (double f : sampling.focus) {
    seeds.push_back(wrap(f));
    for (int j = 0; j < sampling.focus_levels; ++j) {
      const double off = std::ldexp(h, -j);
      seeds.push_back(wrap(f + off));
      seeds.push_back(wrap(f - off));
    }
  }
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  double scale = 0.0;
  for (double t : seeds) scale = std::max(scale, std::abs(at(t)));
  const double tol = sampling.chord_tol * std::max(scale, 1e-300);

  params_.clear();
  const std::size_t n = seeds.size();
  // Recursive midpoint refinement where the chord misses the curve; every
  // leaf interval contributes its left endpoint.
  auto refine = [&](auto&& self, double a, Complex za, double b, Complex zb, int depth) -> void {
    if (depth < sampling.max_depth) {
      const double m = 0.5 * (a + b);
      const Complex zm = at(wrap(m));
      if (std::abs(zm - 0.5 * (za + zb)) > tol) {
        self(self, a, za, m, zm, depth + 1);
        self(self, m, zm, b, zb, depth + 1);
        return;
      }
    }
    params_.push_back(a);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const double a = seeds[i];
    const double b = i + 1 < n ? seeds[i + 1] : seeds[0] + kTwoPi;
    refine(refine, a, at(a), b, at(wrap(b)), 0);
  }
  for (double& t : params_) t = wrap(t);
  std::sort(params_.begin(), params_.end());
  params_.erase(std::unique(params_.begin(), params_.end()), params_.end());

  vertices_.resize(params_.size());
  extent_ = 0.0;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    vertices_[i] = at(params_[i]);
    extent_ = std::max(extent_, std::abs(vertices_[i]));
  }
}

ClosedCurve ClosedCurve::circle(Complex center, double radius, bool counterclockwise,
                                const Sampling& sampling) {
  if (!(radius > 0.0)) throw ConfigError("circle radius must be positive");
  const double sgn = counterclockwise ? 1.0 : -1.0;
  return ClosedCurve(
      [center, radius, sgn](double t) {
        const Complex e = std::polar(1.0, sgn * t);
        return CurveSample{center + radius * e, Complex(0.0, sgn) * radius * e, -radius * e};
      },
      sampling);
}

ClosedCurve ClosedCurve::from_samples(std::span<const Complex> samples, const Sampling& sampling) {
  const std::size_t m = samples.size();
  if (m < 8) throw ConfigError("from_samples: need at least 8 samples");
  // Discrete Fourier coefficients, frequencies in (-m/2, m/2].
  struct Mode {
    double freq;
    Complex coeff;
  };
  auto modes = std::make_shared<std::vector<Mode>>();
  modes->reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    Complex c = 0.0;
    const Complex step = std::polar(1.0, -kTwoPi * static_cast<double>(k) / static_cast<double>(m));
    Complex e = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      c += samples[j] * e;
      e *= step;
      if ((j & 63) == 63) {  // re-anchor the recurrence
        e = std::polar(1.0, -kTwoPi * static_cast<double>(k) * static_cast<double>(j + 1) /
                                static_cast<double>(m));
      }
    }
    c /= static_cast<double>(m);
    double f = static_cast<double>(k);
    if (2 * k > m) f -= static_cast<double>(m);
    modes->push_back({f, c});
  }
  const bool even = m % 2 == 0;
  const double nyquist = static_cast<double>(m) / 2.0;
  return ClosedCurve(
      [modes, even, nyquist](double t) {
        CurveSample s{0.0, 0.0, 0.0};
        for (const Mode& md : *modes) {
          if (even && md.freq == nyquist) {
            const double c = std::cos(nyquist * t);
            const double sn = std::sin(nyquist * t);
            s.z += md.coeff * c;
            s.dz += md.coeff * (-nyquist * sn);
            s.ddz += md.coeff * (-nyquist * nyquist * c);
            continue;
          }
          const Complex e = std::polar(1.0, md.freq * t);
          s.z += md.coeff * e;
          s.dz += md.coeff * Complex(0.0, md.freq) * e;
          s.ddz += md.coeff * (-md.freq * md.freq) * e;
        }
        return s;
      },
      sampling);
}

ClosedCurve ClosedCurve::mapped(const HolomorphicMap& map, const Sampling& sampling) const {
  auto inner = param_;
  return ClosedCurve(
      [inner, map](double t) {
        const CurveSample s = (*inner)(t);
        const Complex d1 = map.df(s.z);
        return CurveSample{map.f(s.z), d1 * s.dz, map.ddf(s.z) * s.dz * s.dz + d1 * s.ddz};
      },
      sampling);
}

double ClosedCurve::signed_area() const {
  double a = 0.0;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) a += cross(vertices_[i], vertices_[(i + 1) % n]);
  return 0.5 * a;
}

double ClosedCurve::length() const {
  double len = 0.0;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) len += std::abs(vertices_[(i + 1) % n] - vertices_[i]);
  return len;
}

double ClosedCurve::polyline_distance(Complex z) const {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, segment_distance(z, vertices_[i], vertices_[(i + 1) % n]));
  }
  return best;
}

NearestPoint ClosedCurve::nearest(Complex z) const {
  const std::size_t n = vertices_.size();
  // Three best segments, distinct indices.
  std::array<std::pair<double, std::size_t>, 3> best;
  best.fill({std::numeric_limits<double>::infinity(), 0});
  for (std::size_t i = 0; i < n; ++i) {
    const double d = segment_distance(z, vertices_[i], vertices_[(i + 1) % n]);
    if (d < best[2].first) {
      best[2] = {d, i};
      std::sort(best.begin(), best.end());
    }
  }

  auto unwrapped = [&](std::ptrdiff_t i) {
    const auto nn = static_cast<std::ptrdiff_t>(n);
    std::ptrdiff_t q = i / nn;
    std::ptrdiff_t r = i % nn;
    if (r < 0) {
      r += nn;
      --q;
    }
    return params_[static_cast<std::size_t>(r)] + kTwoPi * static_cast<double>(q);
  };

  NearestPoint out;
  out.distance = std::numeric_limits<double>::infinity();
  for (const auto& [dist, idx] : best) {
    if (!std::isfinite(dist)) continue;
    const auto i = static_cast<std::ptrdiff_t>(idx);
    const double lo = unwrapped(i - 1);
    const double hi = unwrapped(i + 2);
    // Vertices first; Brent then improves within the bracket.
    for (std::ptrdiff_t j = i - 1; j <= i + 2; ++j) {
      const double t = unwrapped(j);
      const Complex p = at(wrap(t));
      const double d = std::abs(p - z);
      if (d < out.distance) out = {wrap(t), p, d};
    }
    const double width = hi - lo;
    auto objective = [&](double s) { return std::norm(at(wrap(lo + s * width)) - z); };
    std::uintmax_t iters = 200;
    const auto [s, f] = boost::math::tools::brent_find_minima(objective, 0.0, 1.0, 40, iters);
    const double d = std::sqrt(f);
    if (d < out.distance) {
      const double t = wrap(lo + s * width);
      out = {t, at(t), d};
    }
  }
  return out;
}

int ClosedCurve::winding_number(Complex z) const {
  int wn = 0;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Complex a = vertices_[i];
    const Complex b = vertices_[(i + 1) % n];
    if (a.imag() <= z.imag()) {
      if (b.imag() > z.imag() && cross(b - a, z - a) > 0.0) ++wn;
    } else {
      if (b.imag() <= z.imag() && cross(b - a, z - a) < 0.0) --wn;
    }
  }
  return wn;
}

std::vector<CurveSample> ClosedCurve::equispaced(std::size_t count) const {
  std::vector<CurveSample> out(count);
  for (std::size_t j = 0; j < count; ++j) {
    out[j] = eval(kTwoPi * static_cast<double>(j) / static_cast<double>(count));
  }
  return out;
}

bool polylines_intersect(const ClosedCurve& a, const ClosedCurve& b) {
  const bool same = &a == &b;
  const auto va = a.vertices();
  const auto vb = b.vertices();
  const std::size_t na = va.size();
  const std::size_t nb = vb.size();

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (auto span : {va, vb}) {
    for (Complex p : span) {
      xmin = std::min(xmin, p.real());
      xmax = std::max(xmax, p.real());
      ymin = std::min(ymin, p.imag());
      ymax = std::max(ymax, p.imag());
    }
  }
  const auto cells = static_cast<std::int64_t>(std::max<double>(1.0, std::sqrt(static_cast<double>(na + nb))));
  const double cw = std::max(xmax - xmin, 1e-300) / static_cast<double>(cells);
  const double ch = std::max(ymax - ymin, 1e-300) / static_cast<double>(cells);
  auto cell_range = [&](Complex p, Complex q) {
    auto cx = [&](double x) {
      return std::clamp<std::int64_t>(static_cast<std::int64_t>((x - xmin) / cw), 0, cells - 1);
    };
    auto cy = [&](double y) {
      return std::clamp<std::int64_t>(static_cast<std::int64_t>((y - ymin) / ch), 0, cells - 1);
    };
    return std::array<std::int64_t, 4>{cx(std::min(p.real(), q.real())), cx(std::max(p.real(), q.real())),
                                       cy(std::min(p.imag(), q.imag())), cy(std::max(p.imag(), q.imag()))};
  };

  std::unordered_map<std::int64_t, std::vector<std::size_t>> grid;
  for (std::size_t i = 0; i < nb; ++i) {
    const auto r = cell_range(vb[i], vb[(i + 1) % nb]);
    for (std::int64_t x = r[0]; x <= r[1]; ++x) {
      for (std::int64_t y = r[2]; y <= r[3]; ++y) grid[x * cells + y].push_back(i);
    }
  }
  for (std::size_t i = 0; i < na; ++i) {
    const Complex p = va[i];
    const Complex q = va[(i + 1) % na];
    const auto r = cell_range(p, q);
    for (std::int64_t x = r[0]; x <= r[1]; ++x) {
      for (std::int64_t y = r[2]; y <= r[3]; ++y) {
        auto it = grid.find(x * cells + y);
        if (it == grid.end()) continue;
        for (std::size_t j : it->second) {
          if (same) {
            if (j == i || (i + 1) % na == j || (j + 1) % na == i) continue;
          }
          if (segments_cross(p, q, vb[j], vb[(j + 1) % nb])) return true;
        }
      }
    }
  }
  return false;
}

}  // namespace squeeze
