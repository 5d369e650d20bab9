#include "squeeze/domain_spec.hpp"

#include <fstream>
#include <sstream>

#include "squeeze/errors.hpp"

namespace squeeze {

namespace {

using nlohmann::json;

Complex complex_from(const json& j, const std::string& what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(what + ": expected [re, im], got " + j.dump());
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

double number(const json& spec, const char* key, double fallback) {
  if (!spec.contains(key)) return fallback;
  if (!spec[key].is_number()) throw ConfigError(std::string("domain spec: '") + key + "' must be a number");
  return spec[key].get<double>();
}

std::vector<double> axes_from(const json& spec) {
  if (!spec.contains("axes") || !spec["axes"].is_array() || spec["axes"].empty()) {
    throw ConfigError("domain spec: ellipsoid needs a nonempty 'axes' array");
  }
  std::vector<double> axes;
  for (const auto& a : spec["axes"]) {
    if (!a.is_number()) throw ConfigError("domain spec: axes must be numbers");
    axes.push_back(a.get<double>());
  }
  return axes;
}

ClosedCurve curve_from(const json& pts, const std::string& what) {
  if (!pts.is_array()) throw ConfigError(what + ": expected an array of [re, im] points");
  std::vector<Complex> z;
  z.reserve(pts.size());
  for (const auto& p : pts) z.push_back(complex_from(p, what));
  if (z.size() < 8) throw ConfigError(what + ": need at least 8 points");
  return ClosedCurve::from_samples(z);
}

Domain preset(const std::string& name, const json& spec) {
  if (name == "ball") {
    const auto n = static_cast<Eigen::Index>(number(spec, "dim", 2));
    if (n < 1) throw ConfigError("domain spec: ball dim must be >= 1");
    return DefiningFunctionDomain::ball(n, number(spec, "radius", 1.0));
  }
  if (name == "ellipsoid") return DefiningFunctionDomain::ellipsoid(spec.contains("axes") ? axes_from(spec) : std::vector<double>{1.0, 0.7});
  if (name == "unit_disc") return unit_disc();
  if (name == "disc") {
    const Complex c = spec.contains("center") ? complex_from(spec["center"], "disc center") : Complex(0.0);
    return disc(c, number(spec, "radius", 1.0));
  }
  if (name == "annulus") {
    const Complex c = spec.contains("center") ? complex_from(spec["center"], "annulus center") : Complex(0.0);
    return annulus(number(spec, "inner", 0.3), number(spec, "outer", 1.0), c);
  }
  if (name == "omega_prime") return build_omega_prime(omega_prime_params_from_json(spec));
  if (name == "omega_zlogz") return build_omega(build_omega_prime(omega_prime_params_from_json(spec)));
  std::ostringstream os;
  os << "domain spec: unknown preset '" << name << "' (known:";
  for (const auto& p : domain_presets()) os << ' ' << p;
  os << ')';
  throw ConfigError(os.str());
}

}  // namespace

std::vector<std::string> domain_presets() {
  return {"ball", "ellipsoid", "unit_disc", "disc", "annulus", "omega_prime", "omega_zlogz"};
}

OmegaPrimeParams omega_prime_params_from_json(const json& spec) {
  OmegaPrimeParams p;
  p.half_length = number(spec, "half_length", p.half_length);
  p.center = number(spec, "center", p.center);
  p.far_radius = number(spec, "far_radius", p.far_radius);
  p.blend_end = number(spec, "blend_end", p.blend_end);
  if (spec.contains("hole_center")) p.hole_center = complex_from(spec["hole_center"], "hole_center");
  p.hole_radius = number(spec, "hole_radius", p.hole_radius);
  if (spec.contains("samples")) {
    if (!spec["samples"].is_number_unsigned()) throw ConfigError("domain spec: 'samples' must be a positive integer");
    p.samples = spec["samples"].get<std::size_t>();
  }
  return p;
}

json to_json(const OmegaPrimeParams& p) {
  return {{"half_length", p.half_length}, {"center", p.center},
          {"far_radius", p.far_radius},   {"blend_end", p.blend_end},
          {"hole_center", {p.hole_center.real(), p.hole_center.imag()}},
          {"hole_radius", p.hole_radius}, {"samples", p.samples}};
}

json preset_spec(const std::string& name) {
  if (name == "ball") return {{"preset", "ball"}, {"dim", 2}, {"radius", 1.0}};
  if (name == "ellipsoid") return {{"preset", "ellipsoid"}, {"axes", {1.0, 0.7}}};
  if (name == "unit_disc") return {{"preset", "unit_disc"}};
  if (name == "disc") return {{"preset", "disc"}, {"center", {0.0, 0.0}}, {"radius", 1.0}};
  if (name == "annulus") return {{"preset", "annulus"}, {"inner", 0.3}, {"outer", 1.0}};
  if (name == "omega_prime" || name == "omega_zlogz") {
    json j = to_json(OmegaPrimeParams{});
    j["preset"] = name;
    return j;
  }
  throw ConfigError("preset_spec: unknown preset '" + name + "'");
}

Domain domain_from_json(const json& spec) {
  if (!spec.is_object()) throw ConfigError("domain spec: expected a JSON object");
  if (spec.contains("preset")) {
    if (!spec["preset"].is_string()) throw ConfigError("domain spec: 'preset' must be a string");
    return preset(spec["preset"].get<std::string>(), spec);
  }
  const std::string kind = spec.value("kind", "");
  if (kind == "planar") {
    if (!spec.contains("outer")) throw ConfigError("domain spec: planar domain needs 'outer'");
    ClosedCurve outer = curve_from(spec["outer"], "outer");
    std::vector<ClosedCurve> holes;
    if (spec.contains("holes")) {
      if (!spec["holes"].is_array()) throw ConfigError("domain spec: 'holes' must be an array of curves");
      for (std::size_t i = 0; i < spec["holes"].size(); ++i) {
        holes.push_back(curve_from(spec["holes"][i], "hole " + std::to_string(i)));
      }
    }
    const Smoothness s = smoothness_from_string(spec.value("smoothness", "C2"));
    try {
      return PlanarDomain(std::move(outer), std::move(holes), s, spec.value("name", "planar"));
    } catch (const DomainError& e) {
      throw ConfigError(std::string("domain spec: ") + e.what());
    }
  }
  if (kind == "defining") {
    if (!spec.contains("rho") || !spec["rho"].is_object() || !spec["rho"].contains("preset")) {
      throw ConfigError("domain spec: defining domain needs 'rho': {\"preset\": ...}");
    }
    const std::string name = spec["rho"]["preset"].get<std::string>();
    if (name != "ball" && name != "ellipsoid") {
      throw ConfigError("domain spec: defining-function presets are 'ball' and 'ellipsoid', got '" + name + "'");
    }
    Domain d = preset(name, spec["rho"]);
    if (spec.contains("bbox")) {
      // Every coordinate box [lo, hi] must contain the closure.
      const auto& dd = std::get<DefiningFunctionDomain>(d);
      const auto& box = spec["bbox"];
      if (!box.is_array() || box.size() != static_cast<std::size_t>(dd.dim())) {
        throw ConfigError("domain spec: 'bbox' needs one [lo, hi] per complex coordinate");
      }
      for (std::size_t k = 0; k < box.size(); ++k) {
        const double lo = box[k].at(0).get<double>(), hi = box[k].at(1).get<double>();
        const double reach = name == "ball" ? number(spec["rho"], "radius", 1.0) : dd.axes()[k];
        if (lo > -reach || hi < reach) throw ConfigError("domain spec: 'bbox' does not contain the domain");
      }
    }
    return d;
  }
  throw ConfigError("domain spec: need 'preset' or 'kind' (planar | defining)");
}

Domain domain_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open domain spec '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("domain spec '" + path + "': " + e.what());
  }
  return domain_from_json(j);
}

}  // namespace squeeze
