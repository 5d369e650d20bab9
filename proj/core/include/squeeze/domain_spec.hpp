#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "squeeze/domain.hpp"

namespace squeeze {

/// Domain description in JSON.
///
///   {"preset": "ball", "dim": 2, "radius": 1}
///   {"preset": "ellipsoid", "axes": [1, 0.7]}
///   {"preset": "disc", "center": [0, 0], "radius": 1}
///   {"preset": "annulus", "inner": 0.3, "outer": 1}
///   {"preset": "omega_prime", ...OmegaPrimeParams fields}
///   {"preset": "omega_zlogz", ...}                      image of omega_prime
///   {"kind": "planar", "outer": [[re, im], ...], "holes": [[[re, im], ...]],
///    "smoothness": "C2"}
///   {"kind": "defining", "rho": {"preset": "ellipsoid", "axes": [...]},
///    "bbox": [[lo, hi], ...]}
///
/// Planar curves are equispaced samples of a closed curve (outer
/// counterclockwise, holes clockwise) and are interpolated trigonometrically.
/// Throws ConfigError on malformed input.
Domain domain_from_json(const nlohmann::json& spec);

/// Reads a file and calls domain_from_json. I/O errors become ConfigError.
Domain domain_from_file(const std::string& path);

/// Names accepted by "preset".
std::vector<std::string> domain_presets();

/// JSON description of a preset with its default parameters.
nlohmann::json preset_spec(const std::string& name);

/// Reads OmegaPrimeParams fields from a JSON object, defaults for missing keys.
OmegaPrimeParams omega_prime_params_from_json(const nlohmann::json& spec);
nlohmann::json to_json(const OmegaPrimeParams& params);

}  // namespace squeeze
