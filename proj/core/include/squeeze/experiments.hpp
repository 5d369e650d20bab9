#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace squeeze {

enum class ExperimentKind { lemma22, lemma24_25, pipeline, counterexample };

std::string to_string(ExperimentKind kind);
/// Accepts "lemma22", "lemma24_25" (or "lemma24-25"), "pipeline", "counterexample".
ExperimentKind experiment_from_string(const std::string& name);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::lemma22;
  std::string domain_preset;   ///< empty: the experiment's own set of domains
  int scales = 0;              ///< 0: the experiment's default
  std::uint64_t seed = 1;
  nlohmann::json tolerances = nlohmann::json::object();  ///< named overrides
  std::string output_path;
  /// Raw text the config was read from, echoed verbatim in the report.
  std::optional<std::string> source_text;

  /// Throws ConfigError on unknown keys or bad values (scales < 3 included).
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_text(const std::string& text);
  nlohmann::json to_json() const;

  int scales_or(int fallback) const { return scales > 0 ? scales : fallback; }
  double tolerance(const std::string& key, double fallback) const;
};

/// One asserted inequality with its numerical margin (>= 0 passes, > 0 for
/// strict relations).
struct Assertion {
  std::string name;
  std::string relation;  ///< ">=", "<=", ">", "<", "=" (with tolerance)
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = false;
};

Assertion assert_ge(std::string name, double lhs, double rhs);
Assertion assert_le(std::string name, double lhs, double rhs);
Assertion assert_gt(std::string name, double lhs, double rhs);
Assertion assert_lt(std::string name, double lhs, double rhs);
/// |lhs - rhs| <= tol; margin = tol - |lhs - rhs|.
Assertion assert_near(std::string name, double lhs, double rhs, double tol);

/// Cells are numbers, strings or booleans.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
};

struct ExperimentReport {
  std::string experiment;
  nlohmann::json provenance;
  std::vector<Table> tables;
  std::vector<Assertion> verdicts;
  std::vector<std::string> notes;  ///< informational, never part of the verdict
  nlohmann::json info = nlohmann::json::object();

  bool pass() const;
  const Table* table(const std::string& name) const;
};

/// Ratios R_k = (1 - L_k)/d_k on Omega = Phi(Omega') along p_k = p_scale 2^-k.
/// Tolerance keys: p_scale (0.1), decrease_factor (10), tail (10),
/// nodes (1024), injectivity_pairs (10000).
ExperimentReport run_counterexample(const ExperimentConfig& config);

/// Boundary estimate fit on disc, ball, ellipsoid and Omega'.
ExperimentReport run_lemma22(const ExperimentConfig& config);

/// Confinement chain lines and sphere-image sweeps over C, d, eps, r, then the
/// normalisation pipeline scenarios.
ExperimentReport run_lemma24_25(const ExperimentConfig& config);

/// Normalisation pipeline on the ball and the ellipsoid (1, 0.7).
ExperimentReport run_pipeline(const ExperimentConfig& config);

ExperimentReport run_experiment(const ExperimentConfig& config);

}  // namespace squeeze
