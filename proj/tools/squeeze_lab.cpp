// squeeze-lab: batch driver for the experiments plus ad-hoc squeezing queries.
// Exit status: 0 all assertions pass, 1 some assertion failed, 2 bad
// configuration, 3 numerical or I/O failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "squeeze/domain_spec.hpp"
#include "squeeze/errors.hpp"
#include "squeeze/experiments.hpp"
#include "squeeze/report.hpp"
#include "squeeze/squeezing.hpp"

namespace {

using namespace squeeze;

struct Common {
  std::string preset;
  int scales = 0;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
  std::string config;
  std::vector<std::string> tolerances;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--preset", c.preset, "domain preset (experiment default when omitted)");
  app->add_option("--scales", c.scales, "number of scales (>= 3)")->check(CLI::Range(3, 1000));
  app->add_option("--seed", c.seed, "random seed");
  app->add_option("--out", c.out, "output path (stdout when omitted)");
  app->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--config", c.config, "experiment config JSON file; flags override its fields")->check(CLI::ExistingFile);
  app->add_option("--tol", c.tolerances, "tolerance override key=value (repeatable)");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ExperimentConfig build_config(ExperimentKind kind, const Common& c, const CLI::App& app) {
  ExperimentConfig cfg;
  if (!c.config.empty()) {
    cfg = ExperimentConfig::from_text(slurp(c.config));
    if (cfg.experiment != kind) {
      throw ConfigError("config file is for '" + to_string(cfg.experiment) + "', not '" + to_string(kind) + "'");
    }
  }
  cfg.experiment = kind;
  if (app.count("--preset")) cfg.domain_preset = c.preset;
  if (app.count("--scales")) cfg.scales = c.scales;
  if (app.count("--seed")) cfg.seed = c.seed;
  if (app.count("--out")) cfg.output_path = c.out;
  for (const auto& kv : c.tolerances) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--tol expects key=value, got '" + kv + "'");
    try {
      cfg.tolerances[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw ConfigError("--tol value is not a number: '" + kv + "'");
    }
  }
  return cfg;
}

int finish(const ExperimentReport& rep, const std::string& out, const std::string& format) {
  const ReportFormat f = report_format_from_string(format);
  if (out.empty()) {
    if (f == ReportFormat::json) {
      std::cout << report_json_text(rep);
    } else if (!rep.tables.empty()) {
      std::cout << table_csv(rep.tables.front());
    }
  } else {
    for (const auto& p : emit(rep, f, out)) std::cerr << "wrote " << p << '\n';
  }
  int failed = 0;
  for (const auto& a : rep.verdicts) {
    if (!a.pass) {
      ++failed;
      std::cerr << "FAIL " << a.name << " (margin " << a.margin << ")\n";
    }
  }
  std::cerr << rep.experiment << ": " << rep.verdicts.size() - failed << "/" << rep.verdicts.size()
            << " assertions pass\n";
  return rep.pass() ? 0 : 1;
}

PointCn parse_point(const std::string& text) {
  // "re,im[,re,im...]"
  std::vector<double> v;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) v.push_back(std::stod(part));
  if (v.empty() || v.size() % 2 != 0) throw ConfigError("--point expects re,im pairs, got '" + text + "'");
  PointCn z(static_cast<Eigen::Index>(v.size() / 2));
  for (std::size_t k = 0; k < v.size() / 2; ++k) z[static_cast<Eigen::Index>(k)] = {v[2 * k], v[2 * k + 1]};
  return z;
}

int run_squeeze(const std::string& preset, const std::string& domain_file, const std::string& point_text,
                std::uint64_t seed) {
  const Domain dom = domain_file.empty() ? domain_from_json(preset_spec(preset.empty() ? "annulus" : preset))
                                         : domain_from_file(domain_file);
  const PointCn z = parse_point(point_text);
  if (z.size() != dimension(dom)) throw ConfigError("--point has the wrong dimension for this domain");
  SqueezeBound b;
  if (const auto* pd = std::get_if<PlanarDomain>(&dom)) {
    b = squeeze_lower_planar(*pd, z[0]);
  } else {
    // Scaled inclusion into the unit ball.
    const auto& dd = std::get<DefiningFunctionDomain>(dom);
    const double reach = dd.bbox_radius() + dd.interior_witness().norm();
    const EmbeddingMap f = make_embedding(dom, "scaled-inclusion", [reach](const PointCn& w) { return PointCn(w / (reach * (1.0 + 1e-12))); },
                                          {{"scale", reach}});
    BoundaryImageOptions o;
    o.seed = seed;
    b = squeeze_lower_from_embedding(dom, z, f, o);
  }
  nlohmann::json out{{"domain", domain_name(dom)}, {"lower", b.lower}, {"deficit", b.deficit},
                     {"resolution_margin", b.resolution_margin}, {"certificate", b.certificate}, {"witness", b.witness}};
  std::cout << out.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"squeeze-lab: squeezing-function and Kobayashi-distance experiments"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    ExperimentKind kind;
    const char* help;
  };
  const std::vector<Sub> subs{
      {"lemma22", ExperimentKind::lemma22, "boundary estimate fit d_K(base, p) - 1/2 log(1/d(p))"},
      {"lemma24-25", ExperimentKind::lemma24_25, "confinement chain and sphere-image sweeps"},
      {"pipeline", ExperimentKind::pipeline, "normalisation pipeline on ball and ellipsoid"},
      {"counterexample", ExperimentKind::counterexample, "ratios (1 - L_k)/d_k on the image of z log z"},
  };
  std::vector<Common> commons(subs.size());
  std::vector<CLI::App*> apps;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    apps.push_back(app.add_subcommand(subs[i].name, subs[i].help));
    add_common(apps.back(), commons[i]);
  }

  std::string sq_preset, sq_file, sq_point;
  std::uint64_t sq_seed = 11;
  auto* sq = app.add_subcommand("squeeze", "lower bound for the squeezing function at one point");
  sq->add_option("--preset", sq_preset, "domain preset");
  sq->add_option("--domain", sq_file, "domain spec JSON file")->check(CLI::ExistingFile);
  sq->add_option("--point", sq_point, "re,im[,re,im...]")->required();
  sq->add_option("--seed", sq_seed, "seed for boundary sampling");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sq->parsed()) return run_squeeze(sq_preset, sq_file, sq_point, sq_seed);
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!apps[i]->parsed()) continue;
      const ExperimentConfig cfg = build_config(subs[i].kind, commons[i], *apps[i]);
      const ExperimentReport rep = run_experiment(cfg);
      return finish(rep, cfg.output_path, commons[i].format);
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
