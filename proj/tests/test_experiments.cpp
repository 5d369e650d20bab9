#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "squeeze/errors.hpp"
#include "squeeze/experiments.hpp"
#include "squeeze/report.hpp"

using namespace squeeze;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_lemma24_25() {
  ExperimentConfig c;
  c.experiment = ExperimentKind::lemma24_25;
  c.scales = 4;
  c.seed = 5;
  c.tolerances = {{"sphere_samples", 500}, {"fit_scales", 6}};
  return c;
}

}  // namespace

TEST(Config, ParsesAndEchoes) {
  const std::string text = R"({"experiment": "lemma24-25", "scales": 5, "seed": 9, "tolerances": {"tail": 4}})";
  const ExperimentConfig c = ExperimentConfig::from_text(text);
  EXPECT_EQ(c.experiment, ExperimentKind::lemma24_25);
  EXPECT_EQ(c.scales, 5);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.tolerance("tail", 10), 4.0);
  EXPECT_EQ(c.tolerance("absent", 2.5), 2.5);
  EXPECT_EQ(c.source_text, text);
  EXPECT_EQ(ExperimentConfig::from_json(c.to_json()).to_json(), c.to_json());
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(ExperimentConfig::from_text("{"), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(json::array()), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json({{"scales", 5}}), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json({{"experiment", "lemma99"}}), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json({{"experiment", "pipeline"}, {"scale", 5}}), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json({{"experiment", "pipeline"}, {"scales", 2}}), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json({{"experiment", "pipeline"}, {"scales", 4.5}}), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json({{"experiment", "pipeline"}, {"seed", -1}}), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json({{"experiment", "pipeline"}, {"tolerances", {{"tail", "x"}}}}), ConfigError);
}

TEST(Config, UnknownPresetRejected) {
  ExperimentConfig c;
  c.experiment = ExperimentKind::lemma22;
  c.domain_preset = "torus";
  EXPECT_THROW(run_experiment(c), ConfigError);
}

TEST(Assertions, MarginsAndStrictness) {
  EXPECT_TRUE(assert_ge("a", 1.0, 1.0).pass);
  EXPECT_FALSE(assert_gt("a", 1.0, 1.0).pass);
  EXPECT_TRUE(assert_le("a", 1.0, 1.0).pass);
  EXPECT_FALSE(assert_lt("a", 1.0, 1.0).pass);
  EXPECT_DOUBLE_EQ(assert_ge("a", 3.0, 1.0).margin, 2.0);
  EXPECT_DOUBLE_EQ(assert_le("a", 3.0, 1.0).margin, -2.0);
  const Assertion n = assert_near("n", 1.0, 1.05, 0.1);
  EXPECT_TRUE(n.pass);
  EXPECT_NEAR(n.margin, 0.05, 1e-15);
  EXPECT_FALSE(assert_near("n", 1.0, 1.2, 0.1).pass);
}

TEST(Report, PassRequiresVerdicts) {
  ExperimentReport r;
  EXPECT_FALSE(r.pass());
  r.verdicts.push_back(assert_ge("x", 1, 0));
  EXPECT_TRUE(r.pass());
  r.verdicts.push_back(assert_ge("y", 0, 1));
  EXPECT_FALSE(r.pass());
}

TEST(Report, JsonSchemaAndCsv) {
  ExperimentReport r;
  r.experiment = "counterexample";
  r.provenance = {{"config", {{"seed", 1}}}};
  r.tables.push_back({"t", {"k", "name", "ok"}, {{1, "a,b", true}, {2, 0.5, false}}});
  r.verdicts.push_back(assert_le("v", 1.0, 2.0));
  r.notes.push_back("informational");
  const json j = report_to_json(r);
  EXPECT_EQ(j["schema_version"], kReportSchema);
  EXPECT_EQ(j["provenance"]["code_version"], library_version());
  EXPECT_EQ(j["tables"][0]["columns"].size(), 3u);
  EXPECT_EQ(j["verdicts"][0]["margin"], 1.0);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(json::parse(report_json_text(r)), j);
  const std::string csv = table_csv(r.tables[0]);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "k,name,ok");
  EXPECT_NE(csv.find("\"a,b\""), std::string::npos);
}

TEST(Report, EmitWritesFilesAndReportsIoErrors) {
  ExperimentReport r;
  r.experiment = "x";
  r.tables.push_back({"main", {"a"}, {{1}}});
  r.tables.push_back({"extra", {"b"}, {{2}}});
  r.verdicts.push_back(assert_ge("v", 1, 0));
  const std::string dir = ::testing::TempDir() + "squeezelab_emit";
  std::filesystem::create_directories(dir);
  const auto files = emit(r, ReportFormat::csv, dir + "/out.csv");
  ASSERT_EQ(files.size(), 3u);
  for (const auto& f : files) EXPECT_TRUE(std::filesystem::exists(f)) << f;
  EXPECT_TRUE(std::filesystem::exists(dir + "/out.extra.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir + "/out.verdicts.csv"));
  emit(r, ReportFormat::json, dir + "/out.json");
  EXPECT_EQ(json::parse(slurp(dir + "/out.json"))["experiment"], "x");
  EXPECT_THROW(emit(r, ReportFormat::json, "/nonexistent-dir/out.json"), IoError);
  EXPECT_THROW(report_format_from_string("xml"), ConfigError);
}

TEST(Experiments, SmallRunIsDeterministic) {
  const ExperimentConfig c = small_lemma24_25();
  const std::string a = report_json_text(run_experiment(c));
  const std::string b = report_json_text(run_experiment(c));
  EXPECT_EQ(a, b);
  const json j = json::parse(a);
  EXPECT_EQ(j["experiment"], "lemma24_25");
  EXPECT_TRUE(j["pass"].get<bool>());
}

TEST(Experiments, CounterexampleShortRunHasColumns) {
  ExperimentConfig c;
  c.experiment = ExperimentKind::counterexample;
  c.scales = 6;
  c.tolerances = {{"tail", 4}, {"nodes", 512}, {"injectivity_pairs", 500}, {"decrease_factor", 1.5}};
  const ExperimentReport r = run_experiment(c);
  const Table* t = r.table("counterexample");
  ASSERT_NE(t, nullptr);
  EXPECT_EQ(t->columns, (std::vector<std::string>{"k", "p_k", "d_k", "L_k", "R_k"}));
  EXPECT_EQ(t->rows.size(), 6u);
  for (const auto& row : t->rows) {
    EXPECT_GT(row[4].get<double>(), 0.0);
    EXPECT_LT(row[3].get<double>(), 1.0);
  }
  EXPECT_TRUE(r.pass());
}
