#include "squeeze/report.hpp"

#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "squeeze/errors.hpp"

#ifndef SQUEEZELAB_VERSION
#define SQUEEZELAB_VERSION "unknown"
#endif

namespace squeeze {

using nlohmann::json;

std::string library_version() { return SQUEEZELAB_VERSION; }

ReportFormat report_format_from_string(const std::string& name) {
  if (name == "json") return ReportFormat::json;
  if (name == "csv") return ReportFormat::csv;
  throw ConfigError("unknown report format '" + name + "' (json or csv)");
}

json report_to_json(const ExperimentReport& report) {
  json prov = report.provenance;
  prov["code_version"] = library_version();
  json tables = json::array();
  for (const auto& t : report.tables) {
    json rows = json::array();
    for (const auto& r : t.rows) rows.push_back(r);
    tables.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", rows}});
  }
  json verdicts = json::array();
  for (const auto& a : report.verdicts) {
    verdicts.push_back(
        {{"name", a.name}, {"relation", a.relation}, {"lhs", a.lhs}, {"rhs", a.rhs}, {"margin", a.margin}, {"pass", a.pass}});
  }
  return {{"schema_version", kReportSchema},
          {"experiment", report.experiment},
          {"provenance", prov},
          {"tables", tables},
          {"verdicts", verdicts},
          {"notes", report.notes},
          {"info", report.info},
          {"pass", report.pass()}};
}

std::string report_json_text(const ExperimentReport& report) { return report_to_json(report).dump(2) + "\n"; }

namespace {

std::string cell(const json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }
  return v.dump();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing: " + std::strerror(errno));
  out << text;
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed: " + std::strerror(errno));
}

}  // namespace

std::string table_csv(const Table& table) {
  std::ostringstream os;
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << cell(table.columns[i]);
  os << '\n';
  for (const auto& r : table.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell(r[i]);
    os << '\n';
  }
  return os.str();
}

std::vector<std::string> emit(const ExperimentReport& report, ReportFormat format, const std::string& path) {
  std::vector<std::string> written;
  if (format == ReportFormat::json) {
    write_file(path, report_json_text(report));
    written.push_back(path);
    return written;
  }
  const std::filesystem::path p(path);
  const auto sibling = [&](const std::string& name) {
    return (p.parent_path() / (p.stem().string() + "." + name + ".csv")).string();
  };
  for (std::size_t i = 0; i < report.tables.size(); ++i) {
    const std::string target = i == 0 ? path : sibling(report.tables[i].name);
    write_file(target, table_csv(report.tables[i]));
    written.push_back(target);
  }
  Table v{"verdicts", {"name", "relation", "lhs", "rhs", "margin", "pass"}, {}};
  for (const auto& a : report.verdicts) v.rows.push_back({a.name, a.relation, a.lhs, a.rhs, a.margin, a.pass});
  write_file(sibling("verdicts"), table_csv(v));
  written.push_back(sibling("verdicts"));
  return written;
}

}  // namespace squeeze
