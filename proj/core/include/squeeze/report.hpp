#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "squeeze/experiments.hpp"

namespace squeeze {

inline constexpr const char* kReportSchema = "squeezelab.report/1";

std::string library_version();

enum class ReportFormat { json, csv };
ReportFormat report_format_from_string(const std::string& name);

/// Full report: schema, provenance (config echo, code version), tables,
/// verdicts with margins, notes. Keys are sorted, so equal reports serialize
/// to equal bytes.
nlohmann::json report_to_json(const ExperimentReport& report);
std::string report_json_text(const ExperimentReport& report);

/// One table as CSV, header first. Numbers use the shortest round-trip form.
std::string table_csv(const Table& table);

/// JSON: the whole report at `path`. CSV: the first table at `path`, the
/// others at `<stem>.<table name>.csv`, verdicts at `<stem>.verdicts.csv`.
/// Returns the paths written. Throws IoError when a file cannot be written.
std::vector<std::string> emit(const ExperimentReport& report, ReportFormat format, const std::string& path);

}  // namespace squeeze
