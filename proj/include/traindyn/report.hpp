#pragma once

#include <filesystem>
#include <string>

#include "traindyn/analysis.hpp"

namespace traindyn {

// Single JSON document with keys trace, config, series, summary, taxonomy,
// flags. Series are epoch-aligned arrays with null for missing entries.
// Output is deterministic: no timestamps, fixed key order.
std::string report_to_json(const AnalysisReport& report, int indent = 2);
AnalysisReport report_from_json(const std::string& text);

void save_report(const std::filesystem::path& path, const AnalysisReport& report);
AnalysisReport load_report(const std::filesystem::path& path);

}  // namespace traindyn
