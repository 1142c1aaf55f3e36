#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "cvekw/analytics.hpp"

namespace cvekw {

/// Everything cmd_analyze computes, persisted so cmd_report can re-render
/// without touching the corpus.
struct AnalysisDocument {
  DateWindow window{};
  long total_cves = 0;  // after rejected filtering
  long rejected_removed = 0;
  std::optional<double> dataset_avg_score;
  SubsetSummary matched;
  std::vector<KeywordStats> keyword_rows;
  std::vector<CweStats> cwe_rows;
  std::vector<std::optional<double>> cwe_scaled;  // aligned with cwe_rows
  HeatmapMatrix prevalence;
  HeatmapMatrix severity;
};

std::string serialize_analysis(const AnalysisDocument& doc);
AnalysisDocument parse_analysis(const std::string& text);

void save_analysis(const AnalysisDocument& doc, const std::filesystem::path& path);
AnalysisDocument load_analysis(const std::filesystem::path& path);

}  // namespace cvekw
