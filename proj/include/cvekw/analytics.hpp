#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cvekw/corpus.hpp"
#include "cvekw/keywords.hpp"

namespace cvekw {

struct KeywordStats {
  std::string keyword;
  long cve_count = 0;
  long unique_cwe_count = 0;
  std::optional<double> avg_score;
  bool above_dataset_avg = false;
};

struct CweStats {
  CweId cwe;
  std::string title;  // empty for pseudo and unknown ids
  long keyword_count = 0;
  std::optional<double> avg_score_matched;
  std::optional<double> avg_score_dataset;
  bool above_dataset = false;
};

struct SubsetSummary {
  long matched_count = 0;
  std::optional<double> share_pct;  // absent for an empty corpus
  std::optional<double> avg_score;
};

enum class HeatmapKind { PrevalenceNormalized, AvgSeverityMinSupport };

struct HeatmapMatrix {
  std::vector<CweId> rows;
  std::vector<std::string> cols;  // canonical keywords
  std::vector<std::vector<long>> raw_counts;
  std::vector<std::vector<double>> values;
  HeatmapKind kind = HeatmapKind::PrevalenceNormalized;
};

/// One row per keyword in the set (zero-match keywords included), sorted by
/// cve_count descending, ties by canonical keyword ascending.
std::vector<KeywordStats> keyword_stats(const Corpus& corpus,
                                        const std::vector<MatchResult>& matches,
                                        const KeywordSet& keywords);

SubsetSummary matched_subset_summary(const Corpus& corpus,
                                     const std::vector<MatchResult>& matches);

/// kc(w): sum over CVEs assigned to the CWE of their distinct-keyword counts.
long keyword_count(const CweId& cwe, const Corpus& corpus,
                   const std::vector<MatchResult>& matches);

/// kc(w) / number of CVEs assigned to the CWE; absent when that count is 0.
std::optional<double> scaled_keyword_count(const CweId& cwe, const Corpus& corpus,
                                           const std::vector<MatchResult>& matches);

/// CWEs with keyword_count >= 1, sorted by keyword_count descending (ties by
/// id ascending, numeric ids first), truncated to n.
std::vector<CweStats> top_cwes(const Corpus& corpus,
                               const std::vector<MatchResult>& matches, long n);

HeatmapMatrix prevalence_heatmap(const Corpus& corpus,
                                 const std::vector<MatchResult>& matches,
                                 const std::vector<CweId>& cwes,
                                 const KeywordSet& keywords);

HeatmapMatrix severity_heatmap(const Corpus& corpus,
                               const std::vector<MatchResult>& matches,
                               const std::vector<CweId>& cwes,
                               const KeywordSet& keywords);

}  // namespace cvekw
