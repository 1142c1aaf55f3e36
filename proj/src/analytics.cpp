#include "cvekw/analytics.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "cvekw/cwe_titles.hpp"

namespace cvekw {

namespace {

void check_aligned(const Corpus& corpus, const std::vector<MatchResult>& matches) {
  if (corpus.records.size() != matches.size()) {
    throw std::invalid_argument("matches not aligned with corpus records");
  }
}

bool has_cwe(const CveRecord& rec, const CweId& cwe) {
  return std::binary_search(rec.cwes.begin(), rec.cwes.end(), cwe);
}

struct ScoreAccum {
  double sum = 0.0;
  long n = 0;
  void add(const std::optional<double>& score) {
    if (score) {
      sum += *score;
      ++n;
    }
  }
  std::optional<double> mean() const {
    if (n == 0) return std::nullopt;
    return sum / n;
  }
};

}  // namespace

std::vector<KeywordStats> keyword_stats(const Corpus& corpus,
                                        const std::vector<MatchResult>& matches,
                                        const KeywordSet& keywords) {
  check_aligned(corpus, matches);
  std::optional<double> dataset_avg = dataset_average_score(corpus);

  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < keywords.size(); ++i) {
    index.emplace(keywords.at(i).canonical, i);
  }

  struct Accum {
    long count = 0;
    std::set<CweId> cwes;
    ScoreAccum score;
  };
  std::vector<Accum> accums(keywords.size());

  for (std::size_t i = 0; i < corpus.records.size(); ++i) {
    const CveRecord& rec = corpus.records[i];
    for (const auto& canonical : matches[i].matched) {
      Accum& a = accums[index.at(canonical)];
      ++a.count;
      a.cwes.insert(rec.cwes.begin(), rec.cwes.end());
      a.score.add(rec.base_score);
    }
  }

  std::vector<KeywordStats> rows;
  rows.reserve(keywords.size());
  for (std::size_t i = 0; i < keywords.size(); ++i) {
    KeywordStats row;
    row.keyword = keywords.at(i).canonical;
    row.cve_count = accums[i].count;
    row.unique_cwe_count = static_cast<long>(accums[i].cwes.size());
    row.avg_score = accums[i].score.mean();
    row.above_dataset_avg =
        row.avg_score && dataset_avg && *row.avg_score > *dataset_avg;
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const KeywordStats& a, const KeywordStats& b) {
    if (a.cve_count != b.cve_count) return a.cve_count > b.cve_count;
    return a.keyword < b.keyword;
  });
  return rows;
}

SubsetSummary matched_subset_summary(const Corpus& corpus,
                                     const std::vector<MatchResult>& matches) {
  check_aligned(corpus, matches);
  SubsetSummary summary;
  ScoreAccum score;
  for (std::size_t i = 0; i < corpus.records.size(); ++i) {
    if (matches[i].matched.empty()) continue;
    ++summary.matched_count;
    score.add(corpus.records[i].base_score);
  }
  if (!corpus.records.empty()) {
    summary.share_pct =
        100.0 * static_cast<double>(summary.matched_count) /
        static_cast<double>(corpus.records.size());
  }
  summary.avg_score = score.mean();
  return summary;
}

long keyword_count(const CweId& cwe, const Corpus& corpus,
                   const std::vector<MatchResult>& matches) {
  check_aligned(corpus, matches);
  long count = 0;
  for (std::size_t i = 0; i < corpus.records.size(); ++i) {
    if (has_cwe(corpus.records[i], cwe)) {
      count += static_cast<long>(matches[i].matched.size());
    }
  }
  return count;
}

std::optional<double> scaled_keyword_count(const CweId& cwe, const Corpus& corpus,
                                           const std::vector<MatchResult>& matches) {
  check_aligned(corpus, matches);
  long kc = 0;
  long assigned = 0;
  for (std::size_t i = 0; i < corpus.records.size(); ++i) {
    if (has_cwe(corpus.records[i], cwe)) {
      ++assigned;
      kc += static_cast<long>(matches[i].matched.size());
    }
  }
  if (assigned == 0) return std::nullopt;
  return static_cast<double>(kc) / static_cast<double>(assigned);
}

std::vector<CweStats> top_cwes(const Corpus& corpus,
                               const std::vector<MatchResult>& matches, long n) {
  check_aligned(corpus, matches);
  if (n < 1) throw std::invalid_argument("top_cwes requires n >= 1");

  struct Accum {
    long kc = 0;
    ScoreAccum matched;
    ScoreAccum dataset;
  };
  std::map<CweId, Accum> accums;  // ordered: deterministic ties for free
  for (std::size_t i = 0; i < corpus.records.size(); ++i) {
    const CveRecord& rec = corpus.records[i];
    long matched_keywords = static_cast<long>(matches[i].matched.size());
    for (const CweId& cwe : rec.cwes) {
      Accum& a = accums[cwe];
      a.kc += matched_keywords;
      a.dataset.add(rec.base_score);
      if (matched_keywords > 0) a.matched.add(rec.base_score);
    }
  }

  std::vector<CweStats> rows;
  for (const auto& [cwe, accum] : accums) {
    if (accum.kc < 1) continue;
    CweStats row{cwe, std::string(cwe_title(cwe)), accum.kc,
                 accum.matched.mean(), accum.dataset.mean(), false};
    row.above_dataset = row.avg_score_matched && row.avg_score_dataset &&
                        *row.avg_score_matched > *row.avg_score_dataset;
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const CweStats& a, const CweStats& b) {
    return a.keyword_count > b.keyword_count;
  });
  if (rows.size() > static_cast<std::size_t>(n)) {
    rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(n), rows.end());
  }
  return rows;
}

namespace {

HeatmapMatrix build_matrix(const std::vector<CweId>& cwes,
                           const KeywordSet& keywords, HeatmapKind kind) {
  HeatmapMatrix m;
  m.kind = kind;
  m.rows = cwes;
  m.cols.reserve(keywords.size());
  for (const auto& kw : keywords) m.cols.push_back(kw.canonical);
  m.raw_counts.assign(cwes.size(), std::vector<long>(keywords.size(), 0));
  m.values.assign(cwes.size(), std::vector<double>(keywords.size(), 0.0));
  return m;
}

std::unordered_map<std::string_view, std::size_t> column_index(
    const KeywordSet& keywords) {
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < keywords.size(); ++i) {
    index.emplace(keywords.at(i).canonical, i);
  }
  return index;
}

std::map<CweId, std::size_t> row_index(const std::vector<CweId>& cwes) {
  std::map<CweId, std::size_t> index;
  for (std::size_t i = 0; i < cwes.size(); ++i) index.emplace(cwes[i], i);
  return index;
}

}  // namespace

HeatmapMatrix prevalence_heatmap(const Corpus& corpus,
                                 const std::vector<MatchResult>& matches,
                                 const std::vector<CweId>& cwes,
                                 const KeywordSet& keywords) {
  check_aligned(corpus, matches);
  HeatmapMatrix m = build_matrix(cwes, keywords, HeatmapKind::PrevalenceNormalized);
  auto cols = column_index(keywords);
  auto rows = row_index(cwes);

  for (std::size_t i = 0; i < corpus.records.size(); ++i) {
    const CveRecord& rec = corpus.records[i];
    if (matches[i].matched.empty()) continue;
    for (const CweId& cwe : rec.cwes) {
      auto row = rows.find(cwe);
      if (row == rows.end()) continue;
      for (const auto& canonical : matches[i].matched) {
        ++m.raw_counts[row->second][cols.at(canonical)];
      }
    }
  }
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    long row_max = *std::max_element(m.raw_counts[r].begin(), m.raw_counts[r].end());
    if (row_max == 0) continue;  // all-zero rows stay zero
    for (std::size_t c = 0; c < m.cols.size(); ++c) {
      m.values[r][c] = static_cast<double>(m.raw_counts[r][c]) /
                       static_cast<double>(row_max);
    }
  }
  return m;
}

HeatmapMatrix severity_heatmap(const Corpus& corpus,
                               const std::vector<MatchResult>& matches,
                               const std::vector<CweId>& cwes,
                               const KeywordSet& keywords) {
  check_aligned(corpus, matches);
  HeatmapMatrix m = build_matrix(cwes, keywords, HeatmapKind::AvgSeverityMinSupport);
  auto cols = column_index(keywords);
  auto rows = row_index(cwes);

  std::vector<std::vector<double>> sums(cwes.size(),
                                        std::vector<double>(keywords.size(), 0.0));
  for (std::size_t i = 0; i < corpus.records.size(); ++i) {
    const CveRecord& rec = corpus.records[i];
    if (!rec.base_score || matches[i].matched.empty()) continue;
    for (const CweId& cwe : rec.cwes) {
      auto row = rows.find(cwe);
      if (row == rows.end()) continue;
      for (const auto& canonical : matches[i].matched) {
        std::size_t c = cols.at(canonical);
        ++m.raw_counts[row->second][c];
        sums[row->second][c] += *rec.base_score;
      }
    }
  }
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    for (std::size_t c = 0; c < m.cols.size(); ++c) {
      // Pairs with fewer than two scored CVEs stay at zero.
      if (m.raw_counts[r][c] >= 2) {
        m.values[r][c] = sums[r][c] / static_cast<double>(m.raw_counts[r][c]);
      }
    }
  }
  return m;
}

}  // namespace cvekw
