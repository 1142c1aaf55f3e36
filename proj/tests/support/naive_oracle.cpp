#include "support/naive_oracle.hpp"

#include <algorithm>
#include <set>

namespace cvekw::oracle {

namespace {

bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

bool occurs(const std::string& text, const std::string& pattern, MatchMode mode) {
  std::size_t pos = 0;
  while ((pos = text.find(pattern, pos)) != std::string::npos) {
    if (mode == MatchMode::Substring) return true;
    bool left_ok = pos == 0 || !is_word_char(text[pos - 1]);
    std::size_t after = pos + pattern.size();
    bool right_ok = after == text.size() || !is_word_char(text[after]);
    if (left_ok && right_ok) return true;
    ++pos;
  }
  return false;
}

bool record_has_cwe(const CveRecord& r, const CweId& cwe) {
  return std::find(r.cwes.begin(), r.cwes.end(), cwe) != r.cwes.end();
}

bool record_matched_keyword(const MatchResult& m, const std::string& keyword) {
  return std::find(m.matched.begin(), m.matched.end(), keyword) != m.matched.end();
}

std::optional<double> mean(const std::vector<double>& xs) {
  if (xs.empty()) return std::nullopt;
  double sum = 0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

}  // namespace

std::string normalize(std::string_view text) {
  std::string out(text);
  for (const char* seq : {"\xE2\x80\x90", "\xE2\x80\x91"}) {
    std::size_t p = 0;
    while ((p = out.find(seq, p)) != std::string::npos) out.replace(p, 3, " ");
  }
  for (char& c : out) {
    if (c == '-')
      c = ' ';
    else if (c >= 'A' && c <= 'Z')
      c = static_cast<char>(c + ('a' - 'A'));
  }
  return out;
}

std::vector<std::string> match_description(std::string_view text,
                                           const KeywordSet& keywords) {
  std::string norm = normalize(text);
  std::vector<std::string> out;
  for (const Keyword& kw : keywords) {
    if (occurs(norm, kw.pattern, kw.mode)) out.push_back(kw.canonical);
  }
  return out;
}

std::vector<KeywordStats> keyword_stats(const Corpus& corpus,
                                        const std::vector<MatchResult>& matches,
                                        const KeywordSet& keywords) {
  std::optional<double> dataset_avg;
  {
    std::vector<double> scores;
    for (const CveRecord& r : corpus.records)
      if (r.base_score) scores.push_back(*r.base_score);
    dataset_avg = mean(scores);
  }

  std::vector<KeywordStats> rows;
  for (const Keyword& kw : keywords) {
    KeywordStats row;
    row.keyword = kw.canonical;
    std::set<std::string> cwes;
    std::vector<double> scores;
    for (std::size_t i = 0; i < corpus.records.size(); ++i) {
      if (!record_matched_keyword(matches[i], kw.canonical)) continue;
      ++row.cve_count;
      for (const CweId& c : corpus.records[i].cwes) cwes.insert(c.value());
      if (corpus.records[i].base_score) scores.push_back(*corpus.records[i].base_score);
    }
    row.unique_cwe_count = static_cast<long>(cwes.size());
    row.avg_score = mean(scores);
    row.above_dataset_avg = row.avg_score && dataset_avg && *row.avg_score > *dataset_avg;
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const KeywordStats& a, const KeywordStats& b) {
                     if (a.cve_count != b.cve_count) return a.cve_count > b.cve_count;
                     return a.keyword < b.keyword;
                   });
  return rows;
}

SubsetSummary matched_subset_summary(const Corpus& corpus,
                                     const std::vector<MatchResult>& matches) {
  SubsetSummary s;
  std::vector<double> scores;
  for (std::size_t i = 0; i < corpus.records.size(); ++i) {
    if (matches[i].matched.empty()) continue;
    ++s.matched_count;
    if (corpus.records[i].base_score) scores.push_back(*corpus.records[i].base_score);
  }
  if (!corpus.records.empty())
    s.share_pct = 100.0 * static_cast<double>(s.matched_count) /
                  static_cast<double>(corpus.records.size());
  s.avg_score = mean(scores);
  return s;
}

long keyword_count(const CweId& cwe, const Corpus& corpus,
                   const std::vector<MatchResult>& matches) {
  long total = 0;
  for (std::size_t i = 0; i < corpus.records.size(); ++i) {
    if (record_has_cwe(corpus.records[i], cwe))
      total += static_cast<long>(matches[i].matched.size());
  }
  return total;
}

std::optional<double> scaled_keyword_count(const CweId& cwe, const Corpus& corpus,
                                           const std::vector<MatchResult>& matches) {
  long assigned = 0;
  for (const CveRecord& r : corpus.records)
    if (record_has_cwe(r, cwe)) ++assigned;
  if (assigned == 0) return std::nullopt;
  return static_cast<double>(oracle::keyword_count(cwe, corpus, matches)) /
         static_cast<double>(assigned);
}

std::vector<CweStats> top_cwes(const Corpus& corpus,
                               const std::vector<MatchResult>& matches, long n) {
  std::set<CweId> seen;
  for (const CveRecord& r : corpus.records)
    for (const CweId& c : r.cwes) seen.insert(c);

  std::vector<CweStats> rows;
  for (const CweId& cwe : seen) {
    CweStats row{cwe, "", 0, std::nullopt, std::nullopt, false};
    row.keyword_count = oracle::keyword_count(cwe, corpus, matches);
    if (row.keyword_count < 1) continue;
    std::vector<double> matched_scores;
    std::vector<double> dataset_scores;
    for (std::size_t i = 0; i < corpus.records.size(); ++i) {
      if (!record_has_cwe(corpus.records[i], cwe)) continue;
      if (!corpus.records[i].base_score) continue;
      dataset_scores.push_back(*corpus.records[i].base_score);
      if (!matches[i].matched.empty())
        matched_scores.push_back(*corpus.records[i].base_score);
    }
    row.avg_score_matched = mean(matched_scores);
    row.avg_score_dataset = mean(dataset_scores);
    row.above_dataset = row.avg_score_matched && row.avg_score_dataset &&
                        *row.avg_score_matched > *row.avg_score_dataset;
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const CweStats& a, const CweStats& b) {
    if (a.keyword_count != b.keyword_count) return a.keyword_count > b.keyword_count;
    return a.cwe < b.cwe;
  });
  if (static_cast<long>(rows.size()) > n)
    rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(n), rows.end());
  return rows;
}

HeatmapMatrix prevalence_heatmap(const Corpus& corpus,
                                 const std::vector<MatchResult>& matches,
                                 const std::vector<CweId>& cwes,
                                 const KeywordSet& keywords) {
  HeatmapMatrix m;
  m.kind = HeatmapKind::PrevalenceNormalized;
  m.rows = cwes;
  for (const Keyword& kw : keywords) m.cols.push_back(kw.canonical);

  for (const CweId& cwe : cwes) {
    std::vector<long> counts;
    for (const Keyword& kw : keywords) {
      long n = 0;
      for (std::size_t i = 0; i < corpus.records.size(); ++i) {
        if (record_has_cwe(corpus.records[i], cwe) &&
            record_matched_keyword(matches[i], kw.canonical))
          ++n;
      }
      counts.push_back(n);
    }
    long row_max = 0;
    for (long c : counts) row_max = std::max(row_max, c);
    std::vector<double> values;
    for (long c : counts)
      values.push_back(row_max == 0 ? 0.0
                                    : static_cast<double>(c) /
                                          static_cast<double>(row_max));
    m.raw_counts.push_back(std::move(counts));
    m.values.push_back(std::move(values));
  }
  return m;
}

HeatmapMatrix severity_heatmap(const Corpus& corpus,
                               const std::vector<MatchResult>& matches,
                               const std::vector<CweId>& cwes,
                               const KeywordSet& keywords) {
  HeatmapMatrix m;
  m.kind = HeatmapKind::AvgSeverityMinSupport;
  m.rows = cwes;
  for (const Keyword& kw : keywords) m.cols.push_back(kw.canonical);

  for (const CweId& cwe : cwes) {
    std::vector<long> counts;
    std::vector<double> values;
    for (const Keyword& kw : keywords) {
      std::vector<double> scores;
      for (std::size_t i = 0; i < corpus.records.size(); ++i) {
        if (record_has_cwe(corpus.records[i], cwe) &&
            record_matched_keyword(matches[i], kw.canonical) &&
            corpus.records[i].base_score)
          scores.push_back(*corpus.records[i].base_score);
      }
      counts.push_back(static_cast<long>(scores.size()));
      values.push_back(scores.size() >= 2 ? *mean(scores) : 0.0);
    }
    m.raw_counts.push_back(std::move(counts));
    m.values.push_back(std::move(values));
  }
  return m;
}

}  // namespace cvekw::oracle
