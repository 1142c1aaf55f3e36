#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cvekw/dates.hpp"

namespace cvekw {

/// CWE identifier: "CWE-<digits>" or one of the NVD pseudo ids
/// NVD-CWE-noinfo / NVD-CWE-Other.
class CweId {
 public:
  static CweId parse(std::string_view text);
  static std::optional<CweId> try_parse(std::string_view text);

  const std::string& value() const { return value_; }
  bool is_pseudo() const { return numeric_ < 0; }
  long numeric() const { return numeric_; }

  // Numeric ids order by number; pseudo ids follow, lexicographically.
  friend bool operator<(const CweId& a, const CweId& b) {
    if (a.numeric_ >= 0 && b.numeric_ >= 0) return a.numeric_ < b.numeric_;
    if (a.numeric_ >= 0) return true;
    if (b.numeric_ >= 0) return false;
    return a.value_ < b.value_;
  }
  friend bool operator==(const CweId& a, const CweId& b) {
    return a.value_ == b.value_;
  }

 private:
  CweId(std::string value, long numeric)
      : value_(std::move(value)), numeric_(numeric) {}
  std::string value_;
  long numeric_ = -1;  // -1 for pseudo ids
};

enum class CveStatus { Rejected, Other };

struct CveRecord {
  std::string id;  // "CVE-<year>-<digits>"
  Date published{};
  CveStatus status = CveStatus::Other;
  std::string description;  // all English entries, single-space joined
  std::optional<double> base_score;  // CVSS v3.1, in [0, 10]
  std::vector<CweId> cwes;  // sorted, deduplicated

  friend bool operator==(const CveRecord&, const CveRecord&) = default;
};

struct Corpus {
  std::vector<CveRecord> records;
  DateWindow window{};
};

bool is_cve_id(std::string_view text);

/// One NVD API 2.0 "vulnerabilities" page -> records in payload order.
/// Throws ParseError naming the offending entry index.
std::vector<CveRecord> parse_nvd_page(std::string_view raw_payload);

/// Assembles fetched records into a corpus: drops records published outside
/// the window, keeps the first record per id.
Corpus build_corpus(std::vector<CveRecord> records, const DateWindow& window);

/// Records with status != Rejected, order preserved.
Corpus filter_rejected(const Corpus& corpus);

std::optional<double> dataset_average_score(const Corpus& corpus);

// Line-record cache: a header line, then one tab-separated record per line.
std::string serialize_corpus(const Corpus& corpus);
Corpus parse_corpus_text(std::string_view text);

void save_corpus(const Corpus& corpus, const std::filesystem::path& path);
Corpus load_corpus(const std::filesystem::path& path);

// Single-record line form, shared with the fetch partial file.
std::string serialize_record_line(const CveRecord& record);
CveRecord parse_record_line(std::string_view line, std::size_t line_number);

}  // namespace cvekw
