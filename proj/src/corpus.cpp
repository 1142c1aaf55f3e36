#include "cvekw/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "cvekw/errors.hpp"
#include "cvekw/format.hpp"
#include "json.hpp"

namespace cvekw {

namespace {

constexpr std::string_view kCacheMagic = "#cvekw-cache v1";

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

}  // namespace

bool is_cve_id(std::string_view text) {
  // CVE-<4-digit year>-<4+ digits>
  if (text.size() < 13 || text.substr(0, 4) != "CVE-") return false;
  std::string_view rest = text.substr(4);
  auto dash = rest.find('-');
  if (dash == std::string_view::npos) return false;
  return dash == 4 && all_digits(rest.substr(0, dash)) &&
         all_digits(rest.substr(dash + 1)) && rest.size() - dash - 1 >= 4;
}

CweId CweId::parse(std::string_view text) {
  auto id = try_parse(text);
  if (!id) throw ParseError("invalid CWE id: " + std::string(text));
  return *id;
}

std::optional<CweId> CweId::try_parse(std::string_view text) {
  if (text == "NVD-CWE-noinfo" || text == "NVD-CWE-Other") {
    return CweId(std::string(text), -1);
  }
  if (text.size() > 4 && text.substr(0, 4) == "CWE-" && all_digits(text.substr(4))) {
    long numeric = 0;
    auto [ptr, ec] =
        std::from_chars(text.data() + 4, text.data() + text.size(), numeric);
    if (ec == std::errc{} && ptr == text.data() + text.size()) {
      return CweId(std::string(text), numeric);
    }
  }
  return std::nullopt;
}

std::vector<CveRecord> parse_nvd_page(std::string_view raw_payload) {
  nlohmann::json page;
  try {
    page = nlohmann::json::parse(raw_payload);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed NVD payload: ") + e.what());
  }
  if (!page.is_object() || !page.contains("vulnerabilities") ||
      !page["vulnerabilities"].is_array()) {
    throw ParseError("malformed NVD payload: missing vulnerabilities array");
  }

  std::vector<CveRecord> records;
  const auto& entries = page["vulnerabilities"];
  records.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    try {
      const auto& cve = entries[i].at("cve");
      CveRecord rec;
      rec.id = cve.at("id").get<std::string>();
      if (!is_cve_id(rec.id)) throw ParseError("invalid CVE id: " + rec.id);
      rec.published = timestamp_to_date(cve.at("published").get<std::string>());
      rec.status = cve.value("vulnStatus", "") == "Rejected" ? CveStatus::Rejected
                                                             : CveStatus::Other;

      std::string description;
      for (const auto& d : cve.value("descriptions", nlohmann::json::array())) {
        if (d.value("lang", "") != "en") continue;
        std::string text = d.value("value", "");
        if (text.empty()) continue;
        if (!description.empty()) description.push_back(' ');
        description += text;
      }
      rec.description = std::move(description);

      rec.base_score = [&]() -> std::optional<double> {
        const auto metrics = cve.value("metrics", nlohmann::json::object());
        const auto v31 = metrics.value("cvssMetricV31", nlohmann::json::array());
        const nlohmann::json* fallback = nullptr;
        for (const auto& m : v31) {
          if (!m.contains("cvssData")) continue;
          const auto& data = m["cvssData"];
          if (data.value("version", "") != "3.1" || !data.contains("baseScore")) {
            continue;
          }
          if (m.value("type", "") == "Primary") return data["baseScore"].get<double>();
          if (!fallback) fallback = &data;
        }
        if (fallback) return (*fallback)["baseScore"].get<double>();
        return std::nullopt;
      }();
      if (rec.base_score && (*rec.base_score < 0.0 || *rec.base_score > 10.0)) {
        throw ParseError("base score out of range");
      }

      for (const auto& weakness : cve.value("weaknesses", nlohmann::json::array())) {
        for (const auto& d : weakness.value("description", nlohmann::json::array())) {
          if (auto cwe = CweId::try_parse(d.value("value", ""))) {
            rec.cwes.push_back(std::move(*cwe));
          }
        }
      }
      std::sort(rec.cwes.begin(), rec.cwes.end());
      rec.cwes.erase(std::unique(rec.cwes.begin(), rec.cwes.end()), rec.cwes.end());

      records.push_back(std::move(rec));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("vulnerabilities[" + std::to_string(i) + "]: " + e.what());
    } catch (const ParseError& e) {
      throw ParseError("vulnerabilities[" + std::to_string(i) + "]: " + e.what());
    }
  }
  return records;
}

Corpus build_corpus(std::vector<CveRecord> records, const DateWindow& window) {
  Corpus corpus;
  corpus.window = window;
  corpus.records.reserve(records.size());
  std::unordered_set<std::string> seen;
  for (auto& rec : records) {
    if (!window_contains(window, rec.published)) continue;
    if (!seen.insert(rec.id).second) continue;
    corpus.records.push_back(std::move(rec));
  }
  return corpus;
}

Corpus filter_rejected(const Corpus& corpus) {
  Corpus out;
  out.window = corpus.window;
  out.records.reserve(corpus.records.size());
  std::copy_if(corpus.records.begin(), corpus.records.end(),
               std::back_inserter(out.records), [](const CveRecord& r) {
                 return r.status != CveStatus::Rejected;
               });
  return out;
}

std::optional<double> dataset_average_score(const Corpus& corpus) {
  double sum = 0.0;
  long n = 0;
  for (const auto& rec : corpus.records) {
    if (rec.base_score) {
      sum += *rec.base_score;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

namespace {

std::string escape_field(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string unescape_field(std::string_view text, std::size_t line_number) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c != '\\') {
      out.push_back(c);
      continue;
    }
    if (i + 1 >= text.size()) {
      throw CacheError("dangling escape", line_number);
    }
    switch (text[++i]) {
      case '\\': out.push_back('\\'); break;
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      default: throw CacheError("unknown escape sequence", line_number);
    }
  }
  return out;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t begin = 0;
  while (true) {
    auto pos = text.find(sep, begin);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(begin));
      return parts;
    }
    parts.push_back(text.substr(begin, pos - begin));
    begin = pos + 1;
  }
}

}  // namespace

std::string serialize_record_line(const CveRecord& record) {
  std::string line = record.id;
  line.push_back('\t');
  line += format_date(record.published);
  line.push_back('\t');
  line += record.status == CveStatus::Rejected ? "Rejected" : "Other";
  line.push_back('\t');
  if (record.base_score) line += format_shortest(*record.base_score);
  line.push_back('\t');
  for (std::size_t i = 0; i < record.cwes.size(); ++i) {
    if (i > 0) line.push_back(';');
    line += record.cwes[i].value();
  }
  line.push_back('\t');
  line += escape_field(record.description);
  return line;
}

CveRecord parse_record_line(std::string_view line, std::size_t line_number) {
  auto fields = split(line, '\t');
  if (fields.size() != 6) {
    throw CacheError("expected 6 tab-separated fields, got " +
                         std::to_string(fields.size()),
                     line_number);
  }
  CveRecord rec;
  rec.id = std::string(fields[0]);
  if (!is_cve_id(rec.id)) {
    throw CacheError("invalid CVE id: " + rec.id, line_number);
  }
  try {
    rec.published = parse_date(fields[1]);
  } catch (const ParseError& e) {
    throw CacheError(e.what(), line_number);
  }
  if (fields[2] == "Rejected") {
    rec.status = CveStatus::Rejected;
  } else if (fields[2] == "Other") {
    rec.status = CveStatus::Other;
  } else {
    throw CacheError("invalid status: " + std::string(fields[2]), line_number);
  }
  if (!fields[3].empty()) {
    double score = 0.0;
    auto [ptr, ec] =
        std::from_chars(fields[3].data(), fields[3].data() + fields[3].size(), score);
    if (ec != std::errc{} || ptr != fields[3].data() + fields[3].size() ||
        score < 0.0 || score > 10.0) {
      throw CacheError("invalid base score: " + std::string(fields[3]), line_number);
    }
    rec.base_score = score;
  }
  if (!fields[4].empty()) {
    for (auto part : split(fields[4], ';')) {
      auto cwe = CweId::try_parse(part);
      if (!cwe) throw CacheError("invalid CWE id: " + std::string(part), line_number);
      // Canonical form is strictly ascending; rejects duplicates too.
      if (!rec.cwes.empty() && !(rec.cwes.back() < *cwe)) {
        throw CacheError("CWE list not in canonical order", line_number);
      }
      rec.cwes.push_back(std::move(*cwe));
    }
  }
  rec.description = unescape_field(fields[5], line_number);
  return rec;
}

std::string serialize_corpus(const Corpus& corpus) {
  std::string out(kCacheMagic);
  out.push_back('\t');
  out += format_date(corpus.window.start);
  out.push_back('\t');
  out += format_date(corpus.window.end);
  out.push_back('\n');
  for (const auto& rec : corpus.records) {
    out += serialize_record_line(rec);
    out.push_back('\n');
  }
  return out;
}

Corpus parse_corpus_text(std::string_view text) {
  Corpus corpus;
  std::size_t line_number = 0;
  std::size_t begin = 0;
  std::unordered_set<std::string> seen;
  while (begin < text.size()) {
    auto eol = text.find('\n', begin);
    if (eol == std::string_view::npos) {
      throw CacheError("missing trailing newline", line_number + 1);
    }
    std::string_view line = text.substr(begin, eol - begin);
    begin = eol + 1;
    ++line_number;
    if (line_number == 1) {
      auto fields = split(line, '\t');
      if (fields.size() != 3 || fields[0] != kCacheMagic) {
        throw CacheError("unrecognized cache header", 1);
      }
      try {
        corpus.window.start = parse_date(fields[1]);
        corpus.window.end = parse_date(fields[2]);
      } catch (const ParseError& e) {
        throw CacheError(e.what(), 1);
      }
      if (to_days(corpus.window.start) > to_days(corpus.window.end)) {
        throw CacheError("inverted window", 1);
      }
      continue;
    }
    CveRecord rec = parse_record_line(line, line_number);
    if (!window_contains(corpus.window, rec.published)) {
      throw CacheError("published date outside window", line_number);
    }
    if (!seen.insert(rec.id).second) {
      throw CacheError("duplicate CVE id: " + rec.id, line_number);
    }
    corpus.records.push_back(std::move(rec));
  }
  if (line_number == 0) {
    throw CacheError("empty cache file", 0);
  }
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open for writing: " + path.string());
  std::string text = serialize_corpus(corpus);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("write failed: " + path.string());
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_corpus_text(buf.str());
}

}  // namespace cvekw
