#include "cvekw/analysis_io.hpp"

#include <fstream>
#include <sstream>

#include "cvekw/errors.hpp"
#include "json.hpp"

namespace cvekw {

namespace {

using nlohmann::json;

constexpr const char* kSchema = "cvekw-analysis v1";

json opt_to_json(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

std::optional<double> opt_from_json(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) throw ParseError(std::string(key) + ": expected number or null");
  return v.get<double>();
}

const char* kind_name(HeatmapKind kind) {
  return kind == HeatmapKind::PrevalenceNormalized ? "prevalence" : "severity";
}

HeatmapKind kind_from_name(const std::string& name) {
  if (name == "prevalence") return HeatmapKind::PrevalenceNormalized;
  if (name == "severity") return HeatmapKind::AvgSeverityMinSupport;
  throw ParseError("unknown heatmap kind: " + name);
}

json matrix_to_json(const HeatmapMatrix& m) {
  json rows = json::array();
  for (const CweId& r : m.rows) rows.push_back(r.value());
  json j;
  j["kind"] = kind_name(m.kind);
  j["rows"] = std::move(rows);
  j["cols"] = m.cols;
  j["raw_counts"] = m.raw_counts;
  j["values"] = m.values;
  return j;
}

HeatmapMatrix matrix_from_json(const json& j) {
  HeatmapMatrix m;
  m.kind = kind_from_name(j.at("kind").get<std::string>());
  for (const json& r : j.at("rows")) m.rows.push_back(CweId::parse(r.get<std::string>()));
  m.cols = j.at("cols").get<std::vector<std::string>>();
  m.raw_counts = j.at("raw_counts").get<std::vector<std::vector<long>>>();
  m.values = j.at("values").get<std::vector<std::vector<double>>>();
  if (m.raw_counts.size() != m.rows.size() || m.values.size() != m.rows.size())
    throw ParseError("heatmap row count mismatch");
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    if (m.raw_counts[i].size() != m.cols.size() || m.values[i].size() != m.cols.size())
      throw ParseError("heatmap column count mismatch");
  }
  return m;
}

}  // namespace

std::string serialize_analysis(const AnalysisDocument& doc) {
  json j;
  j["schema"] = kSchema;
  j["window"] = {{"start", format_date(doc.window.start)},
                 {"end", format_date(doc.window.end)}};
  j["total_cves"] = doc.total_cves;
  j["rejected_removed"] = doc.rejected_removed;
  j["dataset_avg_score"] = opt_to_json(doc.dataset_avg_score);
  j["matched"] = {{"count", doc.matched.matched_count},
                  {"share_pct", opt_to_json(doc.matched.share_pct)},
                  {"avg_score", opt_to_json(doc.matched.avg_score)}};

  json kws = json::array();
  for (const KeywordStats& row : doc.keyword_rows) {
    kws.push_back({{"keyword", row.keyword},
                   {"cve_count", row.cve_count},
                   {"unique_cwe_count", row.unique_cwe_count},
                   {"avg_score", opt_to_json(row.avg_score)},
                   {"above_dataset_avg", row.above_dataset_avg}});
  }
  j["keywords"] = std::move(kws);

  if (doc.cwe_scaled.size() != doc.cwe_rows.size())
    throw ParseError("cwe_scaled not aligned with cwe_rows");
  json cwes = json::array();
  for (std::size_t i = 0; i < doc.cwe_rows.size(); ++i) {
    const CweStats& row = doc.cwe_rows[i];
    cwes.push_back({{"cwe", row.cwe.value()},
                    {"title", row.title},
                    {"keyword_count", row.keyword_count},
                    {"scaled_keyword_count", opt_to_json(doc.cwe_scaled[i])},
                    {"avg_score_matched", opt_to_json(row.avg_score_matched)},
                    {"avg_score_dataset", opt_to_json(row.avg_score_dataset)},
                    {"above_dataset", row.above_dataset}});
  }
  j["cwes"] = std::move(cwes);

  j["prevalence"] = matrix_to_json(doc.prevalence);
  j["severity"] = matrix_to_json(doc.severity);
  return j.dump(2) + "\n";
}

AnalysisDocument parse_analysis(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("analysis file is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("schema").get<std::string>() != kSchema)
      throw ParseError("unsupported analysis schema");

    AnalysisDocument doc;
    doc.window.start = parse_date(j.at("window").at("start").get<std::string>());
    doc.window.end = parse_date(j.at("window").at("end").get<std::string>());
    doc.total_cves = j.at("total_cves").get<long>();
    doc.rejected_removed = j.at("rejected_removed").get<long>();
    doc.dataset_avg_score = opt_from_json(j, "dataset_avg_score");
    const json& m = j.at("matched");
    doc.matched.matched_count = m.at("count").get<long>();
    doc.matched.share_pct = opt_from_json(m, "share_pct");
    doc.matched.avg_score = opt_from_json(m, "avg_score");

    for (const json& row : j.at("keywords")) {
      KeywordStats ks;
      ks.keyword = row.at("keyword").get<std::string>();
      ks.cve_count = row.at("cve_count").get<long>();
      ks.unique_cwe_count = row.at("unique_cwe_count").get<long>();
      ks.avg_score = opt_from_json(row, "avg_score");
      ks.above_dataset_avg = row.at("above_dataset_avg").get<bool>();
      doc.keyword_rows.push_back(std::move(ks));
    }

    for (const json& row : j.at("cwes")) {
      CweStats cs{CweId::parse(row.at("cwe").get<std::string>()),
                  row.at("title").get<std::string>(),
                  row.at("keyword_count").get<long>(),
                  opt_from_json(row, "avg_score_matched"),
                  opt_from_json(row, "avg_score_dataset"),
                  row.at("above_dataset").get<bool>()};
      doc.cwe_scaled.push_back(opt_from_json(row, "scaled_keyword_count"));
      doc.cwe_rows.push_back(std::move(cs));
    }

    doc.prevalence = matrix_from_json(j.at("prevalence"));
    doc.severity = matrix_from_json(j.at("severity"));
    return doc;
  } catch (const json::exception& e) {
    throw ParseError(std::string("analysis file: ") + e.what());
  }
}

void save_analysis(const AnalysisDocument& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open " + path.string() + " for writing");
  out << serialize_analysis(doc);
  if (!out) throw ParseError("write failed: " + path.string());
}

AnalysisDocument load_analysis(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_analysis(buf.str());
}

}  // namespace cvekw
