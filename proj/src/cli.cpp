#include "cvekw/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cvekw/analysis_io.hpp"
#include "cvekw/analytics.hpp"
#include "cvekw/corpus.hpp"
#include "cvekw/errors.hpp"
#include "cvekw/format.hpp"
#include "cvekw/keywords.hpp"
#include "cvekw/nvd_client.hpp"
#include "cvekw/report.hpp"

namespace cvekw {

namespace {

namespace fs = std::filesystem;

struct RunConfig {
  std::string from = "2023-01-01";
  std::string to = "2024-09-30";
  int page_size = 2000;
  std::string keywords_path;
  std::string cache_path = "cve_cache.tsv";
  std::string out_dir = "out";
  long top_n = 25;
  std::vector<std::string> formats;  // empty = all
  std::string replay_dir;
  std::string record_dir;
  std::string api_key_env = "NVD_API_KEY";
  std::string analysis_path;  // report only; defaults to <out>/analysis.json
  std::string match_text;
};

RenderFormat format_from_name(const std::string& name) {
  if (name == "csv") return RenderFormat::Csv;
  if (name == "tex") return RenderFormat::LatexFragment;
  return RenderFormat::Svg;
}

std::vector<RenderFormat> resolve_formats(const std::vector<std::string>& names) {
  if (names.empty())
    return {RenderFormat::Csv, RenderFormat::LatexFragment, RenderFormat::Svg};
  std::vector<RenderFormat> out;
  for (const std::string& n : names) {
    RenderFormat f = format_from_name(n);
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
  }
  return out;
}

KeywordSet load_keyword_set(const RunConfig& cfg) {
  if (cfg.keywords_path.empty()) return KeywordSet::builtin();
  return parse_keyword_config(cfg.keywords_path);
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw Error("write failed: " + path.string());
}

std::string opt_fixed(const std::optional<double>& v, int decimals) {
  return v ? format_fixed(*v, decimals) : std::string();
}

std::string summary_csv(const AnalysisDocument& doc) {
  std::string out = "key,value\n";
  out += "total_cves," + std::to_string(doc.total_cves) + "\n";
  out += "rejected_removed," + std::to_string(doc.rejected_removed) + "\n";
  out += "matched_count," + std::to_string(doc.matched.matched_count) + "\n";
  out += "matched_share_pct," + opt_fixed(doc.matched.share_pct, 1) + "\n";
  out += "matched_avg_score," + opt_fixed(doc.matched.avg_score, 2) + "\n";
  out += "dataset_avg_score," + opt_fixed(doc.dataset_avg_score, 2) + "\n";
  return out;
}

void print_summary(const AnalysisDocument& doc) {
  std::cout << "total_cves=" << doc.total_cves << "\n"
            << "rejected_removed=" << doc.rejected_removed << "\n"
            << "matched_count=" << doc.matched.matched_count << "\n"
            << "matched_share_pct=" << opt_fixed(doc.matched.share_pct, 1) << "\n"
            << "matched_avg_score=" << opt_fixed(doc.matched.avg_score, 2) << "\n"
            << "dataset_avg_score=" << opt_fixed(doc.dataset_avg_score, 2) << "\n";
}

void write_outputs(const AnalysisDocument& doc, const fs::path& out_dir,
                   const std::vector<RenderFormat>& formats) {
  RenderOptions opts;
  for (RenderFormat f : formats) {
    opts.format = f;
    switch (f) {
      case RenderFormat::Csv:
        write_text_file(out_dir / "keyword_stats.csv",
                        render_keyword_table(doc.keyword_rows, opts));
        write_text_file(out_dir / "cwe_stats.csv",
                        render_cwe_table(doc.cwe_rows, opts));
        write_text_file(out_dir / "prevalence.csv",
                        export_matrix_csv(doc.prevalence, opts));
        write_text_file(out_dir / "prevalence.counts.csv",
                        export_matrix_counts_csv(doc.prevalence));
        write_text_file(out_dir / "severity.csv",
                        export_matrix_csv(doc.severity, opts));
        write_text_file(out_dir / "severity.counts.csv",
                        export_matrix_counts_csv(doc.severity));
        write_text_file(out_dir / "summary.csv", summary_csv(doc));
        break;
      case RenderFormat::LatexFragment:
        write_text_file(out_dir / "keyword_stats.tex",
                        render_keyword_table(doc.keyword_rows, opts));
        write_text_file(out_dir / "cwe_stats.tex",
                        render_cwe_table(doc.cwe_rows, opts));
        break;
      case RenderFormat::Svg:
        if (doc.prevalence.rows.empty() || doc.prevalence.cols.empty()) {
          std::cerr << "note: heatmaps are empty, skipping SVG output\n";
          break;
        }
        write_text_file(out_dir / "prevalence.svg",
                        render_heatmap_svg(doc.prevalence, opts));
        write_text_file(out_dir / "severity.svg",
                        render_heatmap_svg(doc.severity, opts));
        break;
    }
  }
}

// Re-reads the records of an interrupted fetch. A crash can leave a damaged
// tail; everything up to it is kept and the file is cut back to that point.
std::vector<CveRecord> load_partial(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();

  std::vector<CveRecord> records;
  std::size_t pos = 0;
  std::size_t good_end = 0;
  std::size_t line_no = 1;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) break;
    std::string_view line(text.data() + pos, nl - pos);
    try {
      records.push_back(parse_record_line(line, line_no));
    } catch (const Error&) {
      break;
    }
    good_end = nl + 1;
    pos = nl + 1;
    ++line_no;
  }
  if (good_end != text.size()) {
    std::cerr << "note: dropping damaged tail of " << path.string() << "\n";
    fs::resize_file(path, good_end);
  }
  return records;
}

int cmd_fetch(const RunConfig& cfg) {
  FetchPlan plan;
  fs::path cache_path;
  try {
    plan = plan_window(parse_date(cfg.from), parse_date(cfg.to), cfg.page_size);
    cache_path = fs::path(cfg.cache_path);
    if (cache_path.has_parent_path()) fs::create_directories(cache_path.parent_path());
    if (!cfg.record_dir.empty()) fs::create_directories(cfg.record_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  LiveTransport live;
  std::unique_ptr<ReplayTransport> replay;
  std::unique_ptr<RecordingTransport> recording;
  Transport* transport = &live;
  std::optional<std::string> api_key;
  FetcherConfig fetcher_cfg;
  if (!cfg.replay_dir.empty()) {
    replay = std::make_unique<ReplayTransport>(cfg.replay_dir);
    transport = replay.get();
    // local files: no pacing needed
    fetcher_cfg.budget_without_key = 1000000;
    fetcher_cfg.budget_with_key = 1000000;
  } else if (const char* key = std::getenv(cfg.api_key_env.c_str()); key && *key) {
    api_key = std::string(key);
  }
  if (!cfg.record_dir.empty()) {
    recording = std::make_unique<RecordingTransport>(*transport, cfg.record_dir);
    transport = recording.get();
  }

  fs::path partial_path = cache_path;
  partial_path += ".partial";
  fs::path progress_path = cache_path;
  progress_path += ".progress.json";

  std::optional<FetchProgress> resume =
      load_progress(progress_path, plan.window, plan.page_size);
  std::vector<CveRecord> records;
  if (resume && fs::exists(partial_path)) {
    records = load_partial(partial_path);
    std::cerr << "resuming at chunk " << resume->chunk_index + 1 << "/"
              << plan.chunks.size() << " startIndex " << resume->start_index
              << " (" << records.size() << " records on disk)\n";
  } else {
    resume.reset();
    std::error_code ec;
    fs::remove(partial_path, ec);
    fs::remove(progress_path, ec);
  }

  std::ofstream partial_out(partial_path, std::ios::binary | std::ios::app);
  if (!partial_out) {
    std::cerr << "error: cannot open " << partial_path.string() << " for writing\n";
    return 2;
  }

  SystemClock clock;
  Fetcher fetcher(*transport, clock, fetcher_cfg);
  bool write_failed = false;
  try {
    fetcher.fetch_all(
        plan, api_key,
        [&](const FetchedPage& page) {
          std::cerr << "chunk " << page.chunk_index + 1 << "/" << plan.chunks.size()
                    << " startIndex " << page.start_index << "/"
                    << page.total_results << "\n";
          std::vector<CveRecord> page_records = parse_nvd_page(page.body);
          for (const CveRecord& r : page_records)
            partial_out << serialize_record_line(r) << "\n";
          partial_out.flush();
          if (!partial_out) {
            write_failed = true;
            throw Error("write failed: " + partial_path.string());
          }
          for (CveRecord& r : page_records) records.push_back(std::move(r));
        },
        resume,
        [&](const FetchProgress& p) {
          save_progress(progress_path, plan.window, plan.page_size, p);
        });
  } catch (const FetchError& e) {
    std::cerr << "error: fetch failed at chunk " << e.chunk_index + 1
              << " startIndex " << e.start_index << ": " << e.what() << "\n"
              << "progress retained; rerun fetch to resume\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "error: malformed API response: " << e.what() << "\n"
              << "progress retained; rerun fetch to resume\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return write_failed ? 2 : 3;
  }
  partial_out.close();

  try {
    Corpus corpus = build_corpus(std::move(records), plan.window);
    save_corpus(corpus, cache_path);
    std::error_code ec;
    fs::remove(partial_path, ec);
    fs::remove(progress_path, ec);

    long rejected = 0;
    for (const CveRecord& r : corpus.records)
      if (r.status == CveStatus::Rejected) ++rejected;
    Corpus dataset = filter_rejected(corpus);
    std::cout << "records_total=" << corpus.records.size() << "\n"
              << "records_rejected=" << rejected << "\n"
              << "dataset_size=" << dataset.records.size() << "\n"
              << "dataset_avg_score=" << opt_fixed(dataset_average_score(dataset), 2)
              << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

AnalysisDocument analyze_corpus(const Corpus& full, const KeywordSet& keywords,
                                long top_n) {
  Corpus dataset = filter_rejected(full);
  std::vector<MatchResult> matches = match_corpus(dataset, keywords);

  AnalysisDocument doc;
  doc.window = dataset.window;
  doc.total_cves = static_cast<long>(dataset.records.size());
  doc.rejected_removed =
      static_cast<long>(full.records.size() - dataset.records.size());
  doc.dataset_avg_score = dataset_average_score(dataset);
  doc.matched = matched_subset_summary(dataset, matches);
  doc.keyword_rows = keyword_stats(dataset, matches, keywords);
  doc.cwe_rows = top_cwes(dataset, matches, top_n);
  std::vector<CweId> top_ids;
  for (const CweStats& row : doc.cwe_rows) {
    top_ids.push_back(row.cwe);
    doc.cwe_scaled.push_back(scaled_keyword_count(row.cwe, dataset, matches));
  }
  doc.prevalence = prevalence_heatmap(dataset, matches, top_ids, keywords);
  doc.severity = severity_heatmap(dataset, matches, top_ids, keywords);
  return doc;
}

int cmd_analyze(const RunConfig& cfg) {
  try {
    if (!fs::exists(cfg.cache_path)) {
      std::cerr << "error: corpus cache not found: " << cfg.cache_path
                << " (run fetch first)\n";
      return 2;
    }
    Corpus full = load_corpus(cfg.cache_path);
    KeywordSet keywords = load_keyword_set(cfg);
    AnalysisDocument doc = analyze_corpus(full, keywords, cfg.top_n);

    fs::create_directories(cfg.out_dir);
    save_analysis(doc, fs::path(cfg.out_dir) / "analysis.json");
    write_outputs(doc, cfg.out_dir, resolve_formats(cfg.formats));
    print_summary(doc);
    return 0;
  } catch (const CacheError& e) {
    std::cerr << "error: " << cfg.cache_path << ":" << e.line_number << ": "
              << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: keyword config line " << e.line_number << ": "
              << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_match(const RunConfig& cfg) {
  try {
    KeywordSet keywords = load_keyword_set(cfg);
    std::vector<std::string> matched = match_description(cfg.match_text, keywords);
    std::cout << "normalized=" << normalize(cfg.match_text) << "\n";
    std::cout << "matched=";
    for (std::size_t i = 0; i < matched.size(); ++i) {
      if (i > 0) std::cout << ",";
      std::cout << matched[i];
    }
    std::cout << "\n";
    return matched.empty() ? 1 : 0;
  } catch (const ConfigError& e) {
    std::cerr << "error: keyword config line " << e.line_number << ": "
              << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_report(const RunConfig& cfg) {
  try {
    fs::path analysis_path = cfg.analysis_path.empty()
                                 ? fs::path(cfg.out_dir) / "analysis.json"
                                 : fs::path(cfg.analysis_path);
    if (!fs::exists(analysis_path)) {
      std::cerr << "error: analysis file not found: " << analysis_path.string()
                << " (run analyze first)\n";
      return 2;
    }
    AnalysisDocument doc = load_analysis(analysis_path);
    fs::create_directories(cfg.out_dir);
    write_outputs(doc, cfg.out_dir, resolve_formats(cfg.formats));
    std::cerr << "re-rendered " << analysis_path.string() << " into "
              << cfg.out_dir << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  RunConfig cfg;
  CLI::App app{"NVD CVE keyword statistics toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value config file");

  app.add_option("--from", cfg.from, "window start date (YYYY-MM-DD)")
      ->capture_default_str();
  app.add_option("--to", cfg.to, "window end date (YYYY-MM-DD)")
      ->capture_default_str();
  app.add_option("--page-size", cfg.page_size, "API page size")
      ->check(CLI::Range(1, 2000))
      ->capture_default_str();
  app.add_option("--keywords", cfg.keywords_path,
                 "keyword config file (default: built-in set)");
  app.add_option("--cache", cfg.cache_path, "corpus cache file")
      ->capture_default_str();
  app.add_option("--out", cfg.out_dir, "output directory")
      ->capture_default_str();
  app.add_option("--top-n", cfg.top_n, "number of CWE rows")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--format", cfg.formats, "output formats (repeatable)")
      ->check(CLI::IsMember({"csv", "tex", "svg"}));
  app.add_option("--replay-dir", cfg.replay_dir,
                 "serve API responses from this directory instead of the network");
  app.add_option("--record", cfg.record_dir,
                 "record API responses into this directory");
  app.add_option("--api-key-env", cfg.api_key_env,
                 "environment variable holding the NVD API key")
      ->capture_default_str();

  CLI::App* fetch_cmd =
      app.add_subcommand("fetch", "download CVE records into the corpus cache");
  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "compute keyword statistics and heatmaps");
  CLI::App* match_cmd =
      app.add_subcommand("match", "run the keyword matcher on one description");
  match_cmd->add_option("text", cfg.match_text, "description text")
      ->required()
      ->expected(1);
  CLI::App* report_cmd =
      app.add_subcommand("report", "re-render outputs from a saved analysis");
  report_cmd->add_option("--analysis", cfg.analysis_path,
                         "analysis file (default: <out>/analysis.json)");
  for (CLI::App* sub : {fetch_cmd, analyze_cmd, match_cmd, report_cmd})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (app.got_subcommand(fetch_cmd)) return cmd_fetch(cfg);
  if (app.got_subcommand(analyze_cmd)) return cmd_analyze(cfg);
  if (app.got_subcommand(match_cmd)) return cmd_match(cfg);
  return cmd_report(cfg);
}

}  // namespace cvekw
