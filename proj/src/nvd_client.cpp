#include "cvekw/nvd_client.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cvekw/errors.hpp"
#include "httplib.h"
#include "json.hpp"

namespace cvekw {

namespace {

constexpr const char* kNvdHost = "https://services.nvd.nist.gov";
constexpr const char* kNvdPath = "/rest/json/cves/2.0";

}  // namespace

FetchPlan plan_window(const Date& start, const Date& end, int page_size) {
  if (!start.ok() || !end.ok()) {
    throw std::invalid_argument("invalid window date");
  }
  if (to_days(start) > to_days(end)) {
    throw std::invalid_argument("window start is after window end");
  }
  if (page_size < 1 || page_size > 2000) {
    throw std::invalid_argument("page size out of range [1, 2000]");
  }
  FetchPlan plan;
  plan.window = {start, end};
  plan.page_size = page_size;
  auto s = to_days(start);
  auto e = to_days(end);
  while (s <= e) {
    auto chunk_end = std::min(s + std::chrono::days{119}, e);
    plan.chunks.push_back({Date{s}, Date{chunk_end}});
    s = chunk_end + std::chrono::days{1};
  }
  return plan;
}

PageRequest make_page_request(const DateChunk& chunk, long start_index,
                              int page_size) {
  PageRequest req;
  req.pub_start = format_date(chunk.start) + "T00:00:00.000+00:00";
  req.pub_end = format_date(chunk.end) + "T23:59:59.999+00:00";
  req.start_index = start_index;
  req.page_size = page_size;
  return req;
}

std::string replay_file_name(const PageRequest& req) {
  return req.pub_start.substr(0, 10) + "_" + req.pub_end.substr(0, 10) + "_" +
         std::to_string(req.start_index) + ".json";
}

HttpResponse LiveTransport::get(const PageRequest& req,
                                const std::optional<std::string>& api_key) {
  httplib::Client client(kNvdHost);
  client.set_connection_timeout(std::chrono::seconds(30));
  client.set_read_timeout(std::chrono::seconds(60));
  client.set_follow_location(true);

  httplib::Params params{
      {"pubStartDate", req.pub_start},
      {"pubEndDate", req.pub_end},
      {"resultsPerPage", std::to_string(req.page_size)},
      {"startIndex", std::to_string(req.start_index)},
  };
  httplib::Headers headers;
  if (api_key) headers.emplace("apiKey", *api_key);

  auto res = client.Get(kNvdPath, params, headers);
  if (!res) return {0, httplib::to_string(res.error())};
  return {res->status, res->body};
}

HttpResponse ReplayTransport::get(const PageRequest& req,
                                  const std::optional<std::string>&) {
  auto path = dir_ / replay_file_name(req);
  std::ifstream in(path, std::ios::binary);
  if (!in) return {404, "replay file not found: " + path.string()};
  std::ostringstream buf;
  buf << in.rdbuf();
  return {200, buf.str()};
}

HttpResponse RecordingTransport::get(const PageRequest& req,
                                     const std::optional<std::string>& api_key) {
  HttpResponse resp = inner_.get(req, api_key);
  if (resp.status == 200) {
    std::filesystem::create_directories(dir_);
    auto path = dir_ / replay_file_name(req);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(resp.body.data(), static_cast<std::streamsize>(resp.body.size()));
  }
  return resp;
}

std::chrono::steady_clock::time_point SystemClock::now() {
  return std::chrono::steady_clock::now();
}

void SystemClock::sleep_for(std::chrono::milliseconds d) {
  std::this_thread::sleep_for(d);
}

RateLimiter::RateLimiter(int budget, std::chrono::milliseconds window,
                         Clock& clock)
    : budget_(budget), window_(window), clock_(clock) {}

void RateLimiter::acquire() {
  auto now = clock_.now();
  while (!issued_.empty() && issued_.front() + window_ <= now) {
    issued_.pop_front();
  }
  if (static_cast<int>(issued_.size()) >= budget_) {
    auto wait = std::chrono::duration_cast<std::chrono::milliseconds>(
        issued_.front() + window_ - now);
    clock_.sleep_for(wait);
    now = issued_.front() + window_;
    while (!issued_.empty() && issued_.front() + window_ <= now) {
      issued_.pop_front();
    }
  }
  issued_.push_back(now);
}

Fetcher::Fetcher(Transport& transport, Clock& clock, FetcherConfig config)
    : transport_(transport), clock_(clock), config_(config) {}

std::string Fetcher::fetch_page(const PageRequest& req,
                                const std::optional<std::string>& api_key,
                                RateLimiter& limiter, int chunk_index) {
  auto delay = config_.retry.initial_delay;
  for (int attempt = 1;; ++attempt) {
    limiter.acquire();
    HttpResponse resp = transport_.get(req, api_key);
    if (resp.status == 200) return std::move(resp.body);
    bool retryable = resp.status == 0 || resp.status == 403 ||
                     resp.status == 429 ||
                     (resp.status >= 500 && resp.status <= 599);
    if (!retryable || attempt >= config_.retry.max_attempts) {
      throw FetchError("page fetch failed (status " +
                           std::to_string(resp.status) + ") after " +
                           std::to_string(attempt) + " attempt(s): " + resp.body,
                       chunk_index, req.start_index);
    }
    clock_.sleep_for(delay);
    delay = std::chrono::milliseconds(static_cast<long long>(
        std::llround(static_cast<double>(delay.count()) * config_.retry.factor)));
  }
}

namespace {

struct PageHeader {
  long start_index = 0;
  long total_results = 0;
  long record_count = 0;
};

PageHeader parse_page_header(const std::string& body, int chunk_index,
                             long start_index) {
  try {
    auto page = nlohmann::json::parse(body);
    PageHeader hdr;
    hdr.start_index = page.at("startIndex").get<long>();
    hdr.total_results = page.at("totalResults").get<long>();
    hdr.record_count =
        static_cast<long>(page.at("vulnerabilities").size());
    if (hdr.total_results < 0) throw ParseError("negative totalResults");
    return hdr;
  } catch (const std::exception& e) {
    throw FetchError(std::string("malformed page: ") + e.what(), chunk_index,
                     start_index);
  }
}

}  // namespace

void Fetcher::fetch_all(const FetchPlan& plan,
                        const std::optional<std::string>& api_key,
                        const PageSink& sink,
                        const std::optional<FetchProgress>& resume,
                        const ProgressSink& on_progress) {
  RateLimiter limiter(api_key ? config_.budget_with_key
                              : config_.budget_without_key,
                      config_.budget_window, clock_);
  int first_chunk = resume ? resume->chunk_index : 0;
  for (int ci = first_chunk; ci < static_cast<int>(plan.chunks.size()); ++ci) {
    const DateChunk& chunk = plan.chunks[ci];
    long start = (resume && ci == first_chunk) ? resume->start_index : 0;
    long total = -1;
    long delivered = start;  // records already on disk when resuming mid-chunk
    while (true) {
      PageRequest req = make_page_request(chunk, start, plan.page_size);
      std::string body = fetch_page(req, api_key, limiter, ci);
      PageHeader hdr = parse_page_header(body, ci, start);
      if (hdr.start_index != start) {
        throw FetchError("page startIndex mismatch", ci, start);
      }
      if (total >= 0 && hdr.total_results != total) {
        throw FetchError("totalResults changed mid-chunk", ci, start);
      }
      total = hdr.total_results;
      delivered += hdr.record_count;
      sink({ci, start, total, std::move(body)});
      start += plan.page_size;
      bool chunk_done = start >= total;
      if (chunk_done && delivered != total) {
        throw FetchError("chunk delivered " + std::to_string(delivered) +
                             " records, expected " + std::to_string(total),
                         ci, start);
      }
      FetchProgress next;
      if (chunk_done) {
        next = {ci + 1, 0, -1, 0};
      } else {
        next = {ci, start, total, 0};
      }
      if (on_progress) on_progress(next);
      if (chunk_done) break;
    }
  }
}

void save_progress(const std::filesystem::path& path, const DateWindow& window,
                   int page_size, const FetchProgress& progress) {
  nlohmann::json doc{
      {"schema", "cvekw-progress v1"},
      {"window_start", format_date(window.start)},
      {"window_end", format_date(window.end)},
      {"page_size", page_size},
      {"chunk_index", progress.chunk_index},
      {"start_index", progress.start_index},
      {"total_results", progress.total_results},
      {"retry_count", progress.retry_count},
  };
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write progress file: " + path.string());
  out << doc.dump(2) << '\n';
}

std::optional<FetchProgress> load_progress(const std::filesystem::path& path,
                                           const DateWindow& window,
                                           int page_size) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  try {
    auto doc = nlohmann::json::parse(in);
    if (doc.value("schema", "") != "cvekw-progress v1" ||
        doc.value("window_start", "") != format_date(window.start) ||
        doc.value("window_end", "") != format_date(window.end) ||
        doc.value("page_size", -1) != page_size) {
      return std::nullopt;  // different run; start fresh
    }
    FetchProgress progress;
    progress.chunk_index = doc.at("chunk_index").get<int>();
    progress.start_index = doc.at("start_index").get<long>();
    progress.total_results = doc.at("total_results").get<long>();
    progress.retry_count = doc.at("retry_count").get<int>();
    return progress;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

}  // namespace cvekw
