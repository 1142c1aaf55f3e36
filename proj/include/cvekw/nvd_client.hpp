#pragma once

#include <chrono>
#include <deque>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cvekw/dates.hpp"

namespace cvekw {

struct DateChunk {
  Date start{};
  Date end{};
};

/// Sub-windows of at most 120 days (inclusive) tiling the fetch window,
/// as required by the NVD API.
struct FetchPlan {
  DateWindow window{};
  std::vector<DateChunk> chunks;
  int page_size = 2000;  // [1, 2000]
};

FetchPlan plan_window(const Date& start, const Date& end, int page_size);

struct FetchProgress {
  int chunk_index = 0;    // next chunk to request
  long start_index = 0;   // next page within that chunk
  long total_results = -1;  // -1 until the chunk's first page arrives
  int retry_count = 0;
};

struct PageRequest {
  std::string pub_start;  // full ISO-8601 timestamps (UTC offset +00:00)
  std::string pub_end;
  long start_index = 0;
  int page_size = 2000;
};

PageRequest make_page_request(const DateChunk& chunk, long start_index,
                              int page_size);

/// File name a recorded page is stored under: <start>_<end>_<startIndex>.json.
std::string replay_file_name(const PageRequest& req);

struct HttpResponse {
  int status = 0;  // 0 = transport-level failure
  std::string body;
};

class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse get(const PageRequest& req,
                           const std::optional<std::string>& api_key) = 0;
};

/// HTTPS client against services.nvd.nist.gov.
class LiveTransport : public Transport {
 public:
  LiveTransport() = default;
  HttpResponse get(const PageRequest& req,
                   const std::optional<std::string>& api_key) override;
};

/// Serves recorded pages from a directory; misses come back as 404.
class ReplayTransport : public Transport {
 public:
  explicit ReplayTransport(std::filesystem::path dir) : dir_(std::move(dir)) {}
  HttpResponse get(const PageRequest& req,
                   const std::optional<std::string>& api_key) override;

 private:
  std::filesystem::path dir_;
};

/// Tees successful responses from an inner transport into a replay directory.
class RecordingTransport : public Transport {
 public:
  RecordingTransport(Transport& inner, std::filesystem::path dir)
      : inner_(inner), dir_(std::move(dir)) {}
  HttpResponse get(const PageRequest& req,
                   const std::optional<std::string>& api_key) override;

 private:
  Transport& inner_;
  std::filesystem::path dir_;
};

class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::chrono::steady_clock::time_point now() = 0;
  virtual void sleep_for(std::chrono::milliseconds d) = 0;
};

class SystemClock : public Clock {
 public:
  std::chrono::steady_clock::time_point now() override;
  void sleep_for(std::chrono::milliseconds d) override;
};

/// Rolling-window request budget (the NVD documents 5 requests / 30 s
/// without a key, 50 with one).
class RateLimiter {
 public:
  RateLimiter(int budget, std::chrono::milliseconds window, Clock& clock);
  void acquire();

 private:
  int budget_;
  std::chrono::milliseconds window_;
  Clock& clock_;
  std::deque<std::chrono::steady_clock::time_point> issued_;
};

struct RetryPolicy {
  std::chrono::milliseconds initial_delay{6000};
  double factor = 2.0;
  int max_attempts = 5;
};

struct FetcherConfig {
  RetryPolicy retry{};
  int budget_without_key = 5;
  int budget_with_key = 50;
  std::chrono::milliseconds budget_window{30000};
};

struct FetchedPage {
  int chunk_index = 0;
  long start_index = 0;
  long total_results = 0;
  std::string body;
};

using PageSink = std::function<void(const FetchedPage&)>;
using ProgressSink = std::function<void(const FetchProgress&)>;

/// Walks a FetchPlan page by page, in (chunk, start_index) order. Progress is
/// reported after every delivered page so an interrupted run can resume
/// without re-emitting or skipping anything.
class Fetcher {
 public:
  Fetcher(Transport& transport, Clock& clock, FetcherConfig config = {});

  void fetch_all(const FetchPlan& plan, const std::optional<std::string>& api_key,
                 const PageSink& sink,
                 const std::optional<FetchProgress>& resume = std::nullopt,
                 const ProgressSink& on_progress = {});

 private:
  std::string fetch_page(const PageRequest& req,
                         const std::optional<std::string>& api_key,
                         RateLimiter& limiter, int chunk_index);

  Transport& transport_;
  Clock& clock_;
  FetcherConfig config_;
};

void save_progress(const std::filesystem::path& path, const DateWindow& window,
                   int page_size, const FetchProgress& progress);
std::optional<FetchProgress> load_progress(const std::filesystem::path& path,
                                           const DateWindow& window,
                                           int page_size);

}  // namespace cvekw
