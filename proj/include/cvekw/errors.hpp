#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cvekw {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed external data: NVD payloads, dates, identifiers.
struct ParseError : Error {
  using Error::Error;
};

// Cache file violation. line_number is 1-based (0 = file-level).
struct CacheError : Error {
  CacheError(const std::string& msg, std::size_t line)
      : Error(msg), line_number(line) {}
  std::size_t line_number;
};

// Keyword config violation. line_number is 1-based (0 = file-level).
struct ConfigError : Error {
  ConfigError(const std::string& msg, std::size_t line = 0)
      : Error(msg), line_number(line) {}
  std::size_t line_number;
};

// Remote fetch failure, with the page coordinates it occurred at.
struct FetchError : Error {
  FetchError(const std::string& msg, int chunk, long start)
      : Error(msg), chunk_index(chunk), start_index(start) {}
  int chunk_index;
  long start_index;
};

struct RenderError : Error {
  using Error::Error;
};

}  // namespace cvekw
