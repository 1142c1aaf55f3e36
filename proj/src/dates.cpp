#include "cvekw/dates.hpp"

#include <charconv>
#include <cstdio>

#include "cvekw/errors.hpp"

namespace cvekw {

namespace {

int parse_number(std::string_view text, std::size_t offset, std::size_t len) {
  int value = 0;
  const char* first = text.data() + offset;
  const char* last = first + len;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError("invalid date: " + std::string(text));
  }
  return value;
}

}  // namespace

Date parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw ParseError("invalid date: " + std::string(text));
  }
  Date d{std::chrono::year{parse_number(text, 0, 4)},
         std::chrono::month{static_cast<unsigned>(parse_number(text, 5, 2))},
         std::chrono::day{static_cast<unsigned>(parse_number(text, 8, 2))}};
  if (!d.ok()) {
    throw ParseError("invalid date: " + std::string(text));
  }
  return d;
}

Date timestamp_to_date(std::string_view text) {
  if (text.size() < 10) {
    throw ParseError("invalid timestamp: " + std::string(text));
  }
  return parse_date(text.substr(0, 10));
}

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

}  // namespace cvekw
