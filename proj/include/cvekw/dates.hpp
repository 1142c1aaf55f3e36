#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace cvekw {

using Date = std::chrono::year_month_day;

/// Parses "YYYY-MM-DD". Throws ParseError on anything else.
Date parse_date(std::string_view text);

/// Takes the UTC date part of an NVD timestamp ("YYYY-MM-DDTHH:MM:SS.mmm").
Date timestamp_to_date(std::string_view text);

std::string format_date(const Date& d);

inline std::chrono::sys_days to_days(const Date& d) {
  return std::chrono::sys_days{d};
}

struct DateWindow {
  Date start{};
  Date end{};
};

inline bool window_contains(const DateWindow& w, const Date& d) {
  return to_days(w.start) <= to_days(d) && to_days(d) <= to_days(w.end);
}

}  // namespace cvekw
