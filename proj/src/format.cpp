#include "cvekw/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace cvekw {

std::string format_fixed(double value, int decimals) {
  if (decimals < 0 || decimals > 9) {
    throw std::invalid_argument("decimals out of range");
  }
  double scale = 1.0;
  for (int i = 0; i < decimals; ++i) scale *= 10.0;
  // llround resolves halves away from zero.
  long long scaled = std::llround(value * scale);
  bool negative = scaled < 0;
  unsigned long long magnitude =
      negative ? -static_cast<unsigned long long>(scaled) : scaled;
  std::string digits = std::to_string(magnitude);
  std::string out;
  if (negative) out.push_back('-');
  if (decimals == 0) {
    out += digits;
    return out;
  }
  if (digits.size() <= static_cast<std::size_t>(decimals)) {
    digits.insert(0, static_cast<std::size_t>(decimals) + 1 - digits.size(), '0');
  }
  out.append(digits, 0, digits.size() - decimals);
  out.push_back('.');
  out.append(digits, digits.size() - decimals, std::string::npos);
  return out;
}

std::string format_shortest(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) {
    throw std::invalid_argument("unformattable value");
  }
  return std::string(buf, ptr);
}

}  // namespace cvekw
