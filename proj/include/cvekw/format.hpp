#pragma once

#include <string>

namespace cvekw {

/// Fixed-point decimal, half rounded away from zero, '.' separator.
std::string format_fixed(double value, int decimals);

/// Shortest representation that round-trips (std::to_chars).
std::string format_shortest(double value);

}  // namespace cvekw
