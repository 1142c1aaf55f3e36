#pragma once

namespace cvekw {

/// Entry point for the cvekw tool. Exit codes: 0 success, 1 no matches,
/// 2 usage/environment error, 3 remote API failure.
int run_cli(int argc, const char* const* argv);

}  // namespace cvekw
