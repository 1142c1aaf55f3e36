#pragma once

#include <string_view>

#include "cvekw/corpus.hpp"

namespace cvekw {

/// Bundled CWE title table (the slice NVD commonly assigns). Empty for pseudo
/// ids and anything not in the table.
std::string_view cwe_title(const CweId& id);

}  // namespace cvekw
