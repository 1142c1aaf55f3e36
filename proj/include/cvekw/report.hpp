#pragma once

#include <string>

#include "cvekw/analytics.hpp"

namespace cvekw {

enum class RenderFormat { Csv, LatexFragment, Svg };

struct RenderOptions {
  RenderFormat format = RenderFormat::Csv;
  int decimals = 2;       // [0, 6]
  bool highlight = true;  // red marking of above-average scores
  int cell_size = 14;     // SVG cell edge, [4, 64] px
};

/// Table 2-style keyword table (Keyword, CVE, Unique CWE, Avg Score).
std::string render_keyword_table(const std::vector<KeywordStats>& stats,
                                 const RenderOptions& opts);

/// Table 3-style CWE table (CWE, Title, Keywords, Avg Score, Dataset).
std::string render_cwe_table(const std::vector<CweStats>& stats,
                             const RenderOptions& opts);

/// White-to-red cell grid with row/column labels. Byte-deterministic.
std::string render_heatmap_svg(const HeatmapMatrix& matrix,
                               const RenderOptions& opts);

/// Value matrix as CSV, one line per CWE.
std::string export_matrix_csv(const HeatmapMatrix& matrix,
                              const RenderOptions& opts);

/// Raw count companion of export_matrix_csv.
std::string export_matrix_counts_csv(const HeatmapMatrix& matrix);

}  // namespace cvekw
