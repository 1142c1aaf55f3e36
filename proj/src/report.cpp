#include "cvekw/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cvekw/errors.hpp"
#include "cvekw/format.hpp"

namespace cvekw {

namespace {

void validate(const RenderOptions& opts) {
  if (opts.decimals < 0 || opts.decimals > 6) {
    throw RenderError("decimals out of range [0, 6]");
  }
  if (opts.cell_size < 4 || opts.cell_size > 64) {
    throw RenderError("cell_size out of range [4, 64]");
  }
}

std::string csv_field(std::string_view text) {
  bool needs_quotes = text.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!needs_quotes) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string latex_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "\\&"; break;
      case '%': out += "\\%"; break;
      case '#': out += "\\#"; break;
      case '_': out += "\\_"; break;
      case '$': out += "\\$"; break;
      case '{': out += "\\{"; break;
      case '}': out += "\\}"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string score_cell(const std::optional<double>& score, bool highlighted,
                       const RenderOptions& opts) {
  if (!score) return "";
  std::string text = format_fixed(*score, opts.decimals);
  if (opts.format == RenderFormat::LatexFragment && opts.highlight && highlighted) {
    return "\\textcolor{red}{" + text + "}";
  }
  return text;
}

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

// Linear white -> red (#CC0000) ramp in RGB.
std::string heat_color(double value, double value_max) {
  double t = value_max > 0.0 ? value / value_max : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  int red = 255 - static_cast<int>(std::llround(t * (255 - 0xCC)));
  int other = 255 - static_cast<int>(std::llround(t * 255));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02X%02X%02X", red, other, other);
  return buf;
}

}  // namespace

std::string render_keyword_table(const std::vector<KeywordStats>& stats,
                                 const RenderOptions& opts) {
  validate(opts);
  std::string out;
  if (opts.format == RenderFormat::Csv) {
    out = "keyword,cve,unique_cwe,avg_score,above_avg\n";
    for (const auto& row : stats) {
      out += csv_field(row.keyword);
      out += ',' + std::to_string(row.cve_count);
      out += ',' + std::to_string(row.unique_cwe_count);
      out += ',' + score_cell(row.avg_score, false, opts);
      out += row.above_dataset_avg ? ",true\n" : ",false\n";
    }
    return out;
  }
  if (opts.format == RenderFormat::LatexFragment) {
    out = "Keyword & CVE & Unique CWE & Avg Score \\\\\n\\midrule\n";
    for (const auto& row : stats) {
      out += latex_escape(row.keyword);
      out += " & " + std::to_string(row.cve_count);
      out += " & " + std::to_string(row.unique_cwe_count);
      out += " & " + score_cell(row.avg_score, row.above_dataset_avg, opts);
      out += " \\\\\n";
    }
    return out;
  }
  throw RenderError("keyword table renders as csv or tex");
}

std::string render_cwe_table(const std::vector<CweStats>& stats,
                             const RenderOptions& opts) {
  validate(opts);
  std::string out;
  if (opts.format == RenderFormat::Csv) {
    out = "cwe,title,keywords,avg_score,dataset,above_dataset\n";
    for (const auto& row : stats) {
      out += csv_field(row.cwe.value());
      out += ',' + csv_field(row.title);
      out += ',' + std::to_string(row.keyword_count);
      out += ',' + score_cell(row.avg_score_matched, false, opts);
      out += ',' + score_cell(row.avg_score_dataset, false, opts);
      out += row.above_dataset ? ",true\n" : ",false\n";
    }
    return out;
  }
  if (opts.format == RenderFormat::LatexFragment) {
    out = "CWE & Title & Keywords & Avg Score & Dataset \\\\\n\\midrule\n";
    for (const auto& row : stats) {
      out += latex_escape(row.cwe.value());
      out += " & " + latex_escape(row.title);
      out += " & " + std::to_string(row.keyword_count);
      out += " & " + score_cell(row.avg_score_matched, row.above_dataset, opts);
      out += " & " + score_cell(row.avg_score_dataset, false, opts);
      out += " \\\\\n";
    }
    return out;
  }
  throw RenderError("CWE table renders as csv or tex");
}

std::string render_heatmap_svg(const HeatmapMatrix& matrix,
                               const RenderOptions& opts) {
  validate(opts);
  std::size_t n_rows = matrix.rows.size();
  std::size_t n_cols = matrix.cols.size();
  if (n_rows == 0 || n_cols == 0) {
    throw RenderError("cannot render a zero-dimension heatmap");
  }
  double value_max =
      matrix.kind == HeatmapKind::PrevalenceNormalized ? 1.0 : 10.0;
  int cell = opts.cell_size;

  std::size_t row_label_chars = 0;
  for (const auto& id : matrix.rows) {
    row_label_chars = std::max(row_label_chars, id.value().size());
  }
  std::size_t col_label_chars = 0;
  for (const auto& kw : matrix.cols) {
    col_label_chars = std::max(col_label_chars, kw.size());
  }
  // 10px monospace runs about 7px per glyph.
  int left = static_cast<int>(row_label_chars) * 7 + 10;
  int top = static_cast<int>(col_label_chars) * 7 + 10;
  int width = left + static_cast<int>(n_cols) * cell;
  int height = top + static_cast<int>(n_rows) * cell;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) +
         "\" viewBox=\"0 0 " + std::to_string(width) + " " +
         std::to_string(height) + "\">\n";
  svg += "<style>\n";
  svg += "text { font-family: monospace; font-size: 10px; fill: #000000; }\n";
  svg += "rect { width: " + std::to_string(cell) + "px; height: " +
         std::to_string(cell) + "px; stroke: #999999; stroke-width: 0.5; }\n";
  svg += "</style>\n";

  for (std::size_t c = 0; c < n_cols; ++c) {
    int x = left + static_cast<int>(c) * cell + cell - 4;
    int y = top - 6;
    svg += "<text x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
           "\" transform=\"rotate(-90 " + std::to_string(x) + " " +
           std::to_string(y) + ")\">" + xml_escape(matrix.cols[c]) + "</text>\n";
  }
  for (std::size_t r = 0; r < n_rows; ++r) {
    int y = top + static_cast<int>(r) * cell + cell - 4;
    svg += "<text x=\"" + std::to_string(left - 6) + "\" y=\"" +
           std::to_string(y) + "\" text-anchor=\"end\">" +
           xml_escape(matrix.rows[r].value()) + "</text>\n";
  }
  for (std::size_t r = 0; r < n_rows; ++r) {
    for (std::size_t c = 0; c < n_cols; ++c) {
      svg += "<rect x=\"" + std::to_string(left + static_cast<int>(c) * cell) +
             "\" y=\"" + std::to_string(top + static_cast<int>(r) * cell) +
             "\" fill=\"" + heat_color(matrix.values[r][c], value_max) +
             "\"/>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

std::string export_matrix_csv(const HeatmapMatrix& matrix,
                              const RenderOptions& opts) {
  validate(opts);
  std::string out = "cwe";
  for (const auto& kw : matrix.cols) out += ',' + csv_field(kw);
  out.push_back('\n');
  for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
    out += csv_field(matrix.rows[r].value());
    for (std::size_t c = 0; c < matrix.cols.size(); ++c) {
      out += ',' + format_fixed(matrix.values[r][c], opts.decimals);
    }
    out.push_back('\n');
  }
  return out;
}

std::string export_matrix_counts_csv(const HeatmapMatrix& matrix) {
  std::string out = "cwe";
  for (const auto& kw : matrix.cols) out += ',' + csv_field(kw);
  out.push_back('\n');
  for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
    out += csv_field(matrix.rows[r].value());
    for (std::size_t c = 0; c < matrix.cols.size(); ++c) {
      out += ',' + std::to_string(matrix.raw_counts[r][c]);
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace cvekw
