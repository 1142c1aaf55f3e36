#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cvekw/corpus.hpp"

namespace cvekw {

enum class MatchMode {
  Substring,     // any occurrence in the normalized text
  BoundedToken,  // occurrence with no ASCII letter/digit adjacent on either side
};

struct Keyword {
  std::string canonical;  // display form
  std::string pattern;    // normalize(canonical)
  MatchMode mode = MatchMode::Substring;
};

/// Hyphens (ASCII '-', U+2010, U+2011) become single spaces; ASCII letters are
/// lowercased. Nothing else changes; en/em dashes stay as they are.
std::string normalize(std::string_view text);

/// Short acronyms matched with the boundary rule by default.
bool is_default_bounded_token(std::string_view normalized_pattern);

class KeywordSet {
 public:
  /// Validates patterns are non-empty and unique after normalization.
  static KeywordSet from_keywords(std::vector<Keyword> keywords);

  /// The built-in 31-keyword set.
  static const KeywordSet& builtin();

  std::size_t size() const { return keywords_.size(); }
  const Keyword& at(std::size_t i) const { return keywords_[i]; }
  auto begin() const { return keywords_.begin(); }
  auto end() const { return keywords_.end(); }

 private:
  std::vector<Keyword> keywords_;
};

/// Per-CVE set of distinct matched keywords (canonical form, keyword-set
/// order, no duplicates).
struct MatchResult {
  std::string cve_id;
  std::vector<std::string> matched;
};

/// Multi-pattern scanner over normalized text (Aho-Corasick automaton).
class KeywordMatcher {
 public:
  explicit KeywordMatcher(const KeywordSet& keywords);

  /// Indices into the keyword set, ascending.
  std::vector<std::uint32_t> match_indices(std::string_view text) const;
  /// Canonical names, in keyword-set order.
  std::vector<std::string> match(std::string_view text) const;

 private:
  struct Node {
    std::array<std::int32_t, 256> next;
    std::int32_t fail = 0;
    std::vector<std::uint32_t> out;  // keyword indices whose pattern ends here
  };

  const KeywordSet* keywords_;
  std::vector<Node> nodes_;
};

std::vector<std::string> match_description(std::string_view text,
                                           const KeywordSet& keywords);

/// One MatchResult per record, corpus order. Expects a rejected-filtered corpus.
std::vector<MatchResult> match_corpus(const Corpus& corpus,
                                      const KeywordSet& keywords);

// Keyword config: UTF-8, one keyword per line, '#' comment lines, optional
// "\t@token" / "\t@substring" mode override.
KeywordSet parse_keyword_config_text(std::string_view text);
KeywordSet parse_keyword_config(const std::filesystem::path& path);

}  // namespace cvekw
