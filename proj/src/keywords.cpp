#include "cvekw/keywords.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "cvekw/errors.hpp"

namespace cvekw {

std::string normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (c == '-') {
      out.push_back(' ');
      continue;
    }
    // U+2010 hyphen / U+2011 non-breaking hyphen
    if (c == 0xE2 && i + 2 < text.size() &&
        static_cast<unsigned char>(text[i + 1]) == 0x80) {
      unsigned char third = static_cast<unsigned char>(text[i + 2]);
      if (third == 0x90 || third == 0x91) {
        out.push_back(' ');
        i += 2;
        continue;
      }
    }
    if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
    out.push_back(static_cast<char>(c));
  }
  return out;
}

bool is_default_bounded_token(std::string_view normalized_pattern) {
  static const std::unordered_set<std::string_view> acronyms = {
      "rsa", "aes", "tls", "hmac", "ecdsa", "ecdh"};
  return acronyms.count(normalized_pattern) > 0;
}

KeywordSet KeywordSet::from_keywords(std::vector<Keyword> keywords) {
  std::unordered_set<std::string> seen;
  for (const auto& kw : keywords) {
    if (kw.pattern.empty()) {
      throw std::invalid_argument("keyword with empty pattern: " + kw.canonical);
    }
    if (kw.pattern != normalize(kw.canonical)) {
      throw std::invalid_argument("pattern is not normalize(canonical): " +
                                  kw.canonical);
    }
    if (!seen.insert(kw.pattern).second) {
      throw std::invalid_argument("duplicate keyword: " + kw.canonical);
    }
  }
  KeywordSet set;
  set.keywords_ = std::move(keywords);
  return set;
}

const KeywordSet& KeywordSet::builtin() {
  static const KeywordSet set = [] {
    const char* names[] = {
        "encrypt",    "decrypt",      "cipher",        "hash",
        "symmetric",  "asymmetric",   "signing",       "signature",
        "plaintext",  "cleartext",    "public key",    "private key",
        "certificate", "key exchange", "Diffie",        "random",
        "salt",       "password",     "TLS",           "RSA",
        "AES",        "ECDSA",        "ECDH",          "HMAC",
        "elliptic",   "cryptanalysis", "cryptographic", "side channel",
        "man in the middle", "replay attack", "brute force",
    };
    std::vector<Keyword> keywords;
    keywords.reserve(std::size(names));
    for (const char* name : names) {
      Keyword kw;
      kw.canonical = name;
      kw.pattern = normalize(name);
      kw.mode = is_default_bounded_token(kw.pattern) ? MatchMode::BoundedToken
                                                     : MatchMode::Substring;
      keywords.push_back(std::move(kw));
    }
    return from_keywords(std::move(keywords));
  }();
  return set;
}

KeywordMatcher::KeywordMatcher(const KeywordSet& keywords) : keywords_(&keywords) {
  nodes_.emplace_back();
  nodes_[0].next.fill(-1);
  // Trie over pattern bytes.
  for (std::uint32_t idx = 0; idx < keywords.size(); ++idx) {
    std::int32_t state = 0;
    for (unsigned char c : keywords.at(idx).pattern) {
      if (nodes_[state].next[c] < 0) {
        nodes_[state].next[c] = static_cast<std::int32_t>(nodes_.size());
        nodes_.emplace_back().next.fill(-1);
      }
      state = nodes_[state].next[c];
    }
    nodes_[state].out.push_back(idx);
  }
  // Breadth-first failure links, folding missing edges into the automaton.
  std::deque<std::int32_t> queue;
  for (int c = 0; c < 256; ++c) {
    std::int32_t& child = nodes_[0].next[c];
    if (child < 0) {
      child = 0;
    } else {
      nodes_[child].fail = 0;
      queue.push_back(child);
    }
  }
  while (!queue.empty()) {
    std::int32_t state = queue.front();
    queue.pop_front();
    const auto& fail_out = nodes_[nodes_[state].fail].out;
    nodes_[state].out.insert(nodes_[state].out.end(), fail_out.begin(),
                             fail_out.end());
    for (int c = 0; c < 256; ++c) {
      std::int32_t child = nodes_[state].next[c];
      if (child < 0) {
        nodes_[state].next[c] = nodes_[nodes_[state].fail].next[c];
      } else {
        nodes_[child].fail = nodes_[nodes_[state].fail].next[c];
        queue.push_back(child);
      }
    }
  }
}

std::vector<std::uint32_t> KeywordMatcher::match_indices(std::string_view text) const {
  std::string norm = normalize(text);
  std::vector<bool> hit(keywords_->size(), false);
  std::size_t remaining = keywords_->size();
  auto is_alnum = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
  };
  std::int32_t state = 0;
  for (std::size_t pos = 0; pos < norm.size() && remaining > 0; ++pos) {
    state = nodes_[state].next[static_cast<unsigned char>(norm[pos])];
    for (std::uint32_t idx : nodes_[state].out) {
      if (hit[idx]) continue;
      const Keyword& kw = keywords_->at(idx);
      if (kw.mode == MatchMode::BoundedToken) {
        std::size_t start = pos + 1 - kw.pattern.size();
        bool left_ok = start == 0 || !is_alnum(norm[start - 1]);
        bool right_ok = pos + 1 == norm.size() || !is_alnum(norm[pos + 1]);
        if (!left_ok || !right_ok) continue;
      }
      hit[idx] = true;
      --remaining;
    }
  }
  std::vector<std::uint32_t> matched;
  for (std::uint32_t i = 0; i < hit.size(); ++i) {
    if (hit[i]) matched.push_back(i);
  }
  return matched;
}

std::vector<std::string> KeywordMatcher::match(std::string_view text) const {
  std::vector<std::string> out;
  for (std::uint32_t idx : match_indices(text)) {
    out.push_back(keywords_->at(idx).canonical);
  }
  return out;
}

std::vector<std::string> match_description(std::string_view text,
                                           const KeywordSet& keywords) {
  return KeywordMatcher(keywords).match(text);
}

std::vector<MatchResult> match_corpus(const Corpus& corpus,
                                      const KeywordSet& keywords) {
  KeywordMatcher matcher(keywords);
  std::vector<MatchResult> results;
  results.reserve(corpus.records.size());
  for (const auto& rec : corpus.records) {
    results.push_back({rec.id, matcher.match(rec.description)});
  }
  return results;
}

KeywordSet parse_keyword_config_text(std::string_view text) {
  std::vector<Keyword> keywords;
  std::unordered_map<std::string, std::size_t> seen;  // pattern -> line
  std::size_t line_number = 0;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    auto eol = text.find('\n', begin);
    std::string_view line = eol == std::string_view::npos
                                ? text.substr(begin)
                                : text.substr(begin, eol - begin);
    begin = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    auto tab = line.find('\t');
    std::string_view name = line.substr(0, tab);
    while (!name.empty() && name.front() == ' ') name.remove_prefix(1);
    while (!name.empty() && name.back() == ' ') name.remove_suffix(1);

    Keyword kw;
    kw.canonical = std::string(name);
    kw.pattern = normalize(kw.canonical);
    if (kw.pattern.empty()) {
      throw ConfigError("empty keyword (line " + std::to_string(line_number) + ")",
                        line_number);
    }
    if (tab == std::string_view::npos) {
      kw.mode = is_default_bounded_token(kw.pattern) ? MatchMode::BoundedToken
                                                     : MatchMode::Substring;
    } else {
      std::string_view flag = line.substr(tab + 1);
      if (flag == "@token") {
        kw.mode = MatchMode::BoundedToken;
      } else if (flag == "@substring") {
        kw.mode = MatchMode::Substring;
      } else {
        throw ConfigError("unknown keyword flag '" + std::string(flag) +
                              "' (line " + std::to_string(line_number) + ")",
                          line_number);
      }
    }
    auto [it, inserted] = seen.emplace(kw.pattern, line_number);
    if (!inserted) {
      throw ConfigError("duplicate keyword '" + kw.canonical + "' (line " +
                            std::to_string(line_number) + ")",
                        line_number);
    }
    keywords.push_back(std::move(kw));
  }
  if (keywords.empty()) {
    throw ConfigError("keyword config contains no keywords");
  }
  return KeywordSet::from_keywords(std::move(keywords));
}

KeywordSet parse_keyword_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open keyword config: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_keyword_config_text(buf.str());
}

}  // namespace cvekw
