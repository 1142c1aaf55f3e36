#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "cvekw/errors.hpp"
#include "cvekw/keywords.hpp"
#include "support/generators.hpp"
#include "support/naive_oracle.hpp"

using namespace cvekw;

namespace {

std::vector<std::string> builtin_match(std::string_view text) {
  return match_description(text, KeywordSet::builtin());
}

std::set<std::string> as_set(const std::vector<std::string>& v) {
  return {v.begin(), v.end()};
}

}  // namespace

TEST_CASE("normalize folds case and hyphens") {
  CHECK(normalize("Man-in-the-Middle") == "man in the middle");
  CHECK(normalize("") == "");
  CHECK(normalize("AES-256 Encryption") == "aes 256 encryption");
  CHECK(normalize("already lower case") == "already lower case");
  CHECK(normalize("--") == "  ");
  // U+2010 hyphen and U+2011 non-breaking hyphen count as hyphens
  CHECK(normalize("man\xE2\x80\x90in\xE2\x80\x91the-middle") == "man in the middle");
  // en dash and em dash are different characters and stay put
  CHECK(normalize("key\xE2\x80\x93" "exchange") == "key\xE2\x80\x93" "exchange");
  CHECK(normalize("key\xE2\x80\x94" "exchange") == "key\xE2\x80\x94" "exchange");
  // other whitespace and punctuation pass through
  CHECK(normalize("A\tB\nC.") == "a\tb\nc.");
  CHECK(normalize("caf\xC3\xA9") == "caf\xC3\xA9");
}

TEST_CASE("normalize is idempotent") {
  for (const char* s : {"Man-in-the-Middle", "AES-256", "tls\xE2\x80\x90v1",
                        "MiXeD CaSe-Text", "caf\xC3\xA9 r\xC3\xA9sum\xC3\xA9"}) {
    CHECK(normalize(normalize(s)) == normalize(s));
  }
}

TEST_CASE("builtin set has 31 keywords with acronym boundary modes") {
  const KeywordSet& set = KeywordSet::builtin();
  CHECK(set.size() == 31);
  std::set<std::string> bounded;
  for (const Keyword& kw : set) {
    CHECK(kw.pattern == normalize(kw.canonical));
    if (kw.mode == MatchMode::BoundedToken) bounded.insert(kw.canonical);
  }
  CHECK(bounded == std::set<std::string>{"RSA", "AES", "TLS", "HMAC", "ECDSA", "ECDH"});
}

TEST_CASE("substring keywords match inside words") {
  CHECK(builtin_match("Data is stored encrypted at rest") ==
        std::vector<std::string>{"encrypt"});
  CHECK(as_set(builtin_match("Basalt formation hashtag handling")) ==
        std::set<std::string>{"hash", "salt"});
  CHECK(builtin_match("cryptographically weak") ==
        std::vector<std::string>{"cryptographic"});
  // asymmetric contains symmetric; both fire by design
  CHECK(as_set(builtin_match("asymmetric key setup")) ==
        std::set<std::string>{"symmetric", "asymmetric"});
}

TEST_CASE("acronyms do not fire inside other words") {
  CHECK(builtin_match("A path traversal vulnerability in the product").empty());
  CHECK(builtin_match("universal reversal of maestro settings").empty());
  CHECK(builtin_match("TLSv1.2 and mTLS are unrelated here").empty());
  CHECK(builtin_match("RSA2048").empty());
  CHECK(builtin_match("ECDHE suites").empty());
  CHECK(builtin_match("RSA key generation is weak") ==
        std::vector<std::string>{"RSA"});
  // hyphen becomes a boundary
  CHECK(builtin_match("RSA-2048 modulus") == std::vector<std::string>{"RSA"});
  CHECK(as_set(builtin_match("AES-GCM nonce reuse")) == std::set<std::string>{"AES"});
  // underscore is not a letter or digit, so it delimits
  CHECK(builtin_match("rsa_key leak") == std::vector<std::string>{"RSA"});
  // start and end of text are boundaries
  CHECK(builtin_match("tls") == std::vector<std::string>{"TLS"});
}

TEST_CASE("hyphenated and unicode-hyphen forms match multi-word keywords") {
  CHECK(as_set(builtin_match("A Man-in-the-Middle can mount a replay attack")) ==
        std::set<std::string>{"man in the middle", "replay attack"});
  CHECK(builtin_match("man\xE2\x80\x90in\xE2\x80\x90the\xE2\x80\x90middle attack") ==
        std::vector<std::string>{"man in the middle"});
  CHECK(builtin_match("public-key pinning") ==
        std::vector<std::string>{"public key"});
  // en dash is not a hyphen
  CHECK(builtin_match("key\xE2\x80\x93" "exchange rollover").empty());
}

TEST_CASE("repeats count once and results follow keyword-set order") {
  CHECK(builtin_match("password password password") ==
        std::vector<std::string>{"password"});
  // certificate (index 12) precedes TLS (index 18)
  CHECK(builtin_match("TLS certificate pinning") ==
        std::vector<std::string>{"certificate", "TLS"});
  CHECK(builtin_match("").empty());
}

TEST_CASE("match_corpus aligns with records") {
  Corpus corpus;
  corpus.window = {parse_date("2023-01-01"), parse_date("2023-12-31")};
  for (int i = 0; i < 3; ++i) {
    CveRecord r;
    r.id = "CVE-2023-100" + std::to_string(i);
    r.published = parse_date("2023-05-01");
    r.description = i == 1 ? "uses a weak password hash" : "nothing here";
    corpus.records.push_back(std::move(r));
  }
  auto matches = match_corpus(corpus, KeywordSet::builtin());
  REQUIRE(matches.size() == 3);
  CHECK(matches[0].cve_id == "CVE-2023-1000");
  CHECK(matches[0].matched.empty());
  CHECK(as_set(matches[1].matched) == std::set<std::string>{"hash", "password"});
  CHECK(matches[2].matched.empty());
}

TEST_CASE("keyword config parses modes, comments and overrides") {
  KeywordSet set = parse_keyword_config_text(
      "# comment line\n"
      "\n"
      "encrypt\n"
      "RSA\n"
      "foo\t@token\n"
      "TLS\t@substring\n"
      "  padded  \r\n");
  REQUIRE(set.size() == 5);
  CHECK(set.at(0).canonical == "encrypt");
  CHECK(set.at(0).mode == MatchMode::Substring);
  CHECK(set.at(1).canonical == "RSA");
  CHECK(set.at(1).mode == MatchMode::BoundedToken);  // default acronym rule
  CHECK(set.at(2).canonical == "foo");
  CHECK(set.at(2).mode == MatchMode::BoundedToken);  // forced
  CHECK(set.at(3).canonical == "TLS");
  CHECK(set.at(3).mode == MatchMode::Substring);  // forced off
  CHECK(set.at(4).canonical == "padded");
}

TEST_CASE("keyword config rejects duplicates, unknown flags, empty sets") {
  try {
    parse_keyword_config_text("al-pha\nAL PHA\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line_number == 2);  // duplicate after normalization
  }
  try {
    parse_keyword_config_text("alpha\tbeta\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line_number == 1);
  }
  CHECK_THROWS_AS(parse_keyword_config_text(""), ConfigError);
  CHECK_THROWS_AS(parse_keyword_config_text("# only comments\n"), ConfigError);
  CHECK_THROWS_AS(parse_keyword_config_text("kw\t@bogus\n"), ConfigError);
  CHECK_THROWS_AS(parse_keyword_config(
                      std::filesystem::path("/does/not/exist.kw")),
                  ConfigError);
}

TEST_CASE("matcher agrees with the naive scanner on generated text") {
  const KeywordSet& set = KeywordSet::builtin();
  KeywordMatcher matcher(set);
  std::mt19937 rng(1337);
  for (int i = 0; i < 2000; ++i) {
    std::string text = testgen::random_description(rng);
    CHECK(matcher.match(text) == oracle::match_description(text, set));
  }
}

TEST_CASE("matching is case-invariant") {
  KeywordMatcher matcher(KeywordSet::builtin());
  std::mt19937 rng(7);
  for (int i = 0; i < 500; ++i) {
    std::string text = testgen::random_description(rng);
    std::string upper = text;
    for (char& c : upper)
      if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 32);
    CHECK(matcher.match(text) == matcher.match(upper));
  }
}

TEST_CASE("swapping spaces for hyphens never changes the matched set") {
  KeywordMatcher matcher(KeywordSet::builtin());
  std::mt19937 rng(99);
  for (int i = 0; i < 500; ++i) {
    std::string text = testgen::random_description(rng);
    std::string swapped = text;
    for (char& c : swapped) {
      if (c == ' ' && std::uniform_int_distribution<int>(0, 1)(rng)) c = '-';
    }
    CHECK(matcher.match(text) == matcher.match(swapped));
  }
}

TEST_CASE("appending text preserves matches at safe seams") {
  KeywordMatcher matcher(KeywordSet::builtin());
  std::mt19937 rng(2024);
  const KeywordSet& set = KeywordSet::builtin();
  for (int i = 0; i < 500; ++i) {
    std::string text = testgen::random_description(rng);
    auto before = matcher.match(text);

    // a separator-first suffix can only add keywords
    auto grown = matcher.match(text + ". also mentions salt");
    for (const std::string& kw : before) {
      CHECK(std::find(grown.begin(), grown.end(), kw) != grown.end());
    }

    // an arbitrary suffix keeps every substring-mode keyword; a bounded token
    // at the very end may legitimately lose its right boundary
    auto glued = matcher.match(text + "x9");
    for (const std::string& kw : before) {
      auto it = std::find_if(set.begin(), set.end(), [&](const Keyword& k) {
        return k.canonical == kw;
      });
      REQUIRE(it != set.end());
      if (it->mode == MatchMode::Substring) {
        CHECK(std::find(glued.begin(), glued.end(), kw) != glued.end());
      }
    }
  }
}

TEST_CASE("matched set is insensitive to keyword order") {
  std::vector<Keyword> forward;
  for (const Keyword& kw : KeywordSet::builtin()) forward.push_back(kw);
  std::vector<Keyword> reversed(forward.rbegin(), forward.rend());
  KeywordSet reversed_set = KeywordSet::from_keywords(reversed);

  KeywordMatcher a(KeywordSet::builtin());
  KeywordMatcher b(reversed_set);
  std::mt19937 rng(5150);
  for (int i = 0; i < 300; ++i) {
    std::string text = testgen::random_description(rng);
    CHECK(as_set(a.match(text)) == as_set(b.match(text)));
  }
}

TEST_CASE("match size never exceeds the keyword set size") {
  KeywordMatcher matcher(KeywordSet::builtin());
  std::mt19937 rng(31);
  for (int i = 0; i < 300; ++i) {
    auto m = matcher.match(testgen::random_description(rng));
    CHECK(m.size() <= KeywordSet::builtin().size());
    CHECK(as_set(m).size() == m.size());  // duplicate-free
  }
}
