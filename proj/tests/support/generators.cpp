#include "support/generators.hpp"

#include <array>

namespace cvekw::testgen {

namespace {

constexpr std::array kKeywordForms = {
    "encrypted",     "Encryption",   "decrypts",        "cipher",
    "hashes",        "symmetric",    "asymmetric",      "signing",
    "signatures",    "plaintext",    "cleartext",       "public-key",
    "private key",   "certificates", "key-exchange",    "Diffie-Hellman",
    "randomness",    "salted",       "passwords",       "TLS",
    "RSA",           "AES",          "ECDSA",           "ECDH",
    "HMAC",          "elliptic",     "cryptanalysis",   "cryptographically",
    "side-channel",  "man-in-the-middle", "replay attack", "brute-force",
};

constexpr std::array kDecoys = {
    "path traversal", "universal",   "reversal", "maestro", "basalt",
    "hashtag",        "mTLS",        "TLSv1.2",  "RSA2048", "xAESy",
    "paes",           "cleartextual"};

constexpr std::array kFiller = {
    "A",      "flaw",    "in",    "the",     "component", "allows", "remote",
    "users",  "to",      "cause", "a",       "denial",    "of",     "service",
    "via",    "crafted", "input", "buffer",  "overflow",  "read",   "write",
    "before", "version", "when",  "handling"};

std::string flip_case(std::string word, std::mt19937& rng) {
  for (char& c : word) {
    if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
      if (c >= 'a' && c <= 'z')
        c = static_cast<char>(c - 32);
      else if (c >= 'A' && c <= 'Z')
        c = static_cast<char>(c + 32);
    }
  }
  return word;
}

}  // namespace

std::string random_description(std::mt19937& rng) {
  std::uniform_int_distribution<int> word_count(0, 14);
  std::uniform_int_distribution<int> pool_pick(0, 9);
  std::string out;
  int n = word_count(rng);
  for (int i = 0; i < n; ++i) {
    std::string word;
    int pool = pool_pick(rng);
    if (pool < 3) {
      word = kKeywordForms[std::uniform_int_distribution<std::size_t>(
          0, kKeywordForms.size() - 1)(rng)];
    } else if (pool < 5) {
      word = kDecoys[std::uniform_int_distribution<std::size_t>(
          0, kDecoys.size() - 1)(rng)];
    } else {
      word = kFiller[std::uniform_int_distribution<std::size_t>(
          0, kFiller.size() - 1)(rng)];
    }
    if (std::uniform_int_distribution<int>(0, 4)(rng) == 0)
      word = flip_case(std::move(word), rng);
    if (!out.empty())
      out += std::uniform_int_distribution<int>(0, 7)(rng) == 0 ? "-" : " ";
    out += word;
  }
  return out;
}

Corpus random_corpus(std::mt19937& rng, int max_records) {
  static const std::array<const char*, 8> kCwePool = {
      "CWE-79",  "CWE-89",  "CWE-200", "CWE-287",
      "CWE-327", "CWE-798", "NVD-CWE-noinfo", "NVD-CWE-Other"};

  Corpus corpus;
  corpus.window = {parse_date("2023-01-01"), parse_date("2024-09-30")};
  int n = std::uniform_int_distribution<int>(1, max_records)(rng);
  long span = (to_days(corpus.window.end) - to_days(corpus.window.start)).count();
  for (int i = 0; i < n; ++i) {
    CveRecord r;
    r.id = "CVE-2023-" + std::to_string(10000 + i);
    long offset = std::uniform_int_distribution<long>(0, span)(rng);
    r.published = Date{to_days(corpus.window.start) + std::chrono::days{offset}};
    r.description = random_description(rng);
    if (std::uniform_int_distribution<int>(0, 5)(rng) != 0) {
      // one-decimal scores in [0.1, 10.0]; no zero so the severity floor
      // rule stays observable
      int tenths = std::uniform_int_distribution<int>(1, 100)(rng);
      r.base_score = static_cast<double>(tenths) / 10.0;
    }
    int cwe_count = std::uniform_int_distribution<int>(1, 3)(rng);
    std::vector<CweId> cwes;
    for (int k = 0; k < cwe_count; ++k) {
      cwes.push_back(CweId::parse(kCwePool[std::uniform_int_distribution<std::size_t>(
          0, kCwePool.size() - 1)(rng)]));
    }
    std::sort(cwes.begin(), cwes.end());
    cwes.erase(std::unique(cwes.begin(), cwes.end()), cwes.end());
    r.cwes = std::move(cwes);
    corpus.records.push_back(std::move(r));
  }
  return corpus;
}

Corpus synthetic_corpus(std::size_t n) {
  std::mt19937 rng(424242);
  Corpus corpus;
  corpus.window = {parse_date("2023-01-01"), parse_date("2024-09-30")};
  corpus.records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    CveRecord r;
    r.id = "CVE-2023-" + std::to_string(100000 + i);
    r.published = Date{to_days(corpus.window.start) +
                       std::chrono::days{static_cast<long>(i % 600)}};
    std::string desc = random_description(rng);
    while (desc.size() < 180) desc += " " + random_description(rng);
    r.description = std::move(desc);
    if (i % 7 != 0)
      r.base_score =
          static_cast<double>(std::uniform_int_distribution<int>(1, 100)(rng)) / 10.0;
    r.cwes.push_back(CweId::parse("CWE-" + std::to_string(20 + (i % 40))));
    corpus.records.push_back(std::move(r));
  }
  return corpus;
}

}  // namespace cvekw::testgen
