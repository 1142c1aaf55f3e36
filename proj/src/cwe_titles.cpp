#include "cvekw/cwe_titles.hpp"

#include <algorithm>
#include <utility>

namespace cvekw {

namespace {

// Sorted by numeric id.
constexpr std::pair<long, std::string_view> kTitles[] = {
    {20, "Improper Input Validation"},
    {22, "Improper Limitation of a Pathname to a Restricted Directory ('Path Traversal')"},
    {77, "Improper Neutralization of Special Elements used in a Command ('Command Injection')"},
    {78, "Improper Neutralization of Special Elements used in an OS Command ('OS Command Injection')"},
    {79, "Improper Neutralization of Input During Web Page Generation ('Cross-site Scripting')"},
    {89, "Improper Neutralization of Special Elements used in an SQL Command ('SQL Injection')"},
    {94, "Improper Control of Generation of Code ('Code Injection')"},
    {119, "Improper Restriction of Operations within the Bounds of a Memory Buffer"},
    {120, "Buffer Copy without Checking Size of Input ('Classic Buffer Overflow')"},
    {121, "Stack-based Buffer Overflow"},
    {122, "Heap-based Buffer Overflow"},
    {125, "Out-of-bounds Read"},
    {190, "Integer Overflow or Wraparound"},
    {200, "Exposure of Sensitive Information to an Unauthorized Actor"},
    {203, "Observable Discrepancy"},
    {256, "Plaintext Storage of a Password"},
    {257, "Storing Passwords in a Recoverable Format"},
    {259, "Use of Hard-coded Password"},
    {261, "Weak Encoding for Password"},
    {276, "Incorrect Default Permissions"},
    {284, "Improper Access Control"},
    {287, "Improper Authentication"},
    {294, "Authentication Bypass by Capture-replay"},
    {295, "Improper Certificate Validation"},
    {306, "Missing Authentication for Critical Function"},
    {307, "Improper Restriction of Excessive Authentication Attempts"},
    {311, "Missing Encryption of Sensitive Data"},
    {312, "Cleartext Storage of Sensitive Information"},
    {319, "Cleartext Transmission of Sensitive Information"},
    {321, "Use of Hard-coded Cryptographic Key"},
    {325, "Missing Cryptographic Step"},
    {326, "Inadequate Encryption Strength"},
    {327, "Use of a Broken or Risky Cryptographic Algorithm"},
    {328, "Use of Weak Hash"},
    {329, "Generation of Predictable IV with CBC Mode"},
    {330, "Use of Insufficiently Random Values"},
    {331, "Insufficient Entropy"},
    {335, "Incorrect Usage of Seeds in Pseudo-Random Number Generator (PRNG)"},
    {338, "Use of Cryptographically Weak Pseudo-Random Number Generator (PRNG)"},
    {345, "Insufficient Verification of Data Authenticity"},
    {347, "Improper Verification of Cryptographic Signature"},
    {352, "Cross-Site Request Forgery (CSRF)"},
    {384, "Session Fixation"},
    {416, "Use After Free"},
    {434, "Unrestricted Upload of File with Dangerous Type"},
    {476, "NULL Pointer Dereference"},
    {494, "Download of Code Without Integrity Check"},
    {502, "Deserialization of Untrusted Data"},
    {521, "Weak Password Requirements"},
    {522, "Insufficiently Protected Credentials"},
    {532, "Insertion of Sensitive Information into Log File"},
    {601, "URL Redirection to Untrusted Site ('Open Redirect')"},
    {613, "Insufficient Session Expiration"},
    {614, "Sensitive Cookie in HTTPS Session Without 'Secure' Attribute"},
    {640, "Weak Password Recovery Mechanism for Forgotten Password"},
    {757, "Selection of Less-Secure Algorithm During Negotiation ('Algorithm Downgrade')"},
    {759, "Use of a One-Way Hash without a Salt"},
    {760, "Use of a One-Way Hash with a Predictable Salt"},
    {770, "Allocation of Resources Without Limits or Throttling"},
    {787, "Out-of-bounds Write"},
    {798, "Use of Hard-coded Credentials"},
    {862, "Missing Authorization"},
    {863, "Incorrect Authorization"},
    {916, "Use of Password Hash With Insufficient Computational Effort"},
    {918, "Server-Side Request Forgery (SSRF)"},
    {1321, "Improperly Controlled Modification of Object Prototype Attributes ('Prototype Pollution')"},
};

}  // namespace

std::string_view cwe_title(const CweId& id) {
  if (id.is_pseudo()) return {};
  auto it = std::lower_bound(
      std::begin(kTitles), std::end(kTitles), id.numeric(),
      [](const auto& entry, long value) { return entry.first < value; });
  if (it != std::end(kTitles) && it->first == id.numeric()) return it->second;
  return {};
}

}  // namespace cvekw
