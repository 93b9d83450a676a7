#include "cplc/bitstr.hpp"

#include <algorithm>

namespace cplc {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::malformed_pair: return "MalformedPair";
    case Errc::malformed_instance: return "MalformedInstance";
    case Errc::scale_exceeded: return "ScaleExceeded";
    case Errc::overflow: return "Overflow";
    case Errc::degree_cap: return "DegreeCap";
    case Errc::param_mismatch: return "ParamMismatch";
    case Errc::out_of_table: return "OutOfTable";
    case Errc::oracle_timeout: return "OracleTimeout";
    case Errc::incompatible_endpoints: return "IncompatibleEndpoints";
    case Errc::missing_table_entry: return "MissingTableEntry";
    case Errc::missing_slice_poly: return "MissingSlicePoly";
    case Errc::source_shape_mismatch: return "SourceShapeMismatch";
    case Errc::length_audit_failure: return "LengthAuditFailure";
    case Errc::invalid_query_set: return "InvalidQuerySet";
    case Errc::checksum_mismatch: return "ChecksumMismatch";
    case Errc::io_error: return "IoError";
    case Errc::usage: return "Usage";
    case Errc::internal: return "Internal";
  }
  return "Error";
}

BitStr BitStr::from_text(std::string_view text) {
  BitStr out;
  out.bits_.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') raise(Errc::malformed_instance, "non-binary character in bit string");
    out.bits_.push_back(c);
  }
  return out;
}

std::size_t BitStr::popcount() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), '1'));
}

bool BitStr::all_ones() const {
  return bits_.find('0') == std::string::npos;
}

bool length_lex_less(const BitStr& a, const BitStr& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.text() < b.text();
}

BitStr encode_unary(std::uint64_t n) { return BitStr::ones(n); }

std::optional<std::uint64_t> unary_value(const BitStr& s) {
  if (!s.all_ones()) return std::nullopt;
  return s.size();
}

BitStr encode_pair(const BitStr& x, const BitStr& y) {
  BitStr out = BitStr::ones(x.size());
  out.push_back(false);
  out.append(x);
  out.append(y);
  return out;
}

std::pair<BitStr, BitStr> decode_pair(const BitStr& s) {
  std::size_t n = 0;
  while (n < s.size() && s.bit(n)) ++n;
  if (n == s.size()) raise(Errc::malformed_pair, "missing 0 sentinel");
  // prefix 1^n 0, then n bits of x.
  std::size_t body = n + 1;
  if (s.size() < body + n) raise(Errc::malformed_pair, "truncated first component");
  return {s.substr(body, n), s.substr(body + n, s.size() - body - n)};
}

bool is_valid_pair(const BitStr& s) {
  std::size_t n = 0;
  while (n < s.size() && s.bit(n)) ++n;
  return n < s.size() && s.size() >= 2 * n + 1;
}

std::uint64_t bitstr_hash(const BitStr& s) {
  // FNV-1a over the characters, then a splitmix finalizer.
  std::uint64_t h = 1469598103934665603ull;
  for (char c : s.text()) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  h ^= s.size() + 0x9e3779b97f4a7c15ull;
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ull;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebull;
  h ^= h >> 31;
  return h;
}

BitStr encode_pair_table(const std::vector<std::pair<BitStr, BitStr>>& entries) {
  // pair(e1, pair(e2, ... pair(en, ""))) lays out flat as the
  // concatenation of 1^{|e_i|} 0 e_i, so build it in one pass
  BitStr out;
  for (const auto& [k, v] : entries) {
    BitStr entry = encode_pair(k, v);
    out.append(BitStr::ones(entry.size()));
    out.push_back(false);
    out.append(entry);
  }
  return out;
}

// Positional walk, no intermediate copies; tables can run to megabits.
std::optional<BitStr> pair_table_lookup(const BitStr& table, const BitStr& key) {
  std::size_t pos = 0;
  const std::size_t n = table.size();
  while (pos < n) {
    std::size_t a = 0;  // |entry|
    while (pos + a < n && table.bit(pos + a)) ++a;
    std::size_t entry_begin = pos + a + 1;
    if (entry_begin + a > n) return std::nullopt;  // malformed chain
    std::size_t b = 0;  // |key|
    while (b < a && table.bit(entry_begin + b)) ++b;
    if (2 * b + 1 <= a) {
      std::size_t key_begin = entry_begin + b + 1;
      bool match = b == key.size();
      for (std::size_t i = 0; match && i < b; ++i)
        match = table.bit(key_begin + i) == key.bit(i);
      if (match) return table.substr(key_begin + b, a - 2 * b - 1);
    }
    pos = entry_begin + a;
  }
  return std::nullopt;
}

std::uint64_t length_lex_rank(const BitStr& s) {
  if (s.size() >= 63) raise(Errc::scale_exceeded, "length_lex_rank limited to |s| < 63");
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < s.size(); ++i) value = (value << 1) | (s.bit(i) ? 1u : 0u);
  return ((1ull << s.size()) - 1) + value;
}

BitStr length_lex_unrank(std::uint64_t rank) {
  std::size_t len = 0;
  while (((1ull << (len + 1)) - 1) <= rank) ++len;
  std::uint64_t value = rank - ((1ull << len) - 1);
  BitStr out;
  for (std::size_t i = 0; i < len; ++i) out.push_back((value >> (len - 1 - i)) & 1);
  return out;
}

}  // namespace cplc
