#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cplc/error.hpp"

namespace cplc {

/// A finite string over {0,1}. Instances, parameters and compiled payloads
/// are all BitStr values; |x| is the number of bits.
class BitStr {
 public:
  BitStr() = default;

  static BitStr from_text(std::string_view text);
  static BitStr ones(std::size_t n) { return BitStr(std::string(n, '1')); }
  static BitStr zeros(std::size_t n) { return BitStr(std::string(n, '0')); }

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  bool bit(std::size_t i) const { return bits_[i] == '1'; }

  void push_back(bool b) { bits_.push_back(b ? '1' : '0'); }
  void append(const BitStr& other) { bits_ += other.bits_; }
  void set_bit(std::size_t i, bool b) { bits_[i] = b ? '1' : '0'; }

  BitStr substr(std::size_t pos, std::size_t len) const {
    return BitStr(bits_.substr(pos, len));
  }

  /// Number of '1' characters.
  std::size_t popcount() const;
  bool all_ones() const;

  const std::string& text() const { return bits_; }

  friend bool operator==(const BitStr&, const BitStr&) = default;
  // Lexicographic; see length_lex_less for the table order.
  friend std::strong_ordering operator<=>(const BitStr& a, const BitStr& b) {
    return a.bits_ <=> b.bits_;
  }

 private:
  explicit BitStr(std::string bits) : bits_(std::move(bits)) {}
  std::string bits_;
};

/// Length-then-lexicographic order; enumerates Sigma^{<=m} in table order.
bool length_lex_less(const BitStr& a, const BitStr& b);

/// un(n) = 1^n.
BitStr encode_unary(std::uint64_t n);

/// The value n of an all-ones string, or nullopt when some bit is 0.
std::optional<std::uint64_t> unary_value(const BitStr& s);

/// Self-delimiting pairing: 1^{|x|} 0 x y.
BitStr encode_pair(const BitStr& x, const BitStr& y);

/// Inverse of encode_pair; throws Errc::malformed_pair.
std::pair<BitStr, BitStr> decode_pair(const BitStr& s);

bool is_valid_pair(const BitStr& s);

/// 64-bit content hash (used by sparse table keys).
std::uint64_t bitstr_hash(const BitStr& s);

/// (key, value) list as a right-nested chain of pairs, empty-terminated.
BitStr encode_pair_table(const std::vector<std::pair<BitStr, BitStr>>& entries);
std::optional<BitStr> pair_table_lookup(const BitStr& table, const BitStr& key);

/// Rank of s among all strings of length <= m in length-then-lex order.
/// Strings of length L occupy [2^L - 1, 2^{L+1} - 1).
std::uint64_t length_lex_rank(const BitStr& s);

/// Inverse of length_lex_rank.
BitStr length_lex_unrank(std::uint64_t rank);

}  // namespace cplc
