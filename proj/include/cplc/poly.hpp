#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "cplc/error.hpp"

namespace cplc {

/// Polynomial over the naturals, p(t) = sum c_i t^i. Coefficients are
/// nonnegative, so p is monotone nondecreasing on N. Degree is capped at 8
/// and evaluation at 2^48; both limits fail fast via Error.
class PolyNat {
 public:
  static constexpr std::size_t kMaxDegree = 8;
  static constexpr std::uint64_t kValueCap = 1ull << 48;

  PolyNat() : coeffs_{0} {}
  PolyNat(std::initializer_list<std::uint64_t> coeffs);
  explicit PolyNat(std::vector<std::uint64_t> coeffs);

  static PolyNat constant(std::uint64_t c) { return PolyNat({c}); }
  static PolyNat identity() { return PolyNat({0, 1}); }

  const std::vector<std::uint64_t>& coeffs() const { return coeffs_; }
  std::size_t degree() const { return coeffs_.size() - 1; }

  /// Exact evaluation; throws Errc::overflow past the 2^48 cap.
  std::uint64_t eval(std::uint64_t t) const;

  PolyNat add(const PolyNat& other) const;
  PolyNat mul(const PolyNat& other) const;
  /// this(other(t)).
  PolyNat compose(const PolyNat& other) const;
  /// max(this, other) coefficient-wise (an upper bound for both).
  PolyNat cover(const PolyNat& other) const;

  std::string to_string() const;

  friend bool operator==(const PolyNat&, const PolyNat&) = default;

 private:
  void normalize();
  std::vector<std::uint64_t> coeffs_;  // c_0 .. c_d
};

}  // namespace cplc
