#include "cplc/poly.hpp"

#include <sstream>

namespace cplc {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (a > PolyNat::kValueCap - b || a + b > PolyNat::kValueCap)
    raise(Errc::overflow, "polynomial value exceeds 2^48");
  return a + b;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > PolyNat::kValueCap / a)
    raise(Errc::overflow, "polynomial value exceeds 2^48");
  std::uint64_t r = a * b;
  if (r > PolyNat::kValueCap) raise(Errc::overflow, "polynomial value exceeds 2^48");
  return r;
}

}  // namespace

PolyNat::PolyNat(std::initializer_list<std::uint64_t> coeffs)
    : coeffs_(coeffs) {
  if (coeffs_.empty()) coeffs_ = {0};
  normalize();
}

PolyNat::PolyNat(std::vector<std::uint64_t> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_ = {0};
  normalize();
}

void PolyNat::normalize() {
  while (coeffs_.size() > 1 && coeffs_.back() == 0) coeffs_.pop_back();
  if (coeffs_.size() - 1 > kMaxDegree)
    raise(Errc::degree_cap, "polynomial degree exceeds " + std::to_string(kMaxDegree));
}

std::uint64_t PolyNat::eval(std::uint64_t t) const {
  // Horner, with the cap enforced on every intermediate.
  std::uint64_t acc = 0;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    acc = checked_mul(acc, t);
    acc = checked_add(acc, coeffs_[i]);
  }
  return acc;
}

PolyNat PolyNat::add(const PolyNat& other) const {
  std::vector<std::uint64_t> out(std::max(coeffs_.size(), other.coeffs_.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t v = 0;
    if (i < coeffs_.size()) v = checked_add(v, coeffs_[i]);
    if (i < other.coeffs_.size()) v = checked_add(v, other.coeffs_[i]);
    out[i] = v;
  }
  return PolyNat(std::move(out));
}

PolyNat PolyNat::mul(const PolyNat& other) const {
  if (degree() + other.degree() > kMaxDegree)
    raise(Errc::degree_cap, "product degree exceeds cap");
  std::vector<std::uint64_t> out(coeffs_.size() + other.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < other.coeffs_.size(); ++j)
      out[i + j] = checked_add(out[i + j], checked_mul(coeffs_[i], other.coeffs_[j]));
  return PolyNat(std::move(out));
}

PolyNat PolyNat::compose(const PolyNat& other) const {
  if (degree() * other.degree() > kMaxDegree)
    raise(Errc::degree_cap, "composition degree exceeds cap");
  PolyNat acc = PolyNat::constant(0);
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    acc = acc.mul(other).add(PolyNat::constant(coeffs_[i]));
  }
  return acc;
}

PolyNat PolyNat::cover(const PolyNat& other) const {
  std::vector<std::uint64_t> out(std::max(coeffs_.size(), other.coeffs_.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t a = i < coeffs_.size() ? coeffs_[i] : 0;
    std::uint64_t b = i < other.coeffs_.size() ? other.coeffs_[i] : 0;
    out[i] = std::max(a, b);
  }
  return PolyNat(std::move(out));
}

std::string PolyNat::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) os << ",";
    os << coeffs_[i];
  }
  os << "]";
  return os.str();
}

}  // namespace cplc
