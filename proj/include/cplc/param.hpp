#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cplc/bitstr.hpp"
#include "cplc/poly.hpp"

namespace cplc {

/// A named, total map from encoded instances to parameter strings, with a
/// declared length polynomial (|apply(x)| <= poly(|x|), audited empirically).
struct Parameterization {
  std::string id;
  PolyNat declared_length_poly;
  std::function<BitStr(const BitStr&)> apply;
};

/// Finite, duplicate-free, lexicographically sorted list of strings (the
/// listed representation of a finite set of parameter values).
class ParamSet {
 public:
  ParamSet() = default;
  explicit ParamSet(std::vector<BitStr> members);

  bool contains(const BitStr& s) const;
  std::size_t size() const { return members_.size(); }
  const std::vector<BitStr>& members() const { return members_; }

  /// Sum of member lengths plus one delimiter each.
  std::uint64_t encoded_size() const;

 private:
  std::vector<BitStr> members_;
};

/// Registered parameterizations: len, pi1, pi2, mu, gamma, nu, munu.
const Parameterization& param(const std::string& id);
std::vector<std::string> param_ids();

/// apply with decode errors surfaced as Errc::malformed_instance.
BitStr apply_param(const std::string& id, const BitStr& x);

}  // namespace cplc
