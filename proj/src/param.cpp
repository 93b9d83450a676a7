#include "cplc/param.hpp"

#include <algorithm>
#include <map>

#include "cplc/problems.hpp"

namespace cplc {

ParamSet::ParamSet(std::vector<BitStr> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool ParamSet::contains(const BitStr& s) const {
  return std::binary_search(members_.begin(), members_.end(), s);
}

std::uint64_t ParamSet::encoded_size() const {
  std::uint64_t total = 0;
  for (const auto& m : members_) total += m.size() + 1;
  return total;
}

namespace {

std::map<std::string, Parameterization> build_params() {
  std::map<std::string, Parameterization> reg;
  auto add = [&](Parameterization p) { reg.emplace(p.id, std::move(p)); };

  add({"len", PolyNat{0, 1}, [](const BitStr& x) { return encode_unary(x.size()); }});

  add({"pi1", PolyNat{0, 1}, [](const BitStr& x) {
         try {
           return decode_pair(x).first;
         } catch (const Error&) {
           raise(Errc::malformed_instance, "pi1 on a non-pair");
         }
       }});
  add({"pi2", PolyNat{0, 1}, [](const BitStr& x) {
         try {
           return decode_pair(x).second;
         } catch (const Error&) {
           raise(Errc::malformed_instance, "pi2 on a non-pair");
         }
       }});
  // mu(x, y) = (x, un(|y|))
  add({"mu", PolyNat{1, 2}, [](const BitStr& x) {
         try {
           auto [a, b] = decode_pair(x);
           return encode_pair(a, encode_unary(b.size()));
         } catch (const Error&) {
           raise(Errc::malformed_instance, "mu on a non-pair");
         }
       }});

  // gamma(G) = un(number of nodes)
  add({"gamma", PolyNat{0, 1}, [](const BitStr& x) {
         return encode_unary(Graph::decode(x).n);
       }});
  // nu(phi) = un(number of occurring variables); canonical formulas have
  // occurring variables exactly {1..num_vars}.
  add({"nu", PolyNat{0, 1}, [](const BitStr& x) {
         Cnf3 f = Cnf3::decode(x);
         if (!f.canonical()) raise(Errc::malformed_instance, "formula not canonical");
         return encode_unary(f.num_vars);
       }});
  // munu(C) = un(input gates + non-input gates) = un(total gates)
  add({"munu", PolyNat{0, 1}, [](const BitStr& x) {
         return encode_unary(Circuit::decode(x).gates.size());
       }});

  return reg;
}

const std::map<std::string, Parameterization>& params() {
  static const std::map<std::string, Parameterization> reg = build_params();
  return reg;
}

}  // namespace

const Parameterization& param(const std::string& id) {
  auto it = params().find(id);
  if (it == params().end()) raise(Errc::usage, "unknown parameterization: " + id);
  return it->second;
}

std::vector<std::string> param_ids() {
  std::vector<std::string> out;
  for (const auto& [id, p] : params()) out.push_back(id);
  return out;
}

BitStr apply_param(const std::string& id, const BitStr& x) { return param(id).apply(x); }

}  // namespace cplc
