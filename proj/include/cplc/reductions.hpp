#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cplc/param.hpp"
#include "cplc/poly.hpp"
#include "cplc/problems.hpp"
#include "cplc/schemes.hpp"

namespace cplc {

struct Endpoint {
  std::string problem_id;
  std::string param_id;
  friend bool operator==(const Endpoint&, const Endpoint&) = default;
  std::string to_string() const { return problem_id + "/" + param_id; }
};

/// A finite parameter set produced by an s-map. Unary intervals
/// {un(0),...,un(B)} stay symbolic (they can be large); anything else is an
/// explicit sorted set.
class ParamSetView {
 public:
  static ParamSetView interval(std::uint64_t bound);
  static ParamSetView explicit_set(std::vector<BitStr> members);

  bool contains(const BitStr& v) const;
  std::uint64_t size() const;
  /// Sum of member lengths plus one delimiter each (closed form for
  /// intervals).
  std::uint64_t encoded_size() const;
  /// Explicit members; throws ScaleExceeded past the cap.
  std::vector<BitStr> materialize(std::uint64_t cap) const;
  bool is_interval() const { return interval_bound_.has_value(); }
  std::uint64_t interval_bound() const { return *interval_bound_; }

 private:
  std::optional<std::uint64_t> interval_bound_;
  ParamSet set_;
};

/// Set-valued s with declared polynomials: member lengths are bounded by
/// member_len_poly(|k|), member count by count_poly(|k|), and the listed
/// encoding by enc_size_poly(|k|).
struct SMap {
  bool interval = false;
  PolyNat member_len_poly;
  PolyNat count_poly;
  PolyNat enc_size_poly;
  std::function<ParamSetView(const BitStr&)> eval;
};

SMap interval_smap(const PolyNat& member_len_poly);
SMap singleton_smap(std::function<BitStr(const BitStr&)> member, const PolyNat& member_len_poly);

/// Poly-comp reduction (g, s): g(x) = g_online(g_offline(kappa(x)), x) with
/// contract A  x in Q  <=>  g(x) in Q'   and
/// contract B  kappa'(g(x)) in s(kappa(x)).
struct Reduction {
  std::string id;
  Endpoint source;
  Endpoint target;
  PolyNat g_offline_len_poly;
  std::function<BitStr(const BitStr&)> g_offline;
  std::function<BitStr(const BitStr&, const BitStr&)> g_online;
  SMap s;

  BitStr apply_g(const BitStr& x) const {
    return g_online(g_offline(apply_param(source.param_id, x)), x);
  }
};

struct ApplyResult {
  BitStr image;
  bool contract_b_held;
};

/// Applies g and reports whether contract B held on this instance. Contract
/// violations are values here (the verify flow aggregates them); direct CLI
/// application turns them into errors.
ApplyResult apply_reduction(const Reduction& r, const BitStr& x);

/// Appendix-A composition: the offline part bundles c(k) with the table
/// {(k', c'(k')) : k' in s(k)}; the online part chains the two online maps
/// through a table lookup keyed by the intermediate parameter. A missing
/// table entry (a contract-B violation of r1) surfaces as MissingTableEntry.
Reduction compose_reductions(const Reduction& r1, const Reduction& r2);

/// Closure under poly-comp reduction, constructively: a scheme for the
/// target pulled back to a scheme for the source. Preserves a chopped claim
/// when both sides carry the needed bounds.
Scheme pull_witness(const Reduction& r, const Scheme& w);

/// Chopped scheme -> reduction to (target, len) with
/// s(k) = {un(0),...,un(bound(|k|))}.
Reduction to_len_characterization(const Scheme& w);

/// Reduction to a len-parameterized target -> chopped scheme with the bound
/// read off the s-map.
Scheme from_len_characterization(const Reduction& r);

/// Lifts a many-one poly-time map m : Q' -> Q+ with |m(x)| <= p_len(|x|)
/// to a poly-comp reduction (Q', len) -> (Q+, len).
Reduction lift_mreduction(const std::string& id, const std::string& source_problem,
                          const std::string& target_problem,
                          std::function<BitStr(const BitStr&)> m, const PolyNat& p_len);

/// The 3-SAT -> vertex-cover gadget on a deduplicated formula: one edge per
/// variable, a triangle per clause, connection edges into the literal nodes,
/// budget k = n + 2m. Returned as a 2-bounded hitting-set instance.
Hypergraph vc_gadget(const Cnf3& deduped);
BitStr reduce_3sat_to_vertex_cover(const BitStr& phi);

const Reduction& builtin_reduction(const std::string& id);
bool has_builtin_reduction(const std::string& id);
std::vector<std::string> reduction_ids();

}  // namespace cplc
