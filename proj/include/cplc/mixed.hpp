#pragma once

#include <functional>
#include <optional>
#include <string>

#include "cplc/bitstr.hpp"
#include "cplc/poly.hpp"
#include "cplc/problems.hpp"
#include "cplc/reductions.hpp"
#include "cplc/schemes.hpp"

namespace cplc {

/// A language of pairs with a brute-force pair oracle. The decider returns
/// false on anything that is not a valid member-shaped pair, so the reserved
/// sentinel z_N (a pair whose components fail validity) is a non-member by
/// construction. problem_id is set when the language lives in the problem
/// registry (required by the reduction-producing translators).
struct PairLanguage {
  std::string id;
  std::string problem_id;  // empty for constructed languages
  ClassTag tag;
  std::optional<PolyNat> slice_poly;  // members satisfy |enc(x,y)| <= p(|x|)
  std::function<bool(const BitStr&)> decide_enc;   // on encode_pair(x, y)
  std::function<bool(const BitStr&)> validate_enc;
  BitStr z_N;

  bool decide_xy(const BitStr& x, const BitStr& y) const {
    return decide_enc(encode_pair(x, y));
  }
};

/// Registry-backed pair language; asserts decide(z_N) is false.
PairLanguage pair_language_from_problem(const std::string& problem_id,
                                        std::optional<PolyNat> slice_poly);

/// mixed-C witness: (x,y) in B  <=>  (f(x, un(|y|)), y) in target.
struct MixedCWitness {
  std::string id;
  std::function<BitStr(const BitStr&, const BitStr&)> f;  // (x, unary) -> string
  PolyNat f_len_poly;  // |f(x, un(i))| <= poly(|x| + i)
  PairLanguage target;
};

/// mixed reduction (f1, f2, g):
/// (x,y) in A  <=>  (f1(x,un(|y|)), g(f2(x,un(|y|)), y)) in B.
struct MixedReduction {
  std::string id;
  PairLanguage source;
  PairLanguage target;
  std::function<BitStr(const BitStr&, const BitStr&)> f1;
  std::function<BitStr(const BitStr&, const BitStr&)> f2;
  std::function<BitStr(const BitStr&, const BitStr&)> g;
  PolyNat f1_len_poly;
  PolyNat f2_len_poly;
};

/// Forward direction of mixed = chopped on poly-bounded slices: offline
/// tabulates f over i = 0..p(|x|); online looks up the |y| entry (or falls
/// to the target's z_N when the slice bound rules the pair out).
Scheme mixed_to_chopped(const PairLanguage& B, const MixedCWitness& w);

/// Backward direction: f'(x, 1^k) = (c(x), x) against the constructed pair
/// language D' = {((e,x), y) : online(e, (x,y)) in D}.
MixedCWitness chopped_to_mixed(const PairLanguage& B, const Scheme& w);

/// Appendix-B translation of a mixed reduction into a poly-comp reduction
/// (A, mu) -> (B, pi1) with singleton s.
Reduction mixed_reduction_to_polycomp(const MixedReduction& m);

/// For A = {eps} x Q+: composes the injection (Q+, len) -> (A, mu) with the
/// translated mixed reduction, yielding (Q+, len) -> (B, pi1).
Reduction hardness_from_epsilon(const MixedReduction& m, const std::string& qplus_id);

/// Poly-bounded slices give (A, pi1) -> (A, mu): pass pairs within the slice
/// bound through, map everything else to z_N.
Reduction slices_to_mu_reduction(const PairLanguage& A);

struct SliceReport {
  std::uint64_t pairs_checked = 0;
  std::uint64_t members = 0;
  std::uint64_t violations = 0;
  std::optional<BitStr> first_violation;
  // max over members of |enc| - p(|x|); <= 0 when the bound holds
  std::int64_t tightest_margin = 0;
  bool pass = false;
};
SliceReport check_poly_bounded_slices(const PairLanguage& A, const PolyNat& p,
                                      const Budget& budget);

// Shipped fixtures.
PairLanguage toy_pair_language();                  // {(1^m, y) : |y| <= m, odd parity}
PairLanguage ci_pair_language();
PairLanguage mmc_pair_language();
PairLanguage cmi_pair_language();
PairLanguage epscross_parity_language();           // {eps} x PARITY
MixedCWitness toy_mixed_witness();
MixedCWitness ci_mixed_witness();
/// Synthetic fixture: {eps} x PARITY -> toy pair language via
/// f1(eps, 1^m) = 1^m (anything else to an invalid marker), f2 constant,
/// g(., y) = y.
MixedReduction synthetic_eps_to_toy();

}  // namespace cplc
