#include "cplc/mixed.hpp"

#include <memory>

namespace cplc {

namespace {

BitStr universal_zn() { return encode_pair(BitStr::from_text("0"), BitStr()); }

constexpr std::uint64_t kTableCap = 1u << 20;

}  // namespace

PairLanguage pair_language_from_problem(const std::string& problem_id,
                                        std::optional<PolyNat> slice_poly) {
  const Problem& p = problem(problem_id);
  if (!p.pair_language) raise(Errc::usage, problem_id + " is not a language of pairs");
  PairLanguage out;
  out.id = problem_id;
  out.problem_id = problem_id;
  out.tag = p.tag;
  out.slice_poly = std::move(slice_poly);
  out.decide_enc = p.decide;
  out.validate_enc = p.validate;
  out.z_N = universal_zn();
  if (out.decide_enc(out.z_N))
    raise(Errc::internal, "z_N sentinel decides true for " + problem_id);
  return out;
}

// ---------------------------------------------------------------- translators

Scheme mixed_to_chopped(const PairLanguage& B, const MixedCWitness& w) {
  if (!B.slice_poly)
    raise(Errc::missing_slice_poly, B.id + " carries no slice polynomial");
  PolyNat p = *B.slice_poly;
  Scheme out;
  out.id = "mixed2chopped(" + B.id + "," + w.id + ")";
  out.problem_id = B.problem_id.empty() ? B.id : B.problem_id;
  out.param_id = "pi1";
  out.target_id = w.target.problem_id.empty() ? w.target.id : w.target.problem_id;
  out.claim = ClassClaim::chopped;
  // online emits (f(x, un(|y|)), y) with |y| <= p(|x|), or the target
  // sentinel
  PolyNat arg = PolyNat::identity().add(p);
  out.chopped_bound = w.f_len_poly.compose(arg)
                          .mul(PolyNat::constant(2))
                          .add(p)
                          .add(PolyNat::constant(1))
                          .cover(PolyNat::constant(w.target.z_N.size()));
  // offline is a table of p(|x|)+1 entries (un(i), f(x, un(i)))
  PolyNat entry = p.mul(PolyNat::constant(2))
                      .add(w.f_len_poly.compose(arg))
                      .add(PolyNat::constant(1));
  out.offline_len_poly =
      p.add(PolyNat::constant(1)).mul(entry.mul(PolyNat::constant(2)).add(PolyNat::constant(3)));
  out.online_time_poly = PolyNat{1, 1};
  out.coverage = Coverage::exact;
  auto f = w.f;
  PolyNat slice = p;
  out.offline = [f, slice](const BitStr& x) {
    std::uint64_t bound = slice.eval(x.size());
    if (bound > kTableCap) raise(Errc::scale_exceeded, "slice table too large");
    std::vector<std::pair<BitStr, BitStr>> entries;
    entries.reserve(bound + 1);
    for (std::uint64_t i = 0; i <= bound; ++i)
      entries.emplace_back(encode_unary(i), f(x, encode_unary(i)));
    return encode_pair_table(entries);
  };
  BitStr zn = w.target.z_N;
  out.online = [slice, zn](const BitStr& d, const BitStr& xy) {
    BitStr x, y;
    try {
      auto [a, b] = decode_pair(xy);
      x = std::move(a);
      y = std::move(b);
    } catch (const Error&) {
      return zn;
    }
    if (xy.size() > slice.eval(x.size())) return zn;  // not in B by the slice bound
    auto a = pair_table_lookup(d, encode_unary(y.size()));
    if (!a) return zn;
    return encode_pair(*a, y);
  };
  if (!w.target.problem_id.empty()) {
    // registry target; nothing else to set
  } else {
    auto tgt = std::make_shared<Problem>();
    tgt->id = w.target.id;
    tgt->tag = w.target.tag;
    tgt->pair_language = true;
    tgt->validate = w.target.validate_enc;
    tgt->decide = w.target.decide_enc;
    tgt->decide_cost = [](const BitStr& s) { return s.size() + 1; };
    out.target_override = std::move(tgt);
  }
  return out;
}

MixedCWitness chopped_to_mixed(const PairLanguage& B, const Scheme& w) {
  if (w.param_id != "pi1")
    raise(Errc::usage, "backward translation needs a pi1-parameterized scheme");
  MixedCWitness out;
  out.id = "chopped2mixed(" + w.id + ")";
  auto offline = w.offline;
  // c'(x, 1^k) = (c(x), x); the unary argument is ignored by construction
  out.f = [offline](const BitStr& x, const BitStr&) {
    return encode_pair(offline(x), x);
  };
  out.f_len_poly = w.offline_len_poly.mul(PolyNat::constant(2))
                       .add(PolyNat::identity())
                       .add(PolyNat::constant(1));

  const Problem& target = scheme_target(w);
  auto online = w.online;
  auto t_decide = target.decide;
  auto t_validate = target.validate;
  PairLanguage dprime;
  dprime.id = w.id + ".Dprime";
  dprime.tag = target.tag;
  dprime.decide_enc = [online, t_decide, t_validate](const BitStr& enc) {
    try {
      auto [u, y] = decode_pair(enc);
      auto [e, x] = decode_pair(u);
      BitStr img = online(e, encode_pair(x, y));
      return t_validate(img) && t_decide(img);
    } catch (const Error&) {
      return false;
    }
  };
  dprime.validate_enc = [](const BitStr& enc) {
    try {
      auto [u, y] = decode_pair(enc);
      decode_pair(u);
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  dprime.z_N = universal_zn();
  if (dprime.decide_enc(dprime.z_N))
    raise(Errc::internal, "constructed D' decides the sentinel true");
  out.target = std::move(dprime);
  return out;
}

Reduction mixed_reduction_to_polycomp(const MixedReduction& m) {
  if (m.source.problem_id.empty() || m.target.problem_id.empty())
    raise(Errc::usage, "translation to a poly-comp reduction needs registered pair languages");
  Reduction out;
  out.id = "mixed2polycomp(" + m.id + ")";
  out.source = {m.source.problem_id, "mu"};
  out.target = {m.target.problem_id, "pi1"};
  auto f1 = m.f1;
  auto f2 = m.f2;
  auto g = m.g;
  // c(x, 1^k) = (f1(x, 1^k), f2(x, 1^k)); the offline input is mu(x,y)
  out.g_offline_len_poly = m.f1_len_poly.add(m.f2_len_poly)
                               .mul(PolyNat::constant(2))
                               .add(PolyNat::constant(1));
  out.g_offline = [f1, f2](const BitStr& k) {
    auto [x, unj] = decode_pair(k);
    return encode_pair(f1(x, unj), f2(x, unj));
  };
  // f((a1, a2), (x, y)) = (a1, g(a2, y))
  out.g_online = [g](const BitStr& a, const BitStr& xy) {
    auto [a1, a2] = decode_pair(a);
    auto [x, y] = decode_pair(xy);
    return encode_pair(a1, g(a2, y));
  };
  out.s = singleton_smap(
      [f1](const BitStr& k) {
        auto [x, unj] = decode_pair(k);
        return f1(x, unj);
      },
      m.f1_len_poly);
  return out;
}

Reduction hardness_from_epsilon(const MixedReduction& m, const std::string& qplus_id) {
  if (m.source.problem_id != "epscross." + qplus_id)
    raise(Errc::source_shape_mismatch,
          "mixed reduction must start at {eps} x " + qplus_id + ", got " + m.source.id);
  // injection (Q+, len) -> ({eps} x Q+, mu): g(x) = (eps, x),
  // s(1^m) = {mu(eps, 1^m)} = {(eps, un(m))}
  Reduction inj;
  inj.id = "epsinject(" + qplus_id + ")";
  inj.source = {qplus_id, "len"};
  inj.target = {m.source.problem_id, "mu"};
  inj.g_offline_len_poly = PolyNat::constant(0);
  inj.g_offline = [](const BitStr&) { return BitStr(); };
  inj.g_online = [](const BitStr&, const BitStr& x) { return encode_pair(BitStr(), x); };
  inj.s = singleton_smap(
      [](const BitStr& k) { return encode_pair(BitStr(), k); }, PolyNat{1, 1});
  return compose_reductions(inj, mixed_reduction_to_polycomp(m));
}

Reduction slices_to_mu_reduction(const PairLanguage& A) {
  if (!A.slice_poly) raise(Errc::missing_slice_poly, A.id + " carries no slice polynomial");
  if (A.problem_id.empty())
    raise(Errc::usage, "slices-to-mu needs a registered pair language");
  PolyNat p = *A.slice_poly;
  Reduction out;
  out.id = "slices2mu(" + A.id + ")";
  out.source = {A.problem_id, "pi1"};
  out.target = {A.problem_id, "mu"};
  out.g_offline_len_poly = PolyNat::constant(0);
  out.g_offline = [](const BitStr&) { return BitStr(); };
  BitStr zn = A.z_N;
  out.g_online = [p, zn](const BitStr&, const BitStr& xy) {
    try {
      auto [x, y] = decode_pair(xy);
      if (y.size() <= p.eval(x.size())) return xy;
    } catch (const Error&) {
    }
    return zn;
  };
  // s(x) = {(x, un(0)), ..., (x, un(p(|x|)))} union {mu(z_N)}
  SMap s;
  s.interval = false;
  s.member_len_poly = PolyNat{1, 2}.add(p);  // 2|x| + 1 + p(|x|)
  s.count_poly = p.add(PolyNat::constant(2));
  s.enc_size_poly = s.count_poly.mul(s.member_len_poly.add(PolyNat::constant(1)));
  BitStr mu_zn = apply_param("mu", zn);
  s.eval = [p, mu_zn](const BitStr& x) {
    std::uint64_t bound = p.eval(x.size());
    if (bound > kTableCap) raise(Errc::scale_exceeded, "slice parameter set too large");
    std::vector<BitStr> members;
    members.reserve(bound + 2);
    for (std::uint64_t j = 0; j <= bound; ++j)
      members.push_back(encode_pair(x, encode_unary(j)));
    members.push_back(mu_zn);
    return ParamSetView::explicit_set(std::move(members));
  };
  out.s = std::move(s);
  return out;
}

SliceReport check_poly_bounded_slices(const PairLanguage& A, const PolyNat& p,
                                      const Budget& budget) {
  if (A.problem_id.empty()) raise(Errc::usage, "slice check needs a registered pair language");
  SliceReport rep;
  rep.tightest_margin = INT64_MIN;
  enumerate_instances(A.problem_id, budget, [&](const BitStr& enc) {
    ++rep.pairs_checked;
    if (!A.decide_enc(enc)) return;
    ++rep.members;
    auto [x, y] = decode_pair(enc);
    std::int64_t margin = static_cast<std::int64_t>(enc.size()) -
                          static_cast<std::int64_t>(p.eval(x.size()));
    rep.tightest_margin = std::max(rep.tightest_margin, margin);
    if (margin > 0) {
      ++rep.violations;
      if (!rep.first_violation) rep.first_violation = enc;
    }
  });
  if (rep.members == 0) rep.tightest_margin = 0;
  rep.pass = rep.violations == 0 && rep.pairs_checked > 0;
  return rep;
}

// ---------------------------------------------------------------- fixtures

PairLanguage toy_pair_language() {
  // members (1^m, y) with |y| <= m and odd parity: |enc| = 2m + 1 + |y| <= 3m + 1
  return pair_language_from_problem("toypair", PolyNat{1, 3});
}

PairLanguage ci_pair_language() {
  // clause component: un(l)0 + l * (sign + un(v)0) <= 4 + 3(n+2) with n <= |x|
  return pair_language_from_problem("ci", PolyNat{11, 5});
}

PairLanguage mmc_pair_language() {
  // assignment has exactly n <= |x| bits
  return pair_language_from_problem("mmc", PolyNat{1, 3});
}

PairLanguage cmi_pair_language() {
  return pair_language_from_problem("cmi", PolyNat{11, 5});
}

PairLanguage epscross_parity_language() {
  return pair_language_from_problem("epscross.parity", std::nullopt);
}

MixedCWitness toy_mixed_witness() {
  MixedCWitness w;
  w.id = "toy";
  // f uses its unary argument: it validates |y| against the first component
  w.f = [](const BitStr& x, const BitStr& unj) {
    if (x.all_ones() && unj.size() <= x.size()) return x;
    return BitStr::from_text("0");
  };
  w.f_len_poly = PolyNat{1, 1};
  w.target = toy_pair_language();
  return w;
}

MixedCWitness ci_mixed_witness() {
  MixedCWitness w;
  w.id = "ci.identity";
  w.f = [](const BitStr& x, const BitStr&) { return x; };
  w.f_len_poly = PolyNat{0, 1};
  w.target = ci_pair_language();
  return w;
}

MixedReduction synthetic_eps_to_toy() {
  MixedReduction m;
  m.id = "eps.parity-to-toy";
  m.source = epscross_parity_language();
  m.target = toy_pair_language();
  m.f1 = [](const BitStr& x, const BitStr& unj) {
    if (x.empty()) return unj;  // 1^|y|
    return BitStr::from_text("0");
  };
  m.f2 = [](const BitStr&, const BitStr&) { return BitStr(); };
  m.g = [](const BitStr&, const BitStr& y) { return y; };
  m.f1_len_poly = PolyNat{1, 1};
  m.f2_len_poly = PolyNat::constant(0);
  return m;
}

}  // namespace cplc
