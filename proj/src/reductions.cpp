#include "cplc/reductions.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

namespace cplc {

// ---------------------------------------------------------------- ParamSetView

ParamSetView ParamSetView::interval(std::uint64_t bound) {
  ParamSetView v;
  v.interval_bound_ = bound;
  return v;
}

ParamSetView ParamSetView::explicit_set(std::vector<BitStr> members) {
  ParamSetView v;
  v.set_ = ParamSet(std::move(members));
  return v;
}

bool ParamSetView::contains(const BitStr& v) const {
  if (interval_bound_) return v.all_ones() && v.size() <= *interval_bound_;
  return set_.contains(v);
}

std::uint64_t ParamSetView::size() const {
  if (interval_bound_) return *interval_bound_ + 1;
  return set_.size();
}

std::uint64_t ParamSetView::encoded_size() const {
  if (interval_bound_) {
    std::uint64_t b = *interval_bound_;
    return (b + 1) * (b + 2) / 2;  // sum of j+1 for j = 0..b
  }
  return set_.encoded_size();
}

std::vector<BitStr> ParamSetView::materialize(std::uint64_t cap) const {
  if (size() > cap) raise(Errc::scale_exceeded, "parameter set too large to materialize");
  if (!interval_bound_) return set_.members();
  std::vector<BitStr> out;
  out.reserve(*interval_bound_ + 1);
  for (std::uint64_t j = 0; j <= *interval_bound_; ++j) out.push_back(BitStr::ones(j));
  return out;
}

SMap interval_smap(const PolyNat& member_len_poly) {
  SMap s;
  s.interval = true;
  s.member_len_poly = member_len_poly;
  s.count_poly = member_len_poly.add(PolyNat::constant(1));
  // sum_{j<=B} (j+1) <= (B+1)(B+2); integer over-approximation of the
  // closed form
  s.enc_size_poly = member_len_poly.add(PolyNat::constant(1))
                        .mul(member_len_poly.add(PolyNat::constant(2)));
  PolyNat p = member_len_poly;
  s.eval = [p](const BitStr& k) { return ParamSetView::interval(p.eval(k.size())); };
  return s;
}

SMap singleton_smap(std::function<BitStr(const BitStr&)> member,
                    const PolyNat& member_len_poly) {
  SMap s;
  s.interval = false;
  s.member_len_poly = member_len_poly;
  s.count_poly = PolyNat::constant(1);
  s.enc_size_poly = member_len_poly.add(PolyNat::constant(1));
  s.eval = [member](const BitStr& k) {
    return ParamSetView::explicit_set({member(k)});
  };
  return s;
}

// ---------------------------------------------------------------- apply

ApplyResult apply_reduction(const Reduction& r, const BitStr& x) {
  if (!validate(r.source.problem_id, x))
    raise(Errc::malformed_instance, "instance invalid for " + r.source.problem_id);
  BitStr k = apply_param(r.source.param_id, x);
  BitStr image = r.g_online(r.g_offline(k), x);
  BitStr target_param = apply_param(r.target.param_id, image);
  bool held = r.s.eval(k).contains(target_param);
  return {std::move(image), held};
}

// ---------------------------------------------------------------- composition

namespace {

constexpr std::uint64_t kMaterializeCap = 1u << 20;

// Offline bundle for composition/pull: (c1(k), {(k', c2(k')) : k' in s(k)}).
// The table is expensive to build (it covers every possible intermediate
// parameter), so callers get a per-k memoized wrapper.
BitStr bundle_offline(const Reduction& r1, const std::function<BitStr(const BitStr&)>& c2,
                      const BitStr& k) {
  BitStr c1 = r1.g_offline(k);
  std::vector<std::pair<BitStr, BitStr>> entries;
  for (const BitStr& kp : r1.s.eval(k).materialize(kMaterializeCap))
    entries.emplace_back(kp, c2(kp));
  return encode_pair(c1, encode_pair_table(entries));
}

std::function<BitStr(const BitStr&)> memoized_bundle_offline(
    Reduction r1, std::function<BitStr(const BitStr&)> c2) {
  struct Cache {
    std::mutex mu;
    std::map<std::string, BitStr> map;
  };
  auto cache = std::make_shared<Cache>();
  return [r1 = std::move(r1), c2 = std::move(c2), cache](const BitStr& k) {
    {
      std::lock_guard lk(cache->mu);
      auto it = cache->map.find(k.text());
      if (it != cache->map.end()) return it->second;
    }
    BitStr v = bundle_offline(r1, c2, k);
    std::lock_guard lk(cache->mu);
    return cache->map.emplace(k.text(), std::move(v)).first->second;
  };
}

// Declared length of the bundle: |c1| + chained table of
// count * pair(member, c2(member)) entries.
PolyNat bundle_len_poly(const Reduction& r1, const PolyNat& c2_len) {
  PolyNat member = r1.s.member_len_poly;
  PolyNat entry = member.mul(PolyNat::constant(2))
                      .add(c2_len.compose(member))
                      .add(PolyNat::constant(1));
  PolyNat table = r1.s.count_poly.mul(
      entry.mul(PolyNat::constant(2)).add(PolyNat::constant(3)));
  return r1.g_offline_len_poly.mul(PolyNat::constant(2))
      .add(PolyNat::constant(1))
      .add(table);
}

SMap compose_smaps(const Reduction& r1, const Reduction& r2) {
  const SMap& s1 = r1.s;
  const SMap& s2 = r2.s;
  if (s1.interval && s2.interval) {
    // intervals are downward closed, so the union over k' is the interval
    // at the largest member
    return interval_smap(s2.member_len_poly.compose(s1.member_len_poly));
  }
  SMap out;
  out.interval = false;
  out.member_len_poly = s2.member_len_poly.compose(s1.member_len_poly);
  out.count_poly = s1.count_poly.mul(s2.count_poly.compose(s1.member_len_poly));
  out.enc_size_poly =
      out.count_poly.mul(out.member_len_poly.add(PolyNat::constant(1)));
  auto eval1 = s1.eval;
  auto eval2 = s2.eval;
  out.eval = [eval1, eval2](const BitStr& k) {
    std::uint64_t max_interval = 0;
    bool any_interval = false;
    std::vector<BitStr> members;
    for (const BitStr& kp : eval1(k).materialize(kMaterializeCap)) {
      ParamSetView v = eval2(kp);
      if (v.is_interval()) {
        any_interval = true;
        max_interval = std::max(max_interval, v.interval_bound());
      } else {
        auto ms = v.materialize(kMaterializeCap);
        members.insert(members.end(), ms.begin(), ms.end());
      }
    }
    if (any_interval) {
      // fold explicit unary members into the interval when possible
      for (const BitStr& m : members)
        if (!m.all_ones() || m.size() > max_interval)
          raise(Errc::scale_exceeded, "mixed interval/explicit union unsupported");
      return ParamSetView::interval(max_interval);
    }
    return ParamSetView::explicit_set(std::move(members));
  };
  return out;
}

}  // namespace

Reduction compose_reductions(const Reduction& r1, const Reduction& r2) {
  if (!(r1.target == r2.source))
    raise(Errc::incompatible_endpoints,
          r1.id + " targets " + r1.target.to_string() + " but " + r2.id + " starts at " +
              r2.source.to_string());
  Reduction out;
  out.id = "compose(" + r1.id + "," + r2.id + ")";
  out.source = r1.source;
  out.target = r2.target;
  out.g_offline_len_poly = bundle_len_poly(r1, r2.g_offline_len_poly);
  Reduction r1c = r1;
  Reduction r2c = r2;
  out.g_offline = memoized_bundle_offline(r1, r2.g_offline);
  out.g_online = [r1c, r2c](const BitStr& a, const BitStr& x) {
    auto [d, table] = decode_pair(a);
    BitStr mid = r1c.g_online(d, x);
    BitStr kp = apply_param(r1c.target.param_id, mid);
    auto dp = pair_table_lookup(table, kp);
    if (!dp)
      raise(Errc::missing_table_entry,
            "intermediate parameter not in s(k); contract B of " + r1c.id + " violated");
    return r2c.g_online(*dp, mid);
  };
  out.s = compose_smaps(r1, r2);
  return out;
}

Scheme pull_witness(const Reduction& r, const Scheme& w) {
  if (w.problem_id != r.target.problem_id || w.param_id != r.target.param_id)
    raise(Errc::incompatible_endpoints,
          "scheme " + w.id + " is for " + w.problem_id + "/" + w.param_id + ", reduction targets " +
              r.target.to_string());
  Scheme out;
  out.id = "pull(" + r.id + "," + w.id + ")";
  out.problem_id = r.source.problem_id;
  out.param_id = r.source.param_id;
  out.target_id = w.target_id;
  out.target_override = w.target_override;
  out.direct_output = w.direct_output;
  out.coverage = Coverage::exact;
  if (w.claim == ClassClaim::chopped && w.chopped_bound) {
    out.claim = ClassClaim::chopped;
    out.chopped_bound = w.chopped_bound->compose(r.s.member_len_poly);
  } else {
    out.claim = ClassClaim::polycomp;
  }
  out.offline_len_poly = bundle_len_poly(r, w.offline_len_poly);
  out.online_time_poly = w.online_time_poly;
  Reduction rc = r;
  auto w_online = w.online;
  out.offline = memoized_bundle_offline(r, w.offline);
  out.online = [rc, w_online](const BitStr& a, const BitStr& x) {
    auto [d, table] = decode_pair(a);
    BitStr mid = rc.g_online(d, x);
    BitStr kp = apply_param(rc.target.param_id, mid);
    auto dp = pair_table_lookup(table, kp);
    if (!dp)
      raise(Errc::missing_table_entry,
            "intermediate parameter not in s(k); contract B of " + rc.id + " violated");
    return w_online(*dp, mid);
  };
  return out;
}

Reduction to_len_characterization(const Scheme& w) {
  if (w.claim != ClassClaim::chopped || !w.chopped_bound)
    raise(Errc::usage, "length characterization needs a chopped claim: " + w.id);
  Reduction out;
  out.id = "lenchar(" + w.id + ")";
  out.source = {w.problem_id, w.param_id};
  out.target = {w.target_id, "len"};
  out.g_offline_len_poly = w.offline_len_poly;
  out.g_offline = w.offline;
  out.g_online = w.online;
  out.s = interval_smap(*w.chopped_bound);
  return out;
}

Scheme from_len_characterization(const Reduction& r) {
  if (r.target.param_id != "len")
    raise(Errc::usage, "needs a len-parameterized target: " + r.id);
  Scheme out;
  out.id = "fromlen(" + r.id + ")";
  out.problem_id = r.source.problem_id;
  out.param_id = r.source.param_id;
  out.target_id = r.target.problem_id;
  out.claim = ClassClaim::chopped;
  // len(g(x)) lands in s(kappa(x)), so |g(x)| is bounded by the longest
  // member.
  out.chopped_bound = r.s.member_len_poly;
  out.offline_len_poly = r.g_offline_len_poly;
  out.online_time_poly = PolyNat{1, 1};
  out.offline = r.g_offline;
  out.online = r.g_online;
  return out;
}

Reduction lift_mreduction(const std::string& id, const std::string& source_problem,
                          const std::string& target_problem,
                          std::function<BitStr(const BitStr&)> m, const PolyNat& p_len) {
  Reduction out;
  out.id = id;
  out.source = {source_problem, "len"};
  out.target = {target_problem, "len"};
  out.g_offline_len_poly = PolyNat::constant(0);
  out.g_offline = [](const BitStr&) { return BitStr(); };
  PolyNat bound = p_len;
  out.g_online = [m, bound, id](const BitStr&, const BitStr& x) {
    BitStr y = m(x);
    if (y.size() > bound.eval(x.size()))
      raise(Errc::length_audit_failure,
            id + ": |m(x)| = " + std::to_string(y.size()) + " exceeds the declared bound");
    return y;
  };
  out.s = interval_smap(p_len);
  return out;
}

// ---------------------------------------------------------------- VC gadget

Hypergraph vc_gadget(const Cnf3& f) {
  std::uint32_t n = f.num_vars;
  std::uint32_t m = static_cast<std::uint32_t>(f.clauses.size());
  Hypergraph h;
  h.d = 2;
  h.n = 2 * n + 3 * m;
  h.k = n + 2 * m;
  // one edge per variable, between its positive and negative literal nodes
  for (std::uint32_t v = 1; v <= n; ++v) h.edges.push_back({2 * v - 1, 2 * v});
  for (std::uint32_t j = 0; j < m; ++j) {
    std::uint32_t base = 2 * n + 3 * j;
    // clause triangle
    h.edges.push_back({base + 1, base + 2});
    h.edges.push_back({base + 1, base + 3});
    h.edges.push_back({base + 2, base + 3});
    // connection edges: triangle node t to the node of literal t
    for (std::uint32_t t = 0; t < 3; ++t) {
      std::uint32_t lit_node = f.clauses[j][t] + 1;
      std::uint32_t tri_node = base + 1 + t;
      h.edges.push_back({std::min(lit_node, tri_node), std::max(lit_node, tri_node)});
    }
  }
  std::sort(h.edges.begin(), h.edges.end(),
            [](const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  return h;
}

BitStr reduce_3sat_to_vertex_cover(const BitStr& phi) {
  Cnf3 f = Cnf3::decode(phi);
  if (!f.canonical()) raise(Errc::malformed_instance, "formula not canonical");
  return vc_gadget(dedup_clauses(f)).encode();
}

// ---------------------------------------------------------------- registry

namespace {

Reduction identity_reduction(const std::string& id, const std::string& problem_id,
                             const std::string& source_param, const std::string& target_param,
                             const PolyNat& member_bound) {
  Reduction r;
  r.id = id;
  r.source = {problem_id, source_param};
  r.target = {problem_id, target_param};
  r.g_offline_len_poly = PolyNat::constant(0);
  r.g_offline = [](const BitStr&) { return BitStr(); };
  r.g_online = [](const BitStr&, const BitStr& x) { return x; };
  r.s = interval_smap(member_bound);
  return r;
}

// Declared bound reused from the scheme registry: encoded length of a
// deduplicated formula with <= t variables.
PolyNat dedup_len_poly() {
  PolyNat t1 = PolyNat{1, 1};
  return t1.mul(t1).mul(t1).mul(PolyNat::constant(8)).mul(PolyNat{4, 3}).add(PolyNat{2, 1});
}

std::map<std::string, Reduction> build_reductions() {
  std::map<std::string, Reduction> reg;
  auto add = [&](Reduction r) { reg.emplace(r.id, std::move(r)); };

  // HAM-PATH: gamma <-> len, identity map both ways. The encoded size of an
  // n-node graph is at most 1 + n + n^2; conversely gamma(G) <= |G|.
  add(identity_reduction("hampath.gamma-len", "hampath", "gamma", "len", PolyNat{1, 1, 1}));
  add(identity_reduction("hampath.len-gamma", "hampath", "len", "gamma", PolyNat{0, 1}));

  // 3-SAT: nu -> len eliminates duplicate clauses first so the image length
  // is polynomial in the variable count; len -> nu is the identity.
  {
    Reduction r;
    r.id = "3sat.nu-len";
    r.source = {"3sat", "nu"};
    r.target = {"3sat", "len"};
    r.g_offline_len_poly = PolyNat::constant(0);
    r.g_offline = [](const BitStr&) { return BitStr(); };
    r.g_online = [](const BitStr&, const BitStr& x) {
      return dedup_clauses(Cnf3::decode(x)).encode();
    };
    r.s = interval_smap(dedup_len_poly());
    add(std::move(r));
  }
  add(identity_reduction("3sat.len-nu", "3sat", "len", "nu", PolyNat{0, 1}));

  // CIRCUIT-SAT: mu+nu <-> len, identity map both ways.
  add(identity_reduction("circuitsat.munu-len", "circuitsat", "munu", "len", PolyNat{1, 3, 2}));
  add(identity_reduction("circuitsat.len-munu", "circuitsat", "len", "munu", PolyNat{0, 1}));

  // 3-SAT -> 2-HITTING-SET through the vertex-cover gadget; the created
  // budget is n + 2m' <= n + 2*(2n)^3 after deduplication.
  {
    Reduction r;
    r.id = "3sat.nu-to-2hs";
    r.source = {"3sat", "nu"};
    r.target = {"hs2", "pi2"};
    r.g_offline_len_poly = PolyNat::constant(0);
    r.g_offline = [](const BitStr&) { return BitStr(); };
    r.g_online = [](const BitStr&, const BitStr& x) { return reduce_3sat_to_vertex_cover(x); };
    r.s = interval_smap(PolyNat{0, 1, 0, 16});
    add(std::move(r));
  }

  // Inclusion reductions between hitting-set bounds: rewrite the d header,
  // keep the budget, singleton s.
  auto add_inclusion = [&](std::uint32_t d_from, std::uint32_t d_to) {
    Reduction r;
    r.id = "hs" + std::to_string(d_from) + "-to-hs" + std::to_string(d_to);
    r.source = {"hs" + std::to_string(d_from), "pi2"};
    r.target = {"hs" + std::to_string(d_to), "pi2"};
    r.g_offline_len_poly = PolyNat::constant(0);
    r.g_offline = [](const BitStr&) { return BitStr(); };
    r.g_online = [d_to](const BitStr&, const BitStr& x) {
      Hypergraph h = Hypergraph::decode(x);
      h.d = d_to;
      return h.encode();
    };
    r.s = singleton_smap([](const BitStr& k) { return k; }, PolyNat{0, 1});
    add(std::move(r));
  };
  add_inclusion(2, 3);
  add_inclusion(3, 4);

  return reg;
}

const std::map<std::string, Reduction>& reductions() {
  static const std::map<std::string, Reduction> reg = build_reductions();
  return reg;
}

}  // namespace

const Reduction& builtin_reduction(const std::string& id) {
  auto it = reductions().find(id);
  if (it == reductions().end()) raise(Errc::usage, "unknown reduction: " + id);
  return it->second;
}

bool has_builtin_reduction(const std::string& id) { return reductions().count(id) > 0; }

std::vector<std::string> reduction_ids() {
  std::vector<std::string> out;
  for (const auto& [id, r] : reductions()) out.push_back(id);
  return out;
}

}  // namespace cplc
