#include "cplc/schemes.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include <zlib.h>

#include "cplc/kernel.hpp"

namespace cplc {

namespace {

void append_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void append_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void append_bits(std::vector<std::uint8_t>& out, const BitStr& s) {
  append_u32(out, static_cast<std::uint32_t>(s.size()));
  PackedBits p = PackedBits::from_bitstr(s);
  out.insert(out.end(), p.bytes.begin(), p.bytes.end());
}

void oracle_budget_check(const Problem& target, const BitStr& y) {
  if (target.decide_cost(y) > kPerStringOracleBudget)
    raise(Errc::oracle_timeout, "per-string oracle budget exceeded compiling " + target.id);
}

bool decide_table_bit(const Problem& target, const BitStr& y) {
  if (!target.validate(y)) return false;
  oracle_budget_check(target, y);
  return target.decide(y);
}

}  // namespace

PackedBits PackedBits::from_bitstr(const BitStr& s) {
  PackedBits p;
  p.bytes.reserve((s.size() + 7) / 8);
  for (std::size_t i = 0; i < s.size(); ++i) p.push(s.bit(i));
  return p;
}

BitStr PackedBits::to_bitstr() const {
  BitStr out;
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(get(i));
  return out;
}

BitStr Scheme::map(const BitStr& x) const {
  return online(run_offline(apply_param(param_id, x)), x);
}

CompileMode parse_compile_mode(const std::string& name) {
  if (name == "literal") return CompileMode::literal;
  if (name == "sparse") return CompileMode::sparse;
  if (name == "direct") return CompileMode::direct;
  raise(Errc::usage, "unknown compile mode: " + name);
}

// ---------------------------------------------------------------- compile

const Problem& scheme_target(const Scheme& s) {
  if (s.target_override) return *s.target_override;
  return problem(s.target_id);
}

CompiledArtifact compile_artifact(const Scheme& s, const BitStr& k, CompileMode mode) {
  CompiledArtifact art;
  art.problem_id = s.problem_id;
  art.param_id = s.param_id;
  art.scheme_id = s.id;
  art.param_value = k;

  const Problem& target = scheme_target(s);

  if (mode == CompileMode::direct || s.direct_output) {
    if (!s.direct_output)
      raise(Errc::usage, "direct mode needs a direct-output scheme: " + s.id);
    art.kind = PayloadKind::normalizer;
    art.declared_poly = s.offline_len_poly;
    art.payload = DirectPayload{s.run_offline(k)};
    art.checksum = payload_checksum(art);
    return art;
  }

  if (s.claim != ClassClaim::chopped || !s.chopped_bound)
    raise(Errc::usage, "chop tables need a chopped claim: " + s.id);
  std::uint64_t bound = s.chopped_bound->eval(k.size());
  art.declared_poly = *s.chopped_bound;

  if (mode == CompileMode::literal) {
    if (bound > kLiteralMagnitudeCap)
      raise(Errc::scale_exceeded,
            "literal chop magnitude " + std::to_string(bound) + " exceeds cap 22");
    ChopTableLiteral table;
    table.magnitude = static_cast<std::uint32_t>(bound);
    table.compiled = s.run_offline(k);
    std::uint64_t total = (2ull << bound) - 1;  // |Sigma^{<=bound}|
    for (std::uint64_t r = 0; r < total; ++r) {
      BitStr y = length_lex_unrank(r);
      table.bits.push(decide_table_bit(target, y));
    }
    art.kind = PayloadKind::chop_literal;
    art.payload = std::move(table);
    art.checksum = payload_checksum(art);
    return art;
  }

  // sparse
  if (!s.sparse_keys) raise(Errc::usage, "scheme has no sparse key enumeration: " + s.id);
  ChopTableSparse table;
  table.magnitude = bound;
  table.compiled = s.run_offline(k);
  s.sparse_keys(k, [&](const BitStr& y) {
    SparseEntry e;
    e.key_hash = bitstr_hash(y);
    oracle_budget_check(target, y);
    e.bit = target.decide(y) ? 1 : 0;
    table.entries.push_back(e);
  });
  std::sort(table.entries.begin(), table.entries.end(), [](const SparseEntry& a, const SparseEntry& b) {
    return a.key_hash < b.key_hash;
  });
  for (std::size_t i = 1; i < table.entries.size(); ++i)
    if (table.entries[i].key_hash == table.entries[i - 1].key_hash &&
        table.entries[i].bit != table.entries[i - 1].bit)
      raise(Errc::internal, "sparse key hash collision with conflicting bits");
  table.entries.erase(std::unique(table.entries.begin(), table.entries.end(),
                                  [](const SparseEntry& a, const SparseEntry& b) {
                                    return a.key_hash == b.key_hash;
                                  }),
                      table.entries.end());
  art.kind = static_cast<PayloadKind>(s.sparse_kind);
  art.payload = std::move(table);
  art.checksum = payload_checksum(art);
  return art;
}

namespace {
bool covers(Coverage coverage, const BitStr& param_value, const BitStr& kx) {
  if (coverage == Coverage::unary_dominated && kx.all_ones() && param_value.all_ones())
    return kx.size() <= param_value.size();
  return kx == param_value;
}
}  // namespace

bool artifact_covers(const CompiledArtifact& artifact, const BitStr& kx) {
  return covers(scheme(artifact.scheme_id).coverage, artifact.param_value, kx);
}

bool artifact_covers(const Scheme& s, const CompiledArtifact& artifact, const BitStr& kx) {
  return covers(s.coverage, artifact.param_value, kx);
}

bool query_compiled(const CompiledArtifact& artifact, const BitStr& x) {
  return query_compiled(scheme(artifact.scheme_id), artifact, x);
}

bool query_compiled(const Scheme& s, const CompiledArtifact& artifact, const BitStr& x) {
  if (!problem(artifact.problem_id).validate(x))
    raise(Errc::malformed_instance, "query instance invalid for " + artifact.problem_id);
  BitStr kx = apply_param(artifact.param_id, x);
  if (!covers(s.coverage, artifact.param_value, kx))
    raise(Errc::param_mismatch, "artifact parameter does not cover the query");

  if (const auto* direct = std::get_if<DirectPayload>(&artifact.payload)) {
    BitStr y = s.online(direct->compiled, x);
    return !y.empty() && y.bit(0);
  }
  if (const auto* lit = std::get_if<ChopTableLiteral>(&artifact.payload)) {
    BitStr y = s.online(lit->compiled, x);
    if (y.size() > lit->magnitude)
      raise(Errc::out_of_table,
            "online output of length " + std::to_string(y.size()) +
                " exceeds table magnitude " + std::to_string(lit->magnitude));
    return lit->bits.get(length_lex_rank(y));
  }
  const auto& sparse = std::get<ChopTableSparse>(artifact.payload);
  BitStr y = s.online(sparse.compiled, x);
  if (y.size() > sparse.magnitude)
    raise(Errc::out_of_table,
          "online output of length " + std::to_string(y.size()) +
              " exceeds declared bound " + std::to_string(sparse.magnitude));
  std::uint64_t h = bitstr_hash(y);
  auto it = std::lower_bound(sparse.entries.begin(), sparse.entries.end(), h,
                             [](const SparseEntry& e, std::uint64_t v) { return e.key_hash < v; });
  if (it == sparse.entries.end() || it->key_hash != h) return false;  // by convention
  return it->bit != 0;
}

// ---------------------------------------------------------------- payload bytes

std::vector<std::uint8_t> payload_bytes(const CompiledArtifact& artifact) {
  std::vector<std::uint8_t> out;
  if (const auto* lit = std::get_if<ChopTableLiteral>(&artifact.payload)) {
    append_u32(out, lit->magnitude);
    append_u64(out, lit->bits.count);
    out.insert(out.end(), lit->bits.bytes.begin(), lit->bits.bytes.end());
    append_bits(out, lit->compiled);
  } else if (const auto* sparse = std::get_if<ChopTableSparse>(&artifact.payload)) {
    append_u64(out, sparse->magnitude);
    append_u64(out, sparse->entries.size());
    for (const auto& e : sparse->entries) {
      append_u64(out, e.key_hash);
      out.push_back(e.bit);
    }
    append_bits(out, sparse->compiled);
  } else {
    append_bits(out, std::get<DirectPayload>(artifact.payload).compiled);
  }
  return out;
}

std::uint32_t payload_checksum(const CompiledArtifact& artifact) {
  auto bytes = payload_bytes(artifact);
  return static_cast<std::uint32_t>(
      crc32(0L, bytes.data(), static_cast<uInt>(bytes.size())));
}

// ---------------------------------------------------------------- operations

Scheme normalize_to_chopped_ptime(const Scheme& s) {
  const Problem& target = scheme_target(s);
  if (target.tag.kind != ClassTag::Kind::ptime)
    raise(Errc::usage, "normalization needs a PTIME target, got " + target.tag.name());
  Scheme out;
  out.id = s.id + ".norm";
  out.problem_id = s.problem_id;
  out.param_id = s.param_id;
  out.target_id = "first1";
  out.claim = ClassClaim::chopped;
  out.chopped_bound = PolyNat::constant(1);
  out.offline_len_poly = s.offline_len_poly;
  out.online_time_poly = s.online_time_poly;
  out.direct_output = true;
  out.coverage = s.coverage;
  auto base_online = s.online;
  auto t_decide = target.decide;
  auto t_validate = target.validate;
  auto t_cost = target.decide_cost;
  out.offline = s.offline;
  out.online = [base_online, t_decide, t_validate, t_cost](const BitStr& c, const BitStr& x) {
    BitStr y = base_online(c, x);
    if (t_cost(y) > kPerStringOracleBudget)
      raise(Errc::oracle_timeout, "normalizer target decision over budget");
    bool member = t_validate(y) && t_decide(y);
    return member ? BitStr::from_text("1") : BitStr::from_text("0");
  };
  return out;
}

Scheme kernel_to_chopped(const std::string& id, const std::string& problem_id,
                         const std::string& param_id,
                         std::function<BitStr(const BitStr&)> kernelizer,
                         const PolyNat& size_bound) {
  Scheme s;
  s.id = id;
  s.problem_id = problem_id;
  s.param_id = param_id;
  s.target_id = problem_id;
  s.claim = ClassClaim::chopped;
  s.chopped_bound = size_bound;
  s.offline_len_poly = PolyNat::constant(0);
  s.online_time_poly = PolyNat{1, 0, 1};
  s.coverage = Coverage::unary_dominated;
  s.sparse_kind = 2;  // kernel cache
  s.offline = [](const BitStr&) { return BitStr(); };
  s.online = [kernelizer = std::move(kernelizer)](const BitStr&, const BitStr& x) {
    return kernelizer(x);
  };
  return s;
}

Scheme hitting_set_kernel_scheme(std::uint32_t d) {
  return scheme("hs" + std::to_string(d) + ".pi2.kernel");
}

ParaWitness extract_para_witness(const Scheme& s) {
  ParaWitness w;
  w.source_problem = s.problem_id;
  const Problem& target = scheme_target(s);
  auto online = s.online;
  auto t_decide = target.decide;
  auto t_validate = target.validate;
  w.compile = s.offline;
  w.pair_decide = [online, t_decide, t_validate](const BitStr& a, const BitStr& b) {
    BitStr y = online(a, b);
    return t_validate(y) && t_decide(y);
  };
  return w;
}

AdviceWitness chopped_to_advice(const Scheme& s) {
  if (s.param_id != "len")
    raise(Errc::usage, "advice extraction needs the len parameterization");
  AdviceWitness w;
  const Problem& target = scheme_target(s);
  auto offline = s.offline;
  auto online = s.online;
  auto t_decide = target.decide;
  auto t_validate = target.validate;
  w.advice = [offline](const BitStr& unary_len) {
    if (!unary_len.all_ones()) raise(Errc::malformed_instance, "advice index must be unary");
    return offline(unary_len);
  };
  w.pair_decide = [online, t_decide, t_validate](const BitStr& d, const BitStr& x) {
    BitStr y = online(d, x);
    return t_validate(y) && t_decide(y);
  };
  w.advice_len_poly = s.offline_len_poly;
  return w;
}

// ---------------------------------------------------------------- registry

namespace {

// Declared length bound for the canonical 3CNF encoding of a deduplicated
// formula with at most t variables: at most (2t+2 choose 3) <= 8(t+1)^3
// distinct clauses, each 3*(1 + width) bits with width <= t, plus headers.
PolyNat dedup_len_poly() {
  PolyNat t1 = PolyNat{1, 1};                       // t + 1
  PolyNat clauses = t1.mul(t1).mul(t1).mul(PolyNat::constant(8));
  PolyNat per_clause = PolyNat{4, 3};               // 3*(1 + t) + 1
  return clauses.mul(per_clause).add(PolyNat{2, 1});
}

// Canonical graph encoding length: n + 1 + C(n,2) <= 1 + n + n^2.
PolyNat graph_len_poly() { return PolyNat{1, 1, 1}; }

// Canonical circuit encoding length for g gates: g + 1 + g*(2 + 2*width),
// width <= g, so 1 + 3g + 2g^2 covers it.
PolyNat circuit_len_poly() { return PolyNat{1, 3, 2}; }

BitStr dp_scaffold(std::uint32_t n) {
  if (n > 20) raise(Errc::scale_exceeded, "dp scaffold capped at 20 nodes");
  BitStr out = BitStr::ones(n);
  out.push_back(false);
  std::vector<std::uint32_t> masks;
  masks.reserve(1u << n);
  for (std::uint32_t m = 0; m < (1u << n); ++m) masks.push_back(m);
  std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
    return std::popcount(a) < std::popcount(b);
  });
  for (std::uint32_t m : masks)
    for (std::uint32_t i = 0; i < n; ++i) out.push_back((m >> (n - 1 - i)) & 1);
  return out;
}

// Subset DP over the scaffold's traversal order; time linear in the
// scaffold, so polynomial in the total input length.
BitStr dp_online(const BitStr& compiled, const BitStr& x) {
  std::size_t pos = 0;
  std::uint32_t n_s = 0;
  while (pos < compiled.size() && compiled.bit(pos)) {
    ++n_s;
    ++pos;
  }
  if (pos == compiled.size()) raise(Errc::malformed_instance, "scaffold header truncated");
  ++pos;
  if (compiled.size() - pos != static_cast<std::size_t>(n_s) << n_s)
    raise(Errc::malformed_instance, "scaffold body has wrong length");
  Graph g = Graph::decode(x);
  if (g.n > n_s) raise(Errc::out_of_table, "graph larger than the compiled scaffold");
  if (g.n <= 1) return BitStr::from_text("1");
  std::vector<std::uint32_t> adj(g.n, 0);
  for (std::uint32_t u = 1; u <= g.n; ++u)
    for (std::uint32_t v = u + 1; v <= g.n; ++v)
      if (g.edge(u, v)) {
        adj[u - 1] |= 1u << (v - 1);
        adj[v - 1] |= 1u << (u - 1);
      }
  std::uint32_t full = (1u << g.n) - 1;
  std::vector<std::uint32_t> dp(1u << g.n, 0);
  std::uint64_t total = 1ull << n_s;
  for (std::uint64_t i = 0; i < total; ++i) {
    std::uint32_t mask = 0;
    for (std::uint32_t b = 0; b < n_s; ++b)
      mask = (mask << 1) | (compiled.bit(pos + i * n_s + b) ? 1u : 0u);
    if (mask == 0 || mask > full) continue;
    if (std::popcount(mask) == 1) {
      dp[mask] = mask;
      continue;
    }
    std::uint32_t reach = 0;
    std::uint32_t rest = mask;
    while (rest) {
      std::uint32_t v = rest & (~rest + 1);
      rest ^= v;
      std::uint32_t vi = static_cast<std::uint32_t>(std::countr_zero(v));
      if (dp[mask ^ v] & adj[vi]) reach |= v;
    }
    dp[mask] = reach;
  }
  return dp[full] ? BitStr::from_text("1") : BitStr::from_text("0");
}

Scheme make_identity_scheme(const std::string& id, const std::string& problem_id,
                            const std::string& param_id, PolyNat bound,
                            std::function<void(const BitStr&, const InstanceSink&)> keys) {
  Scheme s;
  s.id = id;
  s.problem_id = problem_id;
  s.param_id = param_id;
  s.target_id = problem_id;
  s.claim = ClassClaim::chopped;
  s.chopped_bound = std::move(bound);
  s.offline_len_poly = PolyNat::constant(0);
  s.online_time_poly = PolyNat{1, 1};
  s.coverage = Coverage::unary_dominated;
  s.offline = [](const BitStr&) { return BitStr(); };
  s.online = [](const BitStr&, const BitStr& x) { return x; };
  s.sparse_keys = std::move(keys);
  return s;
}

std::map<std::string, Scheme> build_schemes() {
  std::map<std::string, Scheme> reg;
  auto add = [&](Scheme s) { reg.emplace(s.id, std::move(s)); };

  // Identity witnesses for the PTIME toys under len; the chopped bound is
  // the identity polynomial since |g(x)| = |x| = |len(x)|.
  for (const char* pid : {"parity", "majority", "first1"}) {
    add(make_identity_scheme(std::string(pid) + ".len.id", pid, "len", PolyNat{0, 1},
                             [](const BitStr& k, const InstanceSink& sink) {
                               Budget b{static_cast<std::uint32_t>(k.size()), 0, 0};
                               enumerate_instances("parity", b, sink);
                             }));
  }

  // (3SAT, len) via the identity map.
  add(make_identity_scheme("3sat.len.id", "3sat", "len", PolyNat{0, 1},
                           [](const BitStr& k, const InstanceSink& sink) {
                             std::uint32_t len = static_cast<std::uint32_t>(k.size());
                             Budget b{3, 24, 0};
                             enumerate_instances("3sat", b, [&](const BitStr& f) {
                               if (f.size() <= len) sink(f);
                             });
                           }));

  // (3SAT, nu) via duplicate-clause elimination; the deduplicated encoding
  // length is polynomial in the variable count.
  {
    Scheme s;
    s.id = "3sat.nu.dedup";
    s.problem_id = "3sat";
    s.param_id = "nu";
    s.target_id = "3sat";
    s.claim = ClassClaim::chopped;
    s.chopped_bound = dedup_len_poly();
    s.offline_len_poly = PolyNat::constant(0);
    s.online_time_poly = PolyNat{1, 0, 1};
    s.coverage = Coverage::unary_dominated;
    s.offline = [](const BitStr&) { return BitStr(); };
    s.online = [](const BitStr&, const BitStr& x) {
      return dedup_clauses(Cnf3::decode(x)).encode();
    };
    s.sparse_keys = [](const BitStr& k, const InstanceSink& sink) {
      if (k.size() > 2)
        raise(Errc::scale_exceeded, "3sat sparse table feasible for nu <= 2 only");
      Budget b{static_cast<std::uint32_t>(k.size()), 24, 0};
      enumerate_instances("3sat", b, sink);
    };
    add(std::move(s));
  }

  // (HAM-PATH, gamma) via the identity map (poly-bounded slices).
  add(make_identity_scheme("hampath.gamma.id", "hampath", "gamma", graph_len_poly(),
                           [](const BitStr& k, const InstanceSink& sink) {
                             if (k.size() > 6)
                               raise(Errc::scale_exceeded,
                                     "hampath sparse table feasible for gamma <= 6");
                             Budget b{static_cast<std::uint32_t>(k.size()), 0, 0};
                             enumerate_instances("hampath", b, sink);
                           }));

  // (CIRCUIT-SAT, mu+nu) via the identity map.
  add(make_identity_scheme("circuitsat.munu.id", "circuitsat", "munu", circuit_len_poly(),
                           [](const BitStr& k, const InstanceSink& sink) {
                             if (k.size() > 5)
                               raise(Errc::scale_exceeded,
                                     "circuit sparse table feasible for mu+nu <= 5");
                             Budget b{static_cast<std::uint32_t>(k.size()), 0, 0};
                             enumerate_instances("circuitsat", b, sink);
                           }));

  // Kernel-backed schemes for d-HITTING-SET.
  for (std::uint32_t d : {2u, 3u}) {
    std::string pid = "hs" + std::to_string(d);
    Scheme s = kernel_to_chopped(
        pid + ".pi2.kernel", pid, "pi2",
        [](const BitStr& x) { return kernelize_hitting_set(Hypergraph::decode(x)).encode(); },
        kernel_size_poly(d));
    s.sparse_keys = [d, pid](const BitStr& k, const InstanceSink& sink) {
      auto kv = unary_value(k);
      if (!kv) raise(Errc::malformed_instance, "pi2 parameter must be unary");
      std::uint64_t kk = *kv;
      // covers every kernel image, including the NO-sentinel ({1}, k=0)
      std::uint64_t edge_cap = std::max<std::uint64_t>(kernel_edge_poly(d).eval(kk), 1);
      std::uint64_t vertex_cap = std::max<std::uint64_t>(d == 2 ? kk * kk + kk : d * edge_cap, 1);
      if (edge_cap > 25 || vertex_cap > 6)
        raise(Errc::scale_exceeded, "kernel cache feasible for small budgets only");
      Budget b{static_cast<std::uint32_t>(vertex_cap), static_cast<std::uint32_t>(kk),
               static_cast<std::uint32_t>(edge_cap)};
      enumerate_instances(pid, b, sink);
    };
    add(std::move(s));
  }

  // Exp-comp style scheme for (HAM-PATH, gamma): exponential-length subset
  // scaffold offline, subset DP online, answer bit against first1.
  {
    Scheme s;
    s.id = "hampath.gamma.dpscaffold";
    s.problem_id = "hampath";
    s.param_id = "gamma";
    s.target_id = "first1";
    s.claim = ClassClaim::expcomp;
    s.offline_len_poly = PolyNat{6, 2};  // log2 |c(k)| <= 2|k| + 6
    s.online_time_poly = PolyNat{1, 1};
    s.direct_output = true;
    s.coverage = Coverage::unary_dominated;
    s.offline = [](const BitStr& k) {
      auto kv = unary_value(k);
      if (!kv) raise(Errc::malformed_instance, "gamma parameter must be unary");
      return dp_scaffold(static_cast<std::uint32_t>(*kv));
    };
    s.online = dp_online;
    add(std::move(s));
  }

  // Normalized variants of the PTIME toys (chopped-PTIME = polycomp-PTIME).
  add(normalize_to_chopped_ptime(reg.at("parity.len.id")));
  add(normalize_to_chopped_ptime(reg.at("majority.len.id")));

  return reg;
}

const std::map<std::string, Scheme>& schemes() {
  static const std::map<std::string, Scheme> reg = build_schemes();
  return reg;
}

}  // namespace

const Scheme& scheme(const std::string& id) {
  auto it = schemes().find(id);
  if (it == schemes().end()) raise(Errc::usage, "unknown scheme: " + id);
  return it->second;
}

bool has_scheme(const std::string& id) { return schemes().count(id) > 0; }

std::vector<std::string> scheme_ids() {
  std::vector<std::string> out;
  for (const auto& [id, s] : schemes()) out.push_back(id);
  return out;
}

}  // namespace cplc
