#include "cplc/problems.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <sstream>

namespace cplc {

namespace {

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > UINT64_MAX - b ? UINT64_MAX : a + b;
}
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > UINT64_MAX / b ? UINT64_MAX : a * b;
}

std::uint64_t pow2_sat(std::uint32_t e) { return e >= 64 ? UINT64_MAX : (1ull << e); }

std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = sat_mul(r, n - k + i) / i;
  return r;
}

// Cursor over a BitStr for the decoders.
struct Reader {
  const BitStr& s;
  std::size_t pos = 0;

  bool done() const { return pos == s.size(); }
  bool take() {
    if (pos >= s.size()) raise(Errc::malformed_instance, "truncated encoding");
    return s.bit(pos++);
  }
  std::uint64_t take_unary() {
    std::uint64_t n = 0;
    while (take()) ++n;  // consumes the separating 0
    return n;
  }
  std::uint64_t take_fixed(std::uint32_t width) {
    std::uint64_t v = 0;
    for (std::uint32_t i = 0; i < width; ++i) v = (v << 1) | (take() ? 1u : 0u);
    return v;
  }
};

void put_unary(BitStr& out, std::uint64_t n) {
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(true);
  out.push_back(false);
}

void put_fixed(BitStr& out, std::uint64_t v, std::uint32_t width) {
  for (std::uint32_t i = 0; i < width; ++i) out.push_back((v >> (width - 1 - i)) & 1);
}

}  // namespace

std::string ClassTag::name() const {
  switch (kind) {
    case Kind::ptime: return "PTIME";
    case Kind::np: return "NP";
    case Kind::conp: return "coNP";
    case Kind::sigmap: return "SigmaP" + std::to_string(level);
    case Kind::pip: return "PiP" + std::to_string(level);
  }
  return "?";
}

// ---------------------------------------------------------------- Cnf3

std::uint32_t cnf_index_width(std::uint32_t num_vars) {
  return num_vars <= 1 ? 0 : std::bit_width(num_vars - 1);
}

std::uint32_t Cnf3::lit_key(std::int32_t lit) {
  std::uint32_t v = static_cast<std::uint32_t>(lit < 0 ? -lit : lit);
  return 2 * (v - 1) + (lit < 0 ? 1 : 0);
}

std::int32_t Cnf3::key_lit(std::uint32_t key) {
  std::int32_t v = static_cast<std::int32_t>(key / 2) + 1;
  return (key & 1) ? -v : v;
}

BitStr Cnf3::encode() const {
  BitStr out;
  put_unary(out, num_vars);
  put_unary(out, clauses.size());
  std::uint32_t w = cnf_index_width(num_vars);
  for (const auto& cl : clauses) {
    for (std::uint32_t key : cl) {
      out.push_back(key & 1);            // sign: 1 = negated
      put_fixed(out, key / 2, w);        // var - 1
    }
  }
  return out;
}

Cnf3 Cnf3::decode(const BitStr& s) {
  Reader r{s};
  Cnf3 f;
  std::uint64_t n = r.take_unary();
  std::uint64_t m = r.take_unary();
  if (n > 1u << 16) raise(Errc::malformed_instance, "variable count out of range");
  f.num_vars = static_cast<std::uint32_t>(n);
  std::uint32_t w = cnf_index_width(f.num_vars);
  for (std::uint64_t i = 0; i < m; ++i) {
    std::array<std::uint32_t, 3> cl{};
    for (auto& key : cl) {
      bool neg = r.take();
      std::uint64_t idx = r.take_fixed(w);
      if (idx >= std::max<std::uint64_t>(n, 1) || n == 0)
        raise(Errc::malformed_instance, "literal index out of range");
      key = static_cast<std::uint32_t>(2 * idx + (neg ? 1 : 0));
    }
    f.clauses.push_back(cl);
  }
  if (!r.done()) raise(Errc::malformed_instance, "trailing bits after formula");
  return f;
}

bool Cnf3::canonical() const {
  std::vector<bool> occurs(num_vars, false);
  for (const auto& cl : clauses) {
    if (!(cl[0] <= cl[1] && cl[1] <= cl[2])) return false;
    for (std::uint32_t key : cl) {
      if (key / 2 >= num_vars) return false;
      occurs[key / 2] = true;
    }
  }
  for (std::size_t i = 1; i < clauses.size(); ++i)
    if (clauses[i] < clauses[i - 1]) return false;
  for (bool o : occurs)
    if (!o) return false;
  return true;
}

bool Cnf3::clause_satisfied(std::size_t ci, std::uint32_t mask) const {
  for (std::uint32_t key : clauses[ci]) {
    bool value = (mask >> (key / 2)) & 1;
    if (value != static_cast<bool>(key & 1)) return true;
  }
  return false;
}

bool Cnf3::satisfied(std::uint32_t mask) const {
  for (std::size_t i = 0; i < clauses.size(); ++i)
    if (!clause_satisfied(i, mask)) return false;
  return true;
}

Cnf3 dedup_clauses(const Cnf3& f) {
  Cnf3 out;
  out.num_vars = f.num_vars;
  out.clauses = f.clauses;
  out.clauses.erase(std::unique(out.clauses.begin(), out.clauses.end()), out.clauses.end());
  return out;
}

bool decide_cnf3(const Cnf3& f) {
  if (f.num_vars > kMaxSatVars) raise(Errc::scale_exceeded, "3sat brute force capped at 20 vars");
  std::uint64_t total = 1ull << f.num_vars;
  for (std::uint64_t mask = 0; mask < total; ++mask)
    if (f.satisfied(static_cast<std::uint32_t>(mask))) return true;
  return false;
}

std::vector<std::uint32_t> minimal_models(const Cnf3& f) {
  if (f.num_vars > kMaxMinModelVars)
    raise(Errc::scale_exceeded, "minimal model enumeration capped at 16 vars");
  std::uint32_t total = 1u << f.num_vars;
  std::vector<bool> model(total, false);
  for (std::uint32_t mask = 0; mask < total; ++mask) model[mask] = f.satisfied(mask);
  std::vector<std::uint32_t> out;
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    if (!model[mask]) continue;
    bool minimal = true;
    if (mask != 0) {
      for (std::uint32_t sub = (mask - 1) & mask;; sub = (sub - 1) & mask) {
        if (model[sub]) {
          minimal = false;
          break;
        }
        if (sub == 0) break;
      }
    }
    if (minimal) out.push_back(mask);
  }
  return out;
}

// ---------------------------------------------------------------- Graph

std::size_t Graph::pair_index(std::uint32_t u, std::uint32_t v, std::uint32_t n) {
  // 1-based, u < v.
  return static_cast<std::size_t>(u - 1) * n - static_cast<std::size_t>(u) * (u - 1) / 2 +
         (v - u - 1);
}

bool Graph::edge(std::uint32_t u, std::uint32_t v) const {
  if (u == v) return false;
  if (u > v) std::swap(u, v);
  return adj[pair_index(u, v, n)];
}

void Graph::set_edge(std::uint32_t u, std::uint32_t v, bool present) {
  if (u > v) std::swap(u, v);
  adj[pair_index(u, v, n)] = present;
}

BitStr Graph::encode() const {
  BitStr out;
  put_unary(out, n);
  for (bool b : adj) out.push_back(b);
  return out;
}

Graph Graph::decode(const BitStr& s) {
  Reader r{s};
  Graph g;
  std::uint64_t n = r.take_unary();
  if (n > 1u << 12) raise(Errc::malformed_instance, "node count out of range");
  g.n = static_cast<std::uint32_t>(n);
  std::size_t bits = static_cast<std::size_t>(g.n) * (g.n - (g.n ? 1 : 0)) / 2;
  g.adj.reserve(bits);
  for (std::size_t i = 0; i < bits; ++i) g.adj.push_back(r.take());
  if (!r.done()) raise(Errc::malformed_instance, "trailing bits after adjacency");
  return g;
}

bool decide_graph_hampath(const Graph& g) {
  if (g.n > kMaxGraphNodes)
    raise(Errc::scale_exceeded, "hampath permutation scan capped at 11 nodes");
  if (g.n <= 1) return true;
  std::vector<std::uint16_t> adj(g.n, 0);
  for (std::uint32_t u = 1; u <= g.n; ++u)
    for (std::uint32_t v = u + 1; v <= g.n; ++v)
      if (g.edge(u, v)) {
        adj[u - 1] |= std::uint16_t(1u << (v - 1));
        adj[v - 1] |= std::uint16_t(1u << (u - 1));
      }
  std::vector<std::uint8_t> perm(g.n);
  std::iota(perm.begin(), perm.end(), std::uint8_t{0});
  do {
    bool ok = true;
    for (std::uint32_t i = 0; i + 1 < g.n; ++i)
      if (!((adj[perm[i]] >> perm[i + 1]) & 1)) {
        ok = false;
        break;
      }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// ---------------------------------------------------------------- Circuit

namespace {
std::uint32_t gate_index_width(std::size_t position) {
  return position <= 1 ? 0 : std::bit_width(static_cast<std::uint32_t>(position - 1));
}
}  // namespace

std::uint32_t Circuit::num_inputs() const {
  std::uint32_t c = 0;
  for (const auto& g : gates)
    if (g.op == Op::input) ++c;
  return c;
}

bool Circuit::eval(std::uint32_t input_mask) const {
  std::vector<bool> value(gates.size());
  std::uint32_t next_input = 0;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    switch (g.op) {
      case Op::input: value[i] = (input_mask >> next_input++) & 1; break;
      case Op::invert: value[i] = !value[g.a]; break;
      case Op::conj: value[i] = value[g.a] && value[g.b]; break;
      case Op::disj: value[i] = value[g.a] || value[g.b]; break;
    }
  }
  return gates.empty() ? false : value.back();
}

BitStr Circuit::encode() const {
  BitStr out;
  put_unary(out, gates.size());
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    std::uint32_t op = static_cast<std::uint32_t>(g.op);
    out.push_back((op >> 1) & 1);
    out.push_back(op & 1);
    std::uint32_t w = gate_index_width(i);
    if (g.op == Op::invert) {
      put_fixed(out, g.a, w);
    } else if (g.op == Op::conj || g.op == Op::disj) {
      put_fixed(out, g.a, w);
      put_fixed(out, g.b, w);
    }
  }
  return out;
}

Circuit Circuit::decode(const BitStr& s) {
  Reader r{s};
  std::uint64_t count = r.take_unary();
  if (count == 0) raise(Errc::malformed_instance, "circuit needs at least one gate");
  if (count > 1u << 12) raise(Errc::malformed_instance, "gate count out of range");
  Circuit c;
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint32_t op = (r.take() ? 2u : 0u) | (r.take() ? 1u : 0u);
    Gate g;
    g.op = static_cast<Op>(op);
    std::uint32_t w = gate_index_width(i);
    if (g.op == Op::input) {
      // no operands
    } else {
      if (i == 0) raise(Errc::malformed_instance, "gate 0 must be an input");
      g.a = static_cast<std::uint32_t>(r.take_fixed(w));
      if (g.a >= i) raise(Errc::malformed_instance, "operand must reference an earlier gate");
      if (g.op != Op::invert) {
        g.b = static_cast<std::uint32_t>(r.take_fixed(w));
        if (g.b >= i) raise(Errc::malformed_instance, "operand must reference an earlier gate");
        if (g.a > g.b) raise(Errc::malformed_instance, "binary gate operands must satisfy a <= b");
      }
    }
    c.gates.push_back(g);
  }
  if (!r.done()) raise(Errc::malformed_instance, "trailing bits after gates");
  return c;
}

bool decide_circuit_sat(const Circuit& c) {
  std::uint32_t inputs = c.num_inputs();
  if (inputs > kMaxSatVars)
    raise(Errc::scale_exceeded, "circuit-sat brute force capped at 20 inputs");
  std::uint64_t total = 1ull << inputs;
  for (std::uint64_t mask = 0; mask < total; ++mask)
    if (c.eval(static_cast<std::uint32_t>(mask))) return true;
  return false;
}

// ---------------------------------------------------------------- Hypergraph

BitStr Hypergraph::encode() const {
  BitStr body;
  put_unary(body, n);
  put_unary(body, d);
  put_unary(body, edges.size());
  for (const auto& e : edges) {
    put_unary(body, e.size());
    for (std::uint32_t v : e) put_unary(body, v);
  }
  return encode_pair(body, encode_unary(k));
}

Hypergraph Hypergraph::decode(const BitStr& s) {
  BitStr body, budget;
  try {
    auto [b0, b1] = decode_pair(s);
    body = std::move(b0);
    budget = std::move(b1);
  } catch (const Error&) {
    raise(Errc::malformed_instance, "hitting-set instance is not a pair");
  }
  auto kval = unary_value(budget);
  if (!kval) raise(Errc::malformed_instance, "budget must be unary");
  Reader r{body};
  Hypergraph h;
  std::uint64_t n = r.take_unary();
  std::uint64_t d = r.take_unary();
  std::uint64_t m = r.take_unary();
  if (n > 1u << 12 || m > 1u << 12) raise(Errc::malformed_instance, "hypergraph out of range");
  h.n = static_cast<std::uint32_t>(n);
  h.d = static_cast<std::uint32_t>(d);
  h.k = static_cast<std::uint32_t>(*kval);
  for (std::uint64_t i = 0; i < m; ++i) {
    std::uint64_t sz = r.take_unary();
    std::vector<std::uint32_t> e;
    for (std::uint64_t j = 0; j < sz; ++j) {
      std::uint64_t v = r.take_unary();
      if (v == 0 || v > n) raise(Errc::malformed_instance, "edge vertex out of range");
      e.push_back(static_cast<std::uint32_t>(v));
    }
    h.edges.push_back(std::move(e));
  }
  if (!r.done()) raise(Errc::malformed_instance, "trailing bits after edges");
  return h;
}

namespace {
// Canonical edge order: by size, then lexicographic vertex list.
bool edge_less(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}
}  // namespace

bool Hypergraph::canonical() const {
  if (d < 2) return false;
  for (const auto& e : edges) {
    if (e.empty() || e.size() > d) return false;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0 || e[i] > n) return false;
      if (i && e[i] <= e[i - 1]) return false;
    }
  }
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!edge_less(edges[i - 1], edges[i])) return false;
  }
  return true;
}

std::vector<std::uint32_t> Hypergraph::edge_masks() const {
  if (n > 32) raise(Errc::scale_exceeded, "edge masks need n <= 32");
  std::vector<std::uint32_t> out;
  out.reserve(edges.size());
  for (const auto& e : edges) {
    std::uint32_t m = 0;
    for (std::uint32_t v : e) m |= 1u << (v - 1);
    out.push_back(m);
  }
  return out;
}

bool decide_hitting_set_masks(std::uint32_t n, std::uint32_t k, const std::uint32_t* masks,
                              std::size_t m) {
  if (n > kMaxHsVertices)
    raise(Errc::scale_exceeded, "hitting-set subset scan capped at 24 vertices");
  if (m == 0) return true;
  std::uint32_t limit = std::min(k, n);
  // All vertex subsets of size <= k, by size; Gosper's hack within a size.
  for (std::uint32_t j = 1; j <= limit; ++j) {
    std::uint32_t sub = (1u << j) - 1;
    std::uint32_t end = n >= 32 ? 0xffffffffu : (1u << n);
    while (sub < end) {
      bool hits = true;
      for (std::size_t i = 0; i < m; ++i)
        if (!(masks[i] & sub)) {
          hits = false;
          break;
        }
      if (hits) return true;
      std::uint32_t c = sub & -sub;
      std::uint32_t r2 = sub + c;
      sub = (((r2 ^ sub) >> 2) / c) | r2;
      if (r2 == 0) break;
    }
  }
  return false;
}

bool decide_hitting_set(const Hypergraph& h) {
  auto masks = h.edge_masks();
  return decide_hitting_set_masks(h.n, h.k, masks.data(), masks.size());
}

// ---------------------------------------------------------------- pair components

BitStr encode_clause(const std::vector<std::uint32_t>& keys) {
  BitStr out;
  put_unary(out, keys.size());
  for (std::uint32_t key : keys) {
    out.push_back(key & 1);
    put_unary(out, key / 2 + 1);  // the 1-based variable, in unary
  }
  return out;
}

std::optional<std::vector<std::uint32_t>> decode_clause(const BitStr& s) {
  try {
    Reader r{s};
    std::uint64_t len = r.take_unary();
    std::vector<std::uint32_t> keys;
    for (std::uint64_t i = 0; i < len; ++i) {
      bool neg = r.take();
      std::uint64_t v = r.take_unary();
      if (v == 0) return std::nullopt;
      keys.push_back(static_cast<std::uint32_t>(2 * (v - 1) + (neg ? 1 : 0)));
    }
    if (!r.done()) return std::nullopt;
    // repeat-free and sorted
    for (std::size_t i = 1; i < keys.size(); ++i)
      if (keys[i] <= keys[i - 1]) return std::nullopt;
    return keys;
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::optional<CiPair> decode_ci_pair(const BitStr& s) {
  try {
    auto [x, y] = decode_pair(s);
    CiPair p;
    p.formula = Cnf3::decode(x);
    if (!p.formula.canonical()) return std::nullopt;
    auto clause = decode_clause(y);
    if (!clause) return std::nullopt;
    if (clause->empty() || clause->size() > 3) return std::nullopt;
    for (std::uint32_t key : *clause)
      if (key / 2 >= p.formula.num_vars) return std::nullopt;
    p.clause = std::move(*clause);
    return p;
  } catch (const Error&) {
    return std::nullopt;
  }
}

namespace {

bool clause_keys_satisfied(const std::vector<std::uint32_t>& keys, std::uint32_t mask) {
  for (std::uint32_t key : keys) {
    bool value = (mask >> (key / 2)) & 1;
    if (value != static_cast<bool>(key & 1)) return true;
  }
  return false;
}

// (formula, assignment) for MMC; assignment bit i (string position i) is the
// value of variable i+1.
struct MmcPair {
  Cnf3 formula;
  std::uint32_t mask = 0;
};

std::optional<MmcPair> decode_mmc_pair(const BitStr& s) {
  try {
    auto [x, y] = decode_pair(s);
    MmcPair p;
    p.formula = Cnf3::decode(x);
    if (!p.formula.canonical()) return std::nullopt;
    if (y.size() != p.formula.num_vars) return std::nullopt;
    if (p.formula.num_vars > 31) return std::nullopt;
    for (std::size_t i = 0; i < y.size(); ++i)
      if (y.bit(i)) p.mask |= 1u << i;
    return p;
  } catch (const Error&) {
    return std::nullopt;
  }
}

bool decide_ci(const BitStr& s) {
  auto p = decode_ci_pair(s);
  if (!p) return false;
  if (p->formula.num_vars > kMaxSatVars) raise(Errc::scale_exceeded, "CI capped at 20 vars");
  std::uint64_t total = 1ull << p->formula.num_vars;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    auto m = static_cast<std::uint32_t>(mask);
    if (p->formula.satisfied(m) && !clause_keys_satisfied(p->clause, m)) return false;
  }
  return true;
}

bool decide_mmc(const BitStr& s) {
  auto p = decode_mmc_pair(s);
  if (!p) return false;
  if (p->formula.num_vars > kMaxMinModelVars)
    raise(Errc::scale_exceeded, "MMC capped at 16 vars");
  if (!p->formula.satisfied(p->mask)) return false;
  if (p->mask != 0) {
    for (std::uint32_t sub = (p->mask - 1) & p->mask;; sub = (sub - 1) & p->mask) {
      if (p->formula.satisfied(sub)) return false;
      if (sub == 0) break;
    }
  }
  return true;
}

bool decide_cmi(const BitStr& s) {
  auto p = decode_ci_pair(s);
  if (!p) return false;
  if (p->formula.num_vars > kMaxMinModelVars)
    raise(Errc::scale_exceeded, "CMI capped at 16 vars");
  for (std::uint32_t model : minimal_models(p->formula))
    if (!clause_keys_satisfied(p->clause, model)) return false;
  return true;
}

bool decide_toypair(const BitStr& s) {
  try {
    auto [x, y] = decode_pair(s);
    if (!x.all_ones()) return false;
    if (y.size() > x.size()) return false;
    return y.popcount() % 2 == 1;
  } catch (const Error&) {
    return false;
  }
}

bool decide_epscross_parity(const BitStr& s) {
  try {
    auto [x, y] = decode_pair(s);
    return x.empty() && y.popcount() % 2 == 1;
  } catch (const Error&) {
    return false;
  }
}

// ------------------------------------------------------------ enumerators

void enumerate_strings(std::uint32_t max_len, const InstanceSink& sink) {
  if (max_len > 24) raise(Errc::scale_exceeded, "string enumeration capped at length 24");
  for (std::uint32_t len = 0; len <= max_len; ++len) {
    std::uint64_t total = 1ull << len;
    for (std::uint64_t value = 0; value < total; ++value) {
      BitStr s;
      for (std::uint32_t i = 0; i < len; ++i) s.push_back((value >> (len - 1 - i)) & 1);
      sink(s);
    }
  }
}

// All canonical clauses (sorted key triples) over exactly <= n variables,
// in lexicographic order.
std::vector<std::array<std::uint32_t, 3>> canonical_clauses(std::uint32_t n) {
  std::vector<std::array<std::uint32_t, 3>> out;
  std::uint32_t keys = 2 * n;
  for (std::uint32_t a = 0; a < keys; ++a)
    for (std::uint32_t b = a; b < keys; ++b)
      for (std::uint32_t c = b; c < keys; ++c) out.push_back({a, b, c});
  return out;
}

}  // namespace

void enumerate_cnf3(const Budget& budget, const std::function<void(const Cnf3&)>& cb) {
  if (budget.a > 3) raise(Errc::scale_exceeded, "3sat enumeration capped at 3 vars");
  if (budget.b > 24) raise(Errc::scale_exceeded, "3sat enumeration capped at 24 clauses");
  for (std::uint32_t n = 0; n <= budget.a; ++n) {
    auto pool = canonical_clauses(n);
    std::uint32_t need = n < 32 ? (n == 0 ? 0u : (1u << n) - 1) : 0u;
    std::uint32_t max_m = std::min<std::uint32_t>(budget.b, pool.size());
    // duplicate-free sorted clause lists = combinations of the pool,
    // smallest size first, lexicographic within a size
    std::vector<std::uint32_t> idx;
    for (std::uint32_t m = 0; m <= max_m; ++m) {
      idx.resize(m);
      for (std::uint32_t i = 0; i < m; ++i) idx[i] = i;
      while (true) {
        std::uint32_t occ = 0;
        Cnf3 f;
        f.num_vars = n;
        for (std::uint32_t i : idx) {
          f.clauses.push_back(pool[i]);
          for (std::uint32_t key : pool[i]) occ |= 1u << (key / 2);
        }
        if (occ == need) cb(f);
        // next combination
        if (m == 0) break;
        std::int64_t p = static_cast<std::int64_t>(m) - 1;
        while (p >= 0 && idx[p] == pool.size() - m + p) --p;
        if (p < 0) break;
        ++idx[p];
        for (std::uint32_t q = static_cast<std::uint32_t>(p) + 1; q < m; ++q)
          idx[q] = idx[q - 1] + 1;
      }
    }
  }
}

void enumerate_graphs(std::uint32_t max_n, const std::function<void(const Graph&)>& cb) {
  if (max_n > 7) raise(Errc::scale_exceeded, "graph enumeration capped at 7 nodes");
  for (std::uint32_t n = 0; n <= max_n; ++n) {
    std::size_t bits = static_cast<std::size_t>(n) * (n ? n - 1 : 0) / 2;
    std::uint64_t total = 1ull << bits;
    Graph g;
    g.n = n;
    g.adj.assign(bits, false);
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      for (std::size_t i = 0; i < bits; ++i) g.adj[i] = (mask >> i) & 1;
      cb(g);
    }
  }
}

void enumerate_circuits(std::uint32_t max_gates, const std::function<void(const Circuit&)>& cb) {
  if (max_gates > 6) raise(Errc::scale_exceeded, "circuit enumeration capped at 6 gates");
  // Choices at position t, canonical order: INPUT, NOT(a), AND(a<=b), OR(a<=b).
  for (std::uint32_t g = 1; g <= max_gates; ++g) {
    Circuit c;
    c.gates.assign(g, {});
    std::function<void(std::uint32_t)> rec = [&](std::uint32_t t) {
      if (t == g) {
        cb(c);
        return;
      }
      c.gates[t] = {Circuit::Op::input, 0, 0};
      rec(t + 1);
      for (std::uint32_t a = 0; a < t; ++a) {
        c.gates[t] = {Circuit::Op::invert, a, 0};
        rec(t + 1);
      }
      for (auto op : {Circuit::Op::conj, Circuit::Op::disj})
        for (std::uint32_t a = 0; a < t; ++a)
          for (std::uint32_t b = a; b < t; ++b) {
            c.gates[t] = {op, a, b};
            rec(t + 1);
          }
    };
    rec(0);
  }
}

// Canonical edge pool for (n, d): sizes 1..min(d,n), lexicographic within size.
std::vector<std::vector<std::uint32_t>> hypergraph_edge_pool(std::uint32_t n, std::uint32_t d) {
  std::vector<std::vector<std::uint32_t>> pool;
  std::vector<std::uint32_t> cur;
  std::function<void(std::uint32_t, std::uint32_t)> rec = [&](std::uint32_t size,
                                                              std::uint32_t from) {
    if (cur.size() == size) {
      pool.push_back(cur);
      return;
    }
    for (std::uint32_t v = from; v <= n; ++v) {
      cur.push_back(v);
      rec(size, v + 1);
      cur.pop_back();
    }
  };
  for (std::uint32_t size = 1; size <= std::min(d, n); ++size) rec(size, 1);
  return pool;
}

void enumerate_hypergraphs(const Budget& budget, std::uint32_t d,
                           const std::function<void(const Hypergraph&)>& cb) {
  if (budget.a > 6) raise(Errc::scale_exceeded, "hypergraph enumeration capped at 6 vertices");
  if (budget.b > 8) raise(Errc::scale_exceeded, "hypergraph enumeration capped at budget 8");
  for (std::uint32_t n = 0; n <= budget.a; ++n) {
    auto pool = hypergraph_edge_pool(n, d);
    if (pool.size() > 25) raise(Errc::scale_exceeded, "edge pool capped at 25 edges");
    std::uint64_t total = 1ull << pool.size();
    for (std::uint32_t k = 0; k <= budget.b; ++k) {
      Hypergraph h;
      h.n = n;
      h.d = d;
      h.k = k;
      for (std::uint64_t mask = 0; mask < total; ++mask) {
        if (budget.c && std::popcount(mask) > budget.c) continue;
        h.edges.clear();
        for (std::size_t i = 0; i < pool.size(); ++i)
          if ((mask >> i) & 1) h.edges.push_back(pool[i]);
        cb(h);
      }
    }
  }
}

namespace {

void enumerate_ci_like(const Budget& budget, bool with_assignments,
                       const InstanceSink& sink) {
  enumerate_cnf3(budget, [&](const Cnf3& f) {
    BitStr fx = f.encode();
    if (with_assignments) {
      std::uint32_t total = f.num_vars >= 32 ? 0 : (1u << f.num_vars);
      for (std::uint32_t mask = 0; mask < total; ++mask) {
        BitStr y;
        for (std::uint32_t i = 0; i < f.num_vars; ++i) y.push_back((mask >> i) & 1);
        sink(encode_pair(fx, y));
      }
    } else {
      if (f.num_vars == 0) return;
      // repeat-free clauses of size 1..3, smallest size first, lexicographic
      std::uint32_t keys = 2 * f.num_vars;
      std::vector<std::uint32_t> cl;
      std::function<void(std::uint32_t, std::uint32_t, std::uint32_t)> rec =
          [&](std::uint32_t size, std::uint32_t from, std::uint32_t depth) {
            if (depth == size) {
              sink(encode_pair(fx, encode_clause(cl)));
              return;
            }
            for (std::uint32_t key = from; key < keys; ++key) {
              cl.push_back(key);
              rec(size, key + 1, depth + 1);
              cl.pop_back();
            }
          };
      for (std::uint32_t size = 1; size <= 3; ++size) rec(size, 0, 0);
    }
  });
}

std::uint64_t cnf_cost(const BitStr& x) {
  try {
    Cnf3 f = Cnf3::decode(x);
    return sat_mul(pow2_sat(f.num_vars), sat_add(1, sat_mul(3, f.clauses.size())));
  } catch (const Error&) {
    return 1;
  }
}

std::uint64_t factorial_sat(std::uint32_t n) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 2; i <= n; ++i) r = sat_mul(r, i);
  return r;
}

std::map<std::string, Problem> build_registry() {
  std::map<std::string, Problem> reg;

  auto add = [&](Problem p) { reg.emplace(p.id, std::move(p)); };

  // ---- PTIME toys over raw strings.
  add(Problem{
      .id = "parity",
      .tag = {ClassTag::Kind::ptime, 0},
      .pair_language = false,
      .validate = [](const BitStr&) { return true; },
      .decide = [](const BitStr& x) { return x.popcount() % 2 == 1; },
      .enumerate = [](const Budget& b, const InstanceSink& s) { enumerate_strings(b.a, s); },
      .decide_cost = [](const BitStr& x) { return sat_add(1, x.size()); },
  });
  add(Problem{
      .id = "majority",
      .tag = {ClassTag::Kind::ptime, 0},
      .pair_language = false,
      .validate = [](const BitStr&) { return true; },
      .decide = [](const BitStr& x) { return 2 * x.popcount() > x.size(); },
      .enumerate = [](const Budget& b, const InstanceSink& s) { enumerate_strings(b.a, s); },
      .decide_cost = [](const BitStr& x) { return sat_add(1, x.size()); },
  });
  add(Problem{
      .id = "first1",
      .tag = {ClassTag::Kind::ptime, 0},
      .pair_language = false,
      .validate = [](const BitStr&) { return true; },
      .decide = [](const BitStr& x) { return !x.empty() && x.bit(0); },
      .enumerate = [](const Budget& b, const InstanceSink& s) { enumerate_strings(b.a, s); },
      .decide_cost = [](const BitStr&) { return 1; },
  });

  // ---- 3-SAT.
  add(Problem{
      .id = "3sat",
      .tag = {ClassTag::Kind::np, 1},
      .pair_language = false,
      .validate =
          [](const BitStr& x) {
            try {
              return Cnf3::decode(x).canonical();
            } catch (const Error&) {
              return false;
            }
          },
      .decide = [](const BitStr& x) { return decide_cnf3(Cnf3::decode(x)); },
      .enumerate =
          [](const Budget& b, const InstanceSink& s) {
            enumerate_cnf3(b, [&](const Cnf3& f) { s(f.encode()); });
          },
      .decide_cost = cnf_cost,
  });

  // ---- HAM-PATH.
  add(Problem{
      .id = "hampath",
      .tag = {ClassTag::Kind::np, 1},
      .pair_language = false,
      .validate =
          [](const BitStr& x) {
            try {
              Graph::decode(x);
              return true;
            } catch (const Error&) {
              return false;
            }
          },
      .decide = [](const BitStr& x) { return decide_graph_hampath(Graph::decode(x)); },
      .enumerate =
          [](const Budget& b, const InstanceSink& s) {
            enumerate_graphs(b.a, [&](const Graph& g) { s(g.encode()); });
          },
      .decide_cost =
          [](const BitStr& x) {
            try {
              Graph g = Graph::decode(x);
              return sat_mul(factorial_sat(g.n), std::max<std::uint64_t>(g.n, 1));
            } catch (const Error&) {
              return std::uint64_t{1};
            }
          },
  });

  // ---- CIRCUIT-SAT.
  add(Problem{
      .id = "circuitsat",
      .tag = {ClassTag::Kind::np, 1},
      .pair_language = false,
      .validate =
          [](const BitStr& x) {
            try {
              Circuit::decode(x);
              return true;
            } catch (const Error&) {
              return false;
            }
          },
      .decide = [](const BitStr& x) { return decide_circuit_sat(Circuit::decode(x)); },
      .enumerate =
          [](const Budget& b, const InstanceSink& s) {
            enumerate_circuits(b.a, [&](const Circuit& c) { s(c.encode()); });
          },
      .decide_cost =
          [](const BitStr& x) {
            try {
              Circuit c = Circuit::decode(x);
              return sat_mul(pow2_sat(c.num_inputs()), std::max<std::size_t>(c.gates.size(), 1));
            } catch (const Error&) {
              return std::uint64_t{1};
            }
          },
  });

  // ---- d-HITTING-SET for d = 2, 3, 4.
  for (std::uint32_t d : {2u, 3u, 4u}) {
    add(Problem{
        .id = "hs" + std::to_string(d),
        .tag = {ClassTag::Kind::np, 1},
        .pair_language = false,
        .validate =
            [d](const BitStr& x) {
              try {
                Hypergraph h = Hypergraph::decode(x);
                return h.d == d && h.canonical();
              } catch (const Error&) {
                return false;
              }
            },
        .decide =
            [d](const BitStr& x) {
              Hypergraph h = Hypergraph::decode(x);
              if (h.d != d) raise(Errc::malformed_instance, "edge size bound mismatch");
              return decide_hitting_set(h);
            },
        .enumerate =
            [d](const Budget& b, const InstanceSink& s) {
              enumerate_hypergraphs(b, d, [&](const Hypergraph& h) { s(h.encode()); });
            },
        .decide_cost =
            [](const BitStr& x) {
              try {
                Hypergraph h = Hypergraph::decode(x);
                std::uint64_t subsets = 0;
                for (std::uint32_t j = 0; j <= std::min(h.k, h.n); ++j)
                  subsets = sat_add(subsets, binom(h.n, j));
                return sat_mul(subsets, std::max<std::uint64_t>(h.edges.size(), 1));
              } catch (const Error&) {
                return std::uint64_t{1};
              }
            },
    });
  }

  // ---- Languages of pairs. Decide is false on anything that is
  // not a valid member-shaped pair, so reserved malformed sentinels are
  // non-members by construction.
  add(Problem{
      .id = "ci",
      .tag = {ClassTag::Kind::conp, 1},
      .pair_language = true,
      .validate = [](const BitStr& x) { return decode_ci_pair(x).has_value(); },
      .decide = decide_ci,
      .enumerate =
          [](const Budget& b, const InstanceSink& s) { enumerate_ci_like(b, false, s); },
      .decide_cost = [](const BitStr& x) {
        try {
          auto [f, y] = decode_pair(x);
          return cnf_cost(f);
        } catch (const Error&) {
          return std::uint64_t{1};
        }
      },
  });
  add(Problem{
      .id = "mmc",
      .tag = {ClassTag::Kind::conp, 1},
      .pair_language = true,
      .validate = [](const BitStr& x) { return decode_mmc_pair(x).has_value(); },
      .decide = decide_mmc,
      .enumerate =
          [](const Budget& b, const InstanceSink& s) { enumerate_ci_like(b, true, s); },
      .decide_cost = [](const BitStr& x) {
        try {
          auto [f, y] = decode_pair(x);
          return cnf_cost(f);
        } catch (const Error&) {
          return std::uint64_t{1};
        }
      },
  });
  add(Problem{
      .id = "cmi",
      .tag = {ClassTag::Kind::pip, 2},
      .pair_language = true,
      .validate = [](const BitStr& x) { return decode_ci_pair(x).has_value(); },
      .decide = decide_cmi,
      .enumerate =
          [](const Budget& b, const InstanceSink& s) { enumerate_ci_like(b, false, s); },
      .decide_cost = [](const BitStr& x) {
        try {
          auto [f, y] = decode_pair(x);
          return sat_mul(cnf_cost(f), 2);
        } catch (const Error&) {
          return std::uint64_t{1};
        }
      },
  });
  add(Problem{
      .id = "toypair",
      .tag = {ClassTag::Kind::ptime, 0},
      .pair_language = true,
      .validate =
          [](const BitStr& x) {
            try {
              auto [a, b] = decode_pair(x);
              return a.all_ones();
            } catch (const Error&) {
              return false;
            }
          },
      .decide = decide_toypair,
      .enumerate =
          [](const Budget& b, const InstanceSink& s) {
            if (b.a > 12 || b.b > 12) raise(Errc::scale_exceeded, "toypair grid capped at 12");
            for (std::uint32_t m = 0; m <= b.a; ++m) {
              BitStr x = BitStr::ones(m);
              enumerate_strings(b.b, [&](const BitStr& y) { s(encode_pair(x, y)); });
            }
          },
      .decide_cost = [](const BitStr& x) { return sat_add(1, x.size()); },
  });
  add(Problem{
      .id = "epscross.parity",
      .tag = {ClassTag::Kind::ptime, 0},
      .pair_language = true,
      .validate = [](const BitStr& x) { return is_valid_pair(x); },
      .decide = decide_epscross_parity,
      .enumerate =
          [](const Budget& b, const InstanceSink& s) {
            if (b.a > 2 || b.b > 12) raise(Errc::scale_exceeded, "epscross grid capped");
            enumerate_strings(b.a, [&](const BitStr& x) {
              enumerate_strings(b.b, [&](const BitStr& y) { s(encode_pair(x, y)); });
            });
          },
      .decide_cost = [](const BitStr& x) { return sat_add(1, x.size()); },
  });

  return reg;
}

const std::map<std::string, Problem>& registry() {
  static const std::map<std::string, Problem> reg = build_registry();
  return reg;
}

}  // namespace

std::string Budget::to_string() const {
  std::ostringstream os;
  os << "a=" << a << ",b=" << b;
  if (c) os << ",c=" << c;
  return os.str();
}

const Problem& problem(const std::string& id) {
  auto it = registry().find(id);
  if (it == registry().end()) raise(Errc::usage, "unknown problem: " + id);
  return it->second;
}

bool has_problem(const std::string& id) { return registry().count(id) > 0; }

std::vector<std::string> problem_ids() {
  std::vector<std::string> out;
  for (const auto& [id, p] : registry()) out.push_back(id);
  return out;
}

bool decide(const std::string& problem_id, const BitStr& x) { return problem(problem_id).decide(x); }

bool validate(const std::string& problem_id, const BitStr& x) {
  return problem(problem_id).validate(x);
}

void enumerate_instances(const std::string& problem_id, const Budget& budget,
                         const InstanceSink& sink) {
  problem(problem_id).enumerate(budget, sink);
}

}  // namespace cplc
