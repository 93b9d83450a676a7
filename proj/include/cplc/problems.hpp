#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cplc/bitstr.hpp"

namespace cplc {

// Hard brute-force caps (the oracles must stay obviously correct and finish
// in seconds): 2^nu assignments, n! permutations, C(n,<=k) subsets.
inline constexpr std::uint32_t kMaxSatVars = 20;
inline constexpr std::uint32_t kMaxGraphNodes = 11;
inline constexpr std::uint32_t kMaxHsVertices = 24;
inline constexpr std::uint32_t kMaxMinModelVars = 16;

struct ClassTag {
  enum class Kind { ptime, np, conp, sigmap, pip } kind = Kind::ptime;
  int level = 0;  // for sigmap/pip, <= 3
  std::string name() const;
};

// --------------------------------------------------------------------------
// 3CNF. Literal key = 2*(var-1) + (negated ? 1 : 0), vars 1-based.
// Canonical form: keys sorted within each clause (repetition allowed),
// clause list sorted (duplicate clauses allowed), and the occurring
// variables are exactly {1..num_vars}.
// Encoding: un(num_vars) 0 un(num_clauses) 0 then per clause 3 literals,
// each literal = sign bit ('1' = negated) + (var-1) in width(num_vars) bits.
struct Cnf3 {
  std::uint32_t num_vars = 0;
  std::vector<std::array<std::uint32_t, 3>> clauses;

  BitStr encode() const;
  static Cnf3 decode(const BitStr& s);  // throws malformed_instance
  bool canonical() const;

  bool clause_satisfied(std::size_t ci, std::uint32_t assignment_mask) const;
  bool satisfied(std::uint32_t assignment_mask) const;

  static std::uint32_t lit_key(std::int32_t lit);
  static std::int32_t key_lit(std::uint32_t key);  // signed DIMACS-style literal
};

/// Index width for variable fields given num_vars.
std::uint32_t cnf_index_width(std::uint32_t num_vars);

/// Removes duplicate clauses (keeps the sorted order). The instance stays
/// canonical; the number of clauses drops to at most C(2n+2, 3).
Cnf3 dedup_clauses(const Cnf3& f);

// --------------------------------------------------------------------------
// Undirected graph, no self-loops. Encoding: un(n) 0 then C(n,2) bits of the
// upper triangle in row-major order (1,2),(1,3),...,(1,n),(2,3),...
struct Graph {
  std::uint32_t n = 0;
  std::vector<bool> adj;  // C(n,2) bits

  static std::size_t pair_index(std::uint32_t u, std::uint32_t v, std::uint32_t n);
  bool edge(std::uint32_t u, std::uint32_t v) const;
  void set_edge(std::uint32_t u, std::uint32_t v, bool present);

  BitStr encode() const;
  static Graph decode(const BitStr& s);
};

// --------------------------------------------------------------------------
// Boolean circuit: topologically ordered gate list; gate operands reference
// earlier gates only; gate 0 is necessarily INPUT; output is the last gate.
// Encoding: un(g) 0 then per gate 2-bit opcode (00 INPUT, 01 NOT, 10 AND,
// 11 OR) plus operand indices in width(position) bits; AND/OR keep a <= b.
struct Circuit {
  enum class Op : std::uint8_t { input = 0, invert = 1, conj = 2, disj = 3 };
  struct Gate {
    Op op = Op::input;
    std::uint32_t a = 0, b = 0;
  };
  std::vector<Gate> gates;

  std::uint32_t num_inputs() const;
  bool eval(std::uint32_t input_mask) const;

  BitStr encode() const;
  static Circuit decode(const BitStr& s);
};

// --------------------------------------------------------------------------
// d-bounded hypergraph with a hitting-set budget k. All numbers are unary in
// the encoding. Instance = pair(body, un(k)) so that pi2 extracts the
// budget; body = un(n) 0 un(d) 0 un(m) 0 then m edges, each edge =
// un(size) 0 followed by its vertices as un(v) 0, strictly increasing.
// Canonical: edges strictly sorted by (size, lexicographic vertex list),
// no duplicate edges, 1 <= size <= d.
struct Hypergraph {
  std::uint32_t n = 0;
  std::uint32_t d = 2;
  std::uint32_t k = 0;
  std::vector<std::vector<std::uint32_t>> edges;

  BitStr encode() const;
  static Hypergraph decode(const BitStr& s);
  bool canonical() const;

  /// Edges as vertex bitmasks (bit v-1 for vertex v); requires n <= 32.
  std::vector<std::uint32_t> edge_masks() const;
};

// --------------------------------------------------------------------------
// Struct-level oracles (used by the string-level deciders and by tests).
bool decide_cnf3(const Cnf3& f);
bool decide_graph_hampath(const Graph& g);
bool decide_circuit_sat(const Circuit& c);
bool decide_hitting_set(const Hypergraph& h);
/// Mask-level hitting-set oracle (vertex v is bit v-1).
bool decide_hitting_set_masks(std::uint32_t n, std::uint32_t k, const std::uint32_t* masks,
                              std::size_t m);

/// All assignments (as masks over vars 1..num_vars) that are minimal models
/// of f w.r.t. the order "true-set inclusion". Sorted ascending.
std::vector<std::uint32_t> minimal_models(const Cnf3& f);

// --------------------------------------------------------------------------
// Problem registry.
//
// Enumeration budget; the fields are interpreted per problem:
//   parity/first1/majority: a = max string length
//   3sat:      a = max vars, b = max clauses (duplicate-free enumeration)
//   hampath:   a = max nodes
//   circuitsat:a = max gates
//   hs2/3/4:   a = max vertices, b = max budget k, c = max edges (0 = all)
//   ci/cmi:    a = max vars, b = max clauses of the formula component
//   mmc:       a = max vars, b = max clauses
//   toypair:   a = max |x|, b = max |y|
//   epscross.*:a = max |x| (0..1 meaningful), b = inner budget length
struct Budget {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  std::uint32_t c = 0;
  std::string to_string() const;
};

using InstanceSink = std::function<void(const BitStr&)>;

struct Problem {
  std::string id;
  ClassTag tag;
  bool pair_language = false;
  std::function<bool(const BitStr&)> validate;
  std::function<bool(const BitStr&)> decide;
  std::function<void(const Budget&, const InstanceSink&)> enumerate;
  /// Worst-case step estimate for the brute-force decision of x.
  std::function<std::uint64_t(const BitStr&)> decide_cost;
};

const Problem& problem(const std::string& id);
bool has_problem(const std::string& id);
std::vector<std::string> problem_ids();

// Struct-level enumerators behind the string-level ones. Order matches the
// string enumeration exactly (it is produced by encoding these).
void enumerate_cnf3(const Budget& budget, const std::function<void(const Cnf3&)>& cb);
void enumerate_graphs(std::uint32_t max_n, const std::function<void(const Graph&)>& cb);
void enumerate_circuits(std::uint32_t max_gates, const std::function<void(const Circuit&)>& cb);
void enumerate_hypergraphs(const Budget& budget, std::uint32_t d,
                           const std::function<void(const Hypergraph&)>& cb);
std::vector<std::vector<std::uint32_t>> hypergraph_edge_pool(std::uint32_t n, std::uint32_t d);

bool decide(const std::string& problem_id, const BitStr& x);
bool validate(const std::string& problem_id, const BitStr& x);
void enumerate_instances(const std::string& problem_id, const Budget& budget,
                         const InstanceSink& sink);

// Pair-language helpers shared with the mixed module.
struct CiPair {
  Cnf3 formula;
  std::vector<std::uint32_t> clause;  // strictly increasing literal keys, size 1..3
};
std::optional<CiPair> decode_ci_pair(const BitStr& s);
BitStr encode_clause(const std::vector<std::uint32_t>& keys);
std::optional<std::vector<std::uint32_t>> decode_clause(const BitStr& s);

}  // namespace cplc
