#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "cplc/formats.hpp"
#include "cplc/problems.hpp"

using namespace cplc;

namespace {

Cnf3 make_cnf(std::uint32_t n, std::vector<std::array<int, 3>> clauses) {
  Cnf3 f;
  f.num_vars = n;
  for (auto& cl : clauses) {
    std::array<std::uint32_t, 3> keys{Cnf3::lit_key(cl[0]), Cnf3::lit_key(cl[1]),
                                      Cnf3::lit_key(cl[2])};
    std::sort(keys.begin(), keys.end());
    f.clauses.push_back(keys);
  }
  std::sort(f.clauses.begin(), f.clauses.end());
  return f;
}

// AND-of-ORs translation of a 3CNF into a circuit (independent route for
// the cross-decider agreement check).
Circuit cnf_to_circuit(const Cnf3& f) {
  Circuit c;
  for (std::uint32_t v = 0; v < std::max(f.num_vars, 1u); ++v)
    c.gates.push_back({Circuit::Op::input, 0, 0});
  auto lit_gate = [&](std::uint32_t key) -> std::uint32_t {
    std::uint32_t var_gate = key / 2;
    if (!(key & 1)) return var_gate;
    c.gates.push_back({Circuit::Op::invert, var_gate, 0});
    return static_cast<std::uint32_t>(c.gates.size() - 1);
  };
  std::vector<std::uint32_t> clause_gates;
  for (const auto& cl : f.clauses) {
    std::uint32_t a = lit_gate(cl[0]);
    std::uint32_t b = lit_gate(cl[1]);
    c.gates.push_back({Circuit::Op::disj, std::min(a, b), std::max(a, b)});
    std::uint32_t ab = static_cast<std::uint32_t>(c.gates.size() - 1);
    std::uint32_t d = lit_gate(cl[2]);
    c.gates.push_back({Circuit::Op::disj, std::min(ab, d), std::max(ab, d)});
    clause_gates.push_back(static_cast<std::uint32_t>(c.gates.size() - 1));
  }
  if (clause_gates.empty()) {
    // empty formula: constant true via x or not x
    c.gates.push_back({Circuit::Op::invert, 0, 0});
    c.gates.push_back({Circuit::Op::disj, 0, static_cast<std::uint32_t>(c.gates.size() - 1)});
    return c;
  }
  std::uint32_t acc = clause_gates[0];
  for (std::size_t i = 1; i < clause_gates.size(); ++i) {
    c.gates.push_back({Circuit::Op::conj, std::min(acc, clause_gates[i]),
                       std::max(acc, clause_gates[i])});
    acc = static_cast<std::uint32_t>(c.gates.size() - 1);
  }
  return c;
}

std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Independent count of the canonical 3CNF enumeration: duplicate-free sorted
// clause subsets over exactly-covered variable sets, inclusion-exclusion
// over missing variables.
std::uint64_t count_cnf_instances(std::uint32_t a, std::uint32_t b) {
  auto clauses_over = [](std::uint64_t n) { return binom(2 * n + 2, 3); };
  std::uint64_t total = 0;
  for (std::uint32_t n = 0; n <= a; ++n) {
    std::int64_t sum = 0;
    for (std::uint32_t i = 0; i <= n; ++i) {
      std::uint64_t sub = 0;
      for (std::uint32_t m = 0; m <= b; ++m) sub += binom(clauses_over(n - i), m);
      sum += (i % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(binom(n, i) * sub);
    }
    total += static_cast<std::uint64_t>(sum);
  }
  return total;
}

}  // namespace

TEST_CASE("cnf canonical form and codec") {
  Cnf3 f = make_cnf(2, {{1, 1, 1}, {-1, 2, 2}});
  REQUIRE(f.canonical());
  Cnf3 g = Cnf3::decode(f.encode());
  CHECK(g.num_vars == f.num_vars);
  CHECK(g.clauses == f.clauses);
  CHECK(validate("3sat", f.encode()));

  Cnf3 bad = f;
  std::swap(bad.clauses[0], bad.clauses[1]);
  CHECK(!bad.canonical());
  CHECK(!validate("3sat", bad.encode()));

  // a declared variable that never occurs is not canonical
  Cnf3 gap = make_cnf(2, {{1, 1, 1}});
  CHECK(!gap.canonical());

  CHECK(!validate("3sat", BitStr::from_text("1")));
  CHECK(!validate("hampath", BitStr()));
}

TEST_CASE("contradictory unit clauses are unsatisfiable") {
  Cnf3 f = make_cnf(1, {{1, 1, 1}, {-1, -1, -1}});
  REQUIRE(f.canonical());
  CHECK(decide("3sat", f.encode()) == false);
  CHECK(decide_cnf3(make_cnf(1, {{1, 1, 1}})) == true);
  CHECK(decide_cnf3(Cnf3{}) == true);  // empty formula
}

TEST_CASE("dedup removes duplicate clauses") {
  Cnf3 f = make_cnf(1, {{1, 1, 1}, {1, 1, 1}});
  REQUIRE(f.canonical());
  Cnf3 d = dedup_clauses(f);
  CHECK(d.clauses.size() == 1);
  CHECK(d.canonical());
  CHECK(decide_cnf3(f) == decide_cnf3(d));
}

TEST_CASE("graph codec and hampath") {
  // star K_{1,3}: center 1 adjacent to 2,3,4; no path visits all leaves
  Graph star;
  star.n = 4;
  star.adj.assign(6, false);
  star.set_edge(1, 2, true);
  star.set_edge(1, 3, true);
  star.set_edge(1, 4, true);
  Graph rt = Graph::decode(star.encode());
  CHECK(rt.n == 4);
  CHECK(rt.edge(1, 3));
  CHECK(!rt.edge(2, 3));
  CHECK(decide("hampath", star.encode()) == false);

  Graph path;
  path.n = 4;
  path.adj.assign(6, false);
  path.set_edge(1, 2, true);
  path.set_edge(2, 3, true);
  path.set_edge(3, 4, true);
  CHECK(decide("hampath", path.encode()) == true);

  Graph empty;
  CHECK(decide("hampath", empty.encode()) == true);
  CHECK(!validate("hampath", BitStr::from_text("1")));
}

TEST_CASE("circuit codec and satisfiability") {
  Circuit c;  // x AND (NOT x)
  c.gates = {{Circuit::Op::input, 0, 0},
             {Circuit::Op::invert, 0, 0},
             {Circuit::Op::conj, 0, 1}};
  Circuit rt = Circuit::decode(c.encode());
  CHECK(rt.gates.size() == 3);
  CHECK(decide("circuitsat", c.encode()) == false);

  Circuit t;  // x OR (NOT x)
  t.gates = {{Circuit::Op::input, 0, 0},
             {Circuit::Op::invert, 0, 0},
             {Circuit::Op::disj, 0, 1}};
  CHECK(decide("circuitsat", t.encode()) == true);
  CHECK(!validate("circuitsat", BitStr()));
}

TEST_CASE("hitting set decisions") {
  Hypergraph tri;
  tri.n = 3;
  tri.d = 2;
  tri.edges = {{1, 2}, {1, 3}, {2, 3}};
  tri.k = 1;
  REQUIRE(tri.canonical());
  CHECK(decide("hs2", tri.encode()) == false);
  tri.k = 2;
  CHECK(decide("hs2", tri.encode()) == true);

  Hypergraph empty;
  empty.d = 2;
  empty.k = 0;
  CHECK(decide("hs2", empty.encode()) == true);

  Hypergraph dup = tri;
  dup.edges = {{1, 2}, {1, 2}};
  CHECK(!validate("hs2", dup.encode()));
}

TEST_CASE("minimal models") {
  Cnf3 a_or_b = make_cnf(2, {{1, 2, 2}});
  CHECK(minimal_models(a_or_b) == std::vector<std::uint32_t>{1, 2});
  Cnf3 a_and_b = make_cnf(2, {{1, 1, 1}, {2, 2, 2}});
  CHECK(minimal_models(a_and_b) == std::vector<std::uint32_t>{3});
  Cnf3 taut = make_cnf(1, {{1, -1, -1}});
  CHECK(minimal_models(taut) == std::vector<std::uint32_t>{0});
}

TEST_CASE("pair language examples") {
  // CI: (a) and (not a or b) entails (b)
  Cnf3 x = make_cnf(2, {{1, 1, 1}, {-1, 2, 2}});
  BitStr ci_yes = encode_pair(x.encode(), encode_clause({Cnf3::lit_key(2)}));
  CHECK(validate("ci", ci_yes));
  CHECK(decide("ci", ci_yes) == true);
  BitStr ci_no = encode_pair(x.encode(), encode_clause({Cnf3::lit_key(-2)}));
  CHECK(decide("ci", ci_no) == false);

  Cnf3 aorb = make_cnf(2, {{1, 2, 2}});
  BitStr y_min = BitStr::from_text("10");  // a=T, b=F
  BitStr y_nonmin = BitStr::from_text("11");
  CHECK(decide("mmc", encode_pair(aorb.encode(), y_min)) == true);
  CHECK(decide("mmc", encode_pair(aorb.encode(), y_nonmin)) == false);

  CHECK(decide("cmi", encode_pair(aorb.encode(),
                                  encode_clause({Cnf3::lit_key(1), Cnf3::lit_key(2)}))) == true);
  CHECK(decide("cmi", encode_pair(aorb.encode(), encode_clause({Cnf3::lit_key(1)}))) == false);

  // clause over a variable outside vars(x) is invalid and a non-member
  BitStr outside = encode_pair(aorb.encode(), encode_clause({Cnf3::lit_key(3)}));
  CHECK(!validate("ci", outside));
  CHECK(decide("ci", outside) == false);

  CHECK(decide("toypair", encode_pair(encode_unary(3), BitStr::from_text("1"))) == true);
  CHECK(decide("toypair", encode_pair(encode_unary(3), BitStr::from_text("11"))) == false);
  CHECK(decide("toypair", encode_pair(encode_unary(1), BitStr::from_text("111"))) == false);
  CHECK(decide("toypair", encode_pair(BitStr::from_text("0"), BitStr())) == false);
}

TEST_CASE("MMC and CMI coherence on <= 2 variables") {
  enumerate_cnf3({2, 3, 0}, [&](const Cnf3& f) {
    auto minimal = minimal_models(f);
    for (std::uint32_t mask = 0; mask < (1u << f.num_vars); ++mask) {
      BitStr y;
      for (std::uint32_t i = 0; i < f.num_vars; ++i) y.push_back((mask >> i) & 1);
      bool member = decide("mmc", encode_pair(f.encode(), y));
      bool expect = std::binary_search(minimal.begin(), minimal.end(), mask);
      REQUIRE(member == expect);
      if (member) REQUIRE(f.satisfied(mask));
    }
    // CMI agrees with checking the clause on each minimal model
    if (f.num_vars >= 1) {
      std::vector<std::uint32_t> clause{Cnf3::lit_key(1)};
      bool cmi = decide("cmi", encode_pair(f.encode(), encode_clause(clause)));
      bool expect = true;
      for (std::uint32_t m : minimal)
        if (!(m & 1)) expect = false;
      REQUIRE(cmi == expect);
    }
  });
}

TEST_CASE("3sat and circuit-sat agree through the AND-of-ORs translation") {
  std::uint64_t checked = 0;
  enumerate_cnf3({3, 2, 0}, [&](const Cnf3& f) {
    REQUIRE(decide_cnf3(f) == decide_circuit_sat(cnf_to_circuit(f)));
    ++checked;
  });
  CHECK(checked == count_cnf_instances(3, 2));
}

TEST_CASE("enumeration counts match independent combinatorics") {
  std::uint64_t graphs3 = 0, total_graphs = 0;
  enumerate_instances("hampath", {3, 0, 0}, [&](const BitStr& x) {
    ++total_graphs;
    if (Graph::decode(x).n == 3) ++graphs3;
  });
  CHECK(graphs3 == 8);  // 2^3 over the 3 possible edges
  CHECK(total_graphs == 1 + 1 + 2 + 8);

  std::uint64_t cnt = 0;
  enumerate_instances("3sat", {1, 4, 0}, [&](const BitStr&) { ++cnt; });
  CHECK(cnt == 16);  // 4 canonical clauses over one variable, 2^4 subsets
  CHECK(count_cnf_instances(1, 4) == 16);

  std::uint64_t hs_n2 = 0;
  enumerate_instances("hs2", {2, 2, 0}, [&](const BitStr& x) {
    if (Hypergraph::decode(x).n == 2) ++hs_n2;
  });
  CHECK(hs_n2 == 24);  // 8 edge sets x 3 budgets

  std::uint64_t circuits = 0;
  enumerate_instances("circuitsat", {3, 0, 0}, [&](const BitStr&) { ++circuits; });
  CHECK(circuits == 1 + 1 * 4 + 1 * 4 * 9);
}

TEST_CASE("enumeration yields exactly valid canonical strings, no duplicates") {
  for (const std::string& pid :
       {std::string("3sat"), std::string("hampath"), std::string("circuitsat"),
        std::string("hs2"), std::string("hs3"), std::string("ci"), std::string("mmc"),
        std::string("toypair")}) {
    Budget b{2, 2, 0};
    if (pid == "hampath" || pid == "circuitsat") b = {3, 0, 0};
    std::set<std::string> seen;
    enumerate_instances(pid, b, [&](const BitStr& x) {
      REQUIRE(validate(pid, x));
      auto [it, fresh] = seen.insert(x.text());
      REQUIRE(fresh);
    });
    CHECK(!seen.empty());
  }
}

TEST_CASE("enumeration budget caps") {
  CHECK_THROWS_AS(enumerate_instances("3sat", {9, 2, 0}, [](const BitStr&) {}), Error);
  CHECK_THROWS_AS(enumerate_instances("hampath", {12, 0, 0}, [](const BitStr&) {}), Error);
}

TEST_CASE("brute force caps raise ScaleExceeded") {
  Graph big;
  big.n = 12;
  big.adj.assign(66, true);
  CHECK_THROWS_AS((void)decide("hampath", big.encode()), Error);
}

TEST_CASE("text formats round trip") {
  Cnf3 f = make_cnf(2, {{1, 1, 1}, {-1, 2, 2}});
  std::string dimacs = render_instance_text("3sat", TextFormat::dimacs, f.encode());
  CHECK(parse_instance_text("3sat", TextFormat::dimacs, dimacs) == f.encode());
  CHECK_THROWS_AS(
      (void)parse_instance_text("3sat", TextFormat::dimacs, "p cnf 1 1\n1 -1 0\n"), Error);

  Graph g;
  g.n = 3;
  g.adj.assign(3, false);
  g.set_edge(1, 3, true);
  std::string el = render_instance_text("hampath", TextFormat::edgelist, g.encode());
  CHECK(parse_instance_text("hampath", TextFormat::edgelist, el) == g.encode());

  Hypergraph h;
  h.n = 3;
  h.d = 2;
  h.k = 1;
  h.edges = {{2}, {1, 3}};
  std::string hel = render_instance_text("hs2", TextFormat::edgelist, h.encode());
  CHECK(parse_instance_text("hs2", TextFormat::edgelist, hel) == h.encode());

  Circuit c;
  c.gates = {{Circuit::Op::input, 0, 0},
             {Circuit::Op::invert, 0, 0},
             {Circuit::Op::disj, 0, 1}};
  std::string gates = render_instance_text("circuitsat", TextFormat::gates, c.encode());
  CHECK(parse_instance_text("circuitsat", TextFormat::gates, gates) == c.encode());

  BitStr raw = BitStr::from_text("10110");
  CHECK(parse_instance_text("parity", TextFormat::raw, "10110\n") == raw);
  CHECK(render_instance_text("parity", TextFormat::raw, raw) == "10110\n");

  BitStr ci = encode_pair(f.encode(), encode_clause({Cnf3::lit_key(2)}));
  std::string pair_text = render_instance_text("ci", TextFormat::pair, ci);
  CHECK(parse_instance_text("ci", TextFormat::pair, pair_text) == ci);

  enumerate_instances("hampath", {3, 0, 0}, [&](const BitStr& x) {
    std::string t = render_instance_text("hampath", TextFormat::edgelist, x);
    REQUIRE(parse_instance_text("hampath", TextFormat::edgelist, t) == x);
  });
}
