#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <unordered_set>

#include "cplc/bitstr.hpp"
#include "cplc/param.hpp"
#include "cplc/poly.hpp"
#include "cplc/problems.hpp"

using namespace cplc;

namespace {

std::vector<BitStr> all_strings_up_to(std::size_t max_len) {
  std::vector<BitStr> out;
  for (std::size_t len = 0; len <= max_len; ++len)
    for (std::uint64_t v = 0; v < (1ull << len); ++v) {
      BitStr s;
      for (std::size_t i = 0; i < len; ++i) s.push_back((v >> (len - 1 - i)) & 1);
      out.push_back(s);
    }
  return out;
}

}  // namespace

TEST_CASE("unary encoding") {
  CHECK(encode_unary(0).text() == "");
  CHECK(encode_unary(3).text() == "111");
  CHECK(encode_unary(7).text() == "1111111");
  CHECK(unary_value(BitStr::from_text("1111")) == 4);
  CHECK(!unary_value(BitStr::from_text("101")).has_value());
}

TEST_CASE("pairing scheme") {
  CHECK(encode_pair(BitStr::from_text("0"), BitStr::from_text("1")).text() == "1001");
  CHECK(encode_pair(BitStr(), BitStr()).text() == "0");
  auto [x, y] = decode_pair(encode_pair(BitStr::from_text("01"), BitStr::from_text("1")));
  CHECK(x.text() == "01");
  CHECK(y.text() == "1");
  CHECK_THROWS_AS((void)decode_pair(BitStr::from_text("111")), Error);
  CHECK_THROWS_AS((void)decode_pair(BitStr::from_text("110")), Error);
}

TEST_CASE("pairing round trip exhaustive to length 6") {
  auto strings = all_strings_up_to(6);
  for (const auto& x : strings)
    for (const auto& y : strings) {
      auto [a, b] = decode_pair(encode_pair(x, y));
      REQUIRE(a == x);
      REQUIRE(b == y);
    }
}

TEST_CASE("pairing injective on lengths <= 8") {
  auto strings = all_strings_up_to(8);
  std::unordered_set<std::string> seen;
  seen.reserve(strings.size() * strings.size());
  for (const auto& x : strings)
    for (const auto& y : strings) {
      auto [it, fresh] = seen.insert(encode_pair(x, y).text());
      REQUIRE(fresh);
    }
  CHECK(seen.size() == strings.size() * strings.size());
}

TEST_CASE("pair tables") {
  std::vector<std::pair<BitStr, BitStr>> entries = {
      {encode_unary(0), BitStr::from_text("10")},
      {encode_unary(1), BitStr()},
      {encode_unary(2), BitStr::from_text("0")},
  };
  BitStr table = encode_pair_table(entries);
  CHECK(pair_table_lookup(table, encode_unary(0)) == BitStr::from_text("10"));
  CHECK(pair_table_lookup(table, encode_unary(1)) == BitStr());
  CHECK(pair_table_lookup(table, encode_unary(2)) == BitStr::from_text("0"));
  CHECK(!pair_table_lookup(table, encode_unary(3)).has_value());
}

TEST_CASE("polynomial evaluation") {
  CHECK(PolyNat{5}.eval(100) == 5);
  CHECK((PolyNat{1, 2}).eval(3) == 7);
  CHECK((PolyNat{0, 0, 1}).eval(10) == 100);
  CHECK((PolyNat{0, 1}).eval(PolyNat::kValueCap) == PolyNat::kValueCap);
  CHECK_THROWS_AS((void)(PolyNat{1, 1}).eval(PolyNat::kValueCap), Error);
  // degree cap at 8
  CHECK_NOTHROW(PolyNat({0, 0, 0, 0, 0, 0, 0, 0, 1}));
  CHECK_THROWS_AS(PolyNat({0, 0, 0, 0, 0, 0, 0, 0, 0, 1}), Error);
  CHECK_THROWS_AS((void)(PolyNat{0, 0, 0, 0, 1}).mul(PolyNat{0, 0, 0, 0, 0, 1}), Error);
}

TEST_CASE("polynomial algebra") {
  PolyNat p{1, 2};     // 1 + 2t
  PolyNat q{0, 0, 3};  // 3t^2
  CHECK(p.add(q) == PolyNat{1, 2, 3});
  CHECK(p.mul(q) == PolyNat{0, 0, 3, 6});
  CHECK(p.compose(q) == PolyNat{1, 0, 6});
  CHECK(p.cover(q) == PolyNat{1, 2, 3});
  for (std::uint64_t t = 0; t <= 20; ++t) {
    CHECK(p.add(q).eval(t) == p.eval(t) + q.eval(t));
    CHECK(p.mul(q).eval(t) == p.eval(t) * q.eval(t));
    CHECK(p.compose(q).eval(t) == p.eval(q.eval(t)));
  }
}

TEST_CASE("length-lex rank and unrank") {
  auto strings = all_strings_up_to(8);
  std::uint64_t expected = 0;
  for (const auto& s : strings) {
    CHECK(length_lex_rank(s) == expected);
    CHECK(length_lex_unrank(expected) == s);
    ++expected;
  }
  for (std::size_t i = 1; i < strings.size(); ++i)
    CHECK(length_lex_less(strings[i - 1], strings[i]));
}

TEST_CASE("len parameterization") {
  CHECK(apply_param("len", BitStr::from_text("010")).text() == "111");
  for (const auto& x : all_strings_up_to(7)) {
    BitStr p = apply_param("len", x);
    CHECK(p.popcount() == x.size());
    CHECK(p.size() <= param("len").declared_length_poly.eval(x.size()));
  }
}

TEST_CASE("pair parameterizations") {
  BitStr pr = encode_pair(BitStr::from_text("01"), BitStr::from_text("111"));
  CHECK(apply_param("pi1", pr).text() == "01");
  CHECK(apply_param("pi2", pr).text() == "111");
  // mu(x, y) = (x, un(|y|)); fixed point when y is all ones
  CHECK(apply_param("mu", pr) == pr);
  BitStr pr2 = encode_pair(BitStr::from_text("01"), BitStr::from_text("010"));
  CHECK(apply_param("mu", pr2) == encode_pair(BitStr::from_text("01"), encode_unary(3)));
  CHECK_THROWS_AS((void)apply_param("mu", BitStr::from_text("11")), Error);
}

TEST_CASE("nu counts occurring variables") {
  Cnf3 f;
  f.num_vars = 2;
  f.clauses = {{Cnf3::lit_key(1), Cnf3::lit_key(2), Cnf3::lit_key(-2)}};
  REQUIRE(f.canonical());
  CHECK(apply_param("nu", f.encode()).text() == "11");
  CHECK_THROWS_AS((void)apply_param("nu", BitStr::from_text("1")), Error);
}

TEST_CASE("gamma and munu") {
  Graph g;
  g.n = 4;
  g.adj.assign(6, false);
  CHECK(apply_param("gamma", g.encode()) == encode_unary(4));
  Circuit c;
  c.gates = {{Circuit::Op::input, 0, 0}, {Circuit::Op::invert, 0, 0}};
  CHECK(apply_param("munu", c.encode()) == encode_unary(2));
}

TEST_CASE("registered parameterizations pass their length audit") {
  enumerate_instances("hampath", {4, 0, 0}, [&](const BitStr& x) {
    CHECK(apply_param("gamma", x).size() <=
          param("gamma").declared_length_poly.eval(x.size()));
  });
  enumerate_instances("3sat", {2, 2, 0}, [&](const BitStr& x) {
    CHECK(apply_param("nu", x).size() <= param("nu").declared_length_poly.eval(x.size()));
  });
  enumerate_instances("circuitsat", {3, 0, 0}, [&](const BitStr& x) {
    CHECK(apply_param("munu", x).size() <= param("munu").declared_length_poly.eval(x.size()));
  });
  enumerate_instances("toypair", {3, 3, 0}, [&](const BitStr& x) {
    CHECK(apply_param("mu", x).size() <= param("mu").declared_length_poly.eval(x.size()));
    CHECK(apply_param("pi1", x).size() <= param("pi1").declared_length_poly.eval(x.size()));
    CHECK(apply_param("pi2", x).size() <= param("pi2").declared_length_poly.eval(x.size()));
  });
}

TEST_CASE("param set") {
  ParamSet s({BitStr::from_text("11"), BitStr::from_text("0"), BitStr::from_text("11")});
  CHECK(s.size() == 2);
  CHECK(s.contains(BitStr::from_text("0")));
  CHECK(s.contains(BitStr::from_text("11")));
  CHECK(!s.contains(BitStr::from_text("1")));
  CHECK(s.encoded_size() == 2 + 1 + 1 + 1);
}
