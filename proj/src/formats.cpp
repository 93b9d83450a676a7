#include "cplc/formats.hpp"

#include <sstream>
#include <vector>

#include "cplc/problems.hpp"

namespace cplc {

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t") == std::string::npos;
}

std::vector<long long> ints_of(const std::string& line) {
  std::istringstream is(line);
  std::vector<long long> out;
  long long v;
  while (is >> v) out.push_back(v);
  std::string rest;
  if (is.clear(), is >> rest) raise(Errc::malformed_instance, "non-numeric token: " + rest);
  return out;
}

// ---- DIMACS ----

BitStr parse_dimacs(const std::string& text) {
  Cnf3 f;
  bool header = false;
  std::size_t expect_clauses = 0;
  for (const auto& line : lines_of(text)) {
    if (blank(line) || line[0] == 'c') continue;
    if (line[0] == 'p') {
      std::istringstream is(line);
      std::string p, cnf;
      long long nv, nc;
      if (!(is >> p >> cnf >> nv >> nc) || cnf != "cnf" || nv < 0 || nc < 0)
        raise(Errc::malformed_instance, "bad DIMACS header");
      f.num_vars = static_cast<std::uint32_t>(nv);
      expect_clauses = static_cast<std::size_t>(nc);
      header = true;
      continue;
    }
    if (!header) raise(Errc::malformed_instance, "clause before DIMACS header");
    auto vals = ints_of(line);
    if (vals.size() != 4 || vals.back() != 0)
      raise(Errc::malformed_instance, "expected exactly 3 literals terminated by 0");
    std::array<std::uint32_t, 3> cl{};
    for (int i = 0; i < 3; ++i) {
      long long lit = vals[i];
      if (lit == 0 || std::abs(lit) > static_cast<long long>(f.num_vars))
        raise(Errc::malformed_instance, "literal out of range");
      cl[i] = Cnf3::lit_key(static_cast<std::int32_t>(lit));
    }
    f.clauses.push_back(cl);
  }
  if (!header) raise(Errc::malformed_instance, "missing DIMACS header");
  if (f.clauses.size() != expect_clauses)
    raise(Errc::malformed_instance, "clause count differs from header");
  if (!f.canonical())
    raise(Errc::malformed_instance, "formula is not in canonical sorted form");
  return f.encode();
}

std::string render_dimacs(const BitStr& enc) {
  Cnf3 f = Cnf3::decode(enc);
  std::ostringstream os;
  os << "p cnf " << f.num_vars << " " << f.clauses.size() << "\n";
  for (const auto& cl : f.clauses) {
    for (std::uint32_t key : cl) os << Cnf3::key_lit(key) << " ";
    os << "0\n";
  }
  return os.str();
}

// ---- edge lists ----

BitStr parse_graph_edgelist(const std::string& text) {
  auto ls = lines_of(text);
  std::size_t i = 0;
  while (i < ls.size() && blank(ls[i])) ++i;
  if (i == ls.size()) raise(Errc::malformed_instance, "empty edge list");
  auto header = ints_of(ls[i++]);
  if (header.size() != 2 || header[0] < 0 || header[1] < 0)
    raise(Errc::malformed_instance, "graph header must be: n m");
  Graph g;
  g.n = static_cast<std::uint32_t>(header[0]);
  g.adj.assign(static_cast<std::size_t>(g.n) * (g.n ? g.n - 1 : 0) / 2, false);
  std::size_t m = 0;
  std::size_t last_index = 0;
  for (; i < ls.size(); ++i) {
    if (blank(ls[i])) continue;
    auto uv = ints_of(ls[i]);
    if (uv.size() != 2) raise(Errc::malformed_instance, "edge line must be: u v");
    long long u = uv[0], v = uv[1];
    if (u < 1 || v <= u || v > g.n) raise(Errc::malformed_instance, "edge must satisfy 1 <= u < v <= n");
    std::size_t idx = Graph::pair_index(static_cast<std::uint32_t>(u),
                                        static_cast<std::uint32_t>(v), g.n);
    if (m && idx <= last_index) raise(Errc::malformed_instance, "edges must be sorted and distinct");
    last_index = idx;
    g.adj[idx] = true;
    ++m;
  }
  if (m != static_cast<std::size_t>(header[1]))
    raise(Errc::malformed_instance, "edge count differs from header");
  return g.encode();
}

std::string render_graph_edgelist(const BitStr& enc) {
  Graph g = Graph::decode(enc);
  std::ostringstream edges;
  std::size_t m = 0;
  for (std::uint32_t u = 1; u <= g.n; ++u)
    for (std::uint32_t v = u + 1; v <= g.n; ++v)
      if (g.edge(u, v)) {
        edges << u << " " << v << "\n";
        ++m;
      }
  std::ostringstream os;
  os << g.n << " " << m << "\n" << edges.str();
  return os.str();
}

BitStr parse_hypergraph_edgelist(const std::string& problem_id, const std::string& text) {
  auto ls = lines_of(text);
  std::size_t i = 0;
  while (i < ls.size() && blank(ls[i])) ++i;
  if (i == ls.size()) raise(Errc::malformed_instance, "empty edge list");
  auto header = ints_of(ls[i++]);
  if (header.size() != 4) raise(Errc::malformed_instance, "hypergraph header must be: n d k m");
  Hypergraph h;
  h.n = static_cast<std::uint32_t>(header[0]);
  h.d = static_cast<std::uint32_t>(header[1]);
  h.k = static_cast<std::uint32_t>(header[2]);
  for (; i < ls.size(); ++i) {
    if (blank(ls[i])) continue;
    auto vs = ints_of(ls[i]);
    std::vector<std::uint32_t> e;
    for (long long v : vs) {
      if (v < 1 || v > h.n) raise(Errc::malformed_instance, "vertex out of range");
      e.push_back(static_cast<std::uint32_t>(v));
    }
    h.edges.push_back(std::move(e));
  }
  if (h.edges.size() != static_cast<std::size_t>(header[3]))
    raise(Errc::malformed_instance, "edge count differs from header");
  if (!h.canonical()) raise(Errc::malformed_instance, "hypergraph not canonical");
  BitStr enc = h.encode();
  if (!validate(problem_id, enc))
    raise(Errc::malformed_instance, "instance invalid for " + problem_id);
  return enc;
}

std::string render_hypergraph_edgelist(const BitStr& enc) {
  Hypergraph h = Hypergraph::decode(enc);
  std::ostringstream os;
  os << h.n << " " << h.d << " " << h.k << " " << h.edges.size() << "\n";
  for (const auto& e : h.edges) {
    for (std::size_t j = 0; j < e.size(); ++j) os << (j ? " " : "") << e[j];
    os << "\n";
  }
  return os.str();
}

// ---- gate lists ----

BitStr parse_gates(const std::string& text) {
  Circuit c;
  for (const auto& line : lines_of(text)) {
    if (blank(line) || line[0] == '#') continue;
    std::istringstream is(line);
    std::string op;
    is >> op;
    Circuit::Gate g;
    long long a = 0, b = 0;
    if (op == "INPUT") {
      g.op = Circuit::Op::input;
    } else if (op == "NOT") {
      if (!(is >> a)) raise(Errc::malformed_instance, "NOT needs one operand");
      g.op = Circuit::Op::invert;
    } else if (op == "AND" || op == "OR") {
      if (!(is >> a >> b)) raise(Errc::malformed_instance, op + " needs two operands");
      g.op = op == "AND" ? Circuit::Op::conj : Circuit::Op::disj;
    } else {
      raise(Errc::malformed_instance, "unknown gate: " + op);
    }
    std::string rest;
    if (is >> rest) raise(Errc::malformed_instance, "trailing tokens on gate line");
    long long t = static_cast<long long>(c.gates.size());
    if (g.op != Circuit::Op::input) {
      if (a < 0 || a >= t || (g.op != Circuit::Op::invert && (b < 0 || b >= t || a > b)))
        raise(Errc::malformed_instance, "gate operands must reference earlier gates (a <= b)");
      g.a = static_cast<std::uint32_t>(a);
      g.b = static_cast<std::uint32_t>(b);
    }
    c.gates.push_back(g);
  }
  if (c.gates.empty()) raise(Errc::malformed_instance, "circuit needs at least one gate");
  return c.encode();
}

std::string render_gates(const BitStr& enc) {
  Circuit c = Circuit::decode(enc);
  std::ostringstream os;
  for (const auto& g : c.gates) {
    switch (g.op) {
      case Circuit::Op::input: os << "INPUT\n"; break;
      case Circuit::Op::invert: os << "NOT " << g.a << "\n"; break;
      case Circuit::Op::conj: os << "AND " << g.a << " " << g.b << "\n"; break;
      case Circuit::Op::disj: os << "OR " << g.a << " " << g.b << "\n"; break;
    }
  }
  return os.str();
}

// ---- raw bits ----

BitStr parse_raw(const std::string& text) {
  std::string bits;
  for (char ch : text) {
    if (ch == '\n' || ch == '\r' || ch == ' ' || ch == '\t') continue;
    bits.push_back(ch);
  }
  return BitStr::from_text(bits);
}

std::string render_raw(const BitStr& enc) { return enc.text() + "\n"; }

// ---- pairs ----

// Second-component formats per pair language.
std::string pair_second_kind(const std::string& problem_id) {
  if (problem_id == "ci" || problem_id == "cmi") return "clause";
  if (problem_id == "mmc") return "assignment";
  return "raw";
}

BitStr parse_pair_second(const std::string& kind, const std::string& text) {
  if (kind == "clause") {
    auto vals = ints_of(text);
    if (vals.empty() || vals.back() != 0)
      raise(Errc::malformed_instance, "clause must be integers terminated by 0");
    std::vector<std::uint32_t> keys;
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
      if (vals[i] == 0) raise(Errc::malformed_instance, "literal 0 inside clause");
      keys.push_back(Cnf3::lit_key(static_cast<std::int32_t>(vals[i])));
    }
    for (std::size_t i = 1; i < keys.size(); ++i)
      if (keys[i] <= keys[i - 1]) raise(Errc::malformed_instance, "clause literals must be sorted, repeat-free");
    return encode_clause(keys);
  }
  return parse_raw(text);  // assignment and raw are a 0/1 line
}

std::string render_pair_second(const std::string& kind, const BitStr& enc) {
  if (kind == "clause") {
    auto keys = decode_clause(enc);
    if (!keys) raise(Errc::malformed_instance, "not a clause encoding");
    std::ostringstream os;
    for (std::uint32_t key : *keys) os << Cnf3::key_lit(key) << " ";
    os << "0\n";
    return os.str();
  }
  return render_raw(enc);
}

std::string pair_first_problem(const std::string& problem_id) {
  if (problem_id == "ci" || problem_id == "mmc" || problem_id == "cmi") return "3sat";
  return "";  // raw
}

BitStr parse_pair(const std::string& problem_id, const std::string& text) {
  auto ls = lines_of(text);
  std::string first, second;
  bool seen_sep = false;
  for (const auto& line : ls) {
    if (line == "---") {
      if (seen_sep) raise(Errc::malformed_instance, "more than one --- separator");
      seen_sep = true;
      continue;
    }
    (seen_sep ? second : first) += line + "\n";
  }
  if (!seen_sep) raise(Errc::malformed_instance, "pair instance needs a --- separator");
  std::string fp = pair_first_problem(problem_id);
  BitStr x = fp.empty() ? parse_raw(first) : parse_instance_text(fp, default_format(fp), first);
  BitStr y = parse_pair_second(pair_second_kind(problem_id), second);
  return encode_pair(x, y);
}

std::string render_pair(const std::string& problem_id, const BitStr& enc) {
  auto [x, y] = decode_pair(enc);
  std::string fp = pair_first_problem(problem_id);
  std::string first =
      fp.empty() ? render_raw(x) : render_instance_text(fp, default_format(fp), x);
  return first + "---\n" + render_pair_second(pair_second_kind(problem_id), y);
}

}  // namespace

TextFormat parse_format_name(const std::string& name) {
  if (name == "dimacs") return TextFormat::dimacs;
  if (name == "edgelist") return TextFormat::edgelist;
  if (name == "gates") return TextFormat::gates;
  if (name == "raw") return TextFormat::raw;
  if (name == "pair") return TextFormat::pair;
  raise(Errc::usage, "unknown format: " + name);
}

std::string format_name(TextFormat f) {
  switch (f) {
    case TextFormat::dimacs: return "dimacs";
    case TextFormat::edgelist: return "edgelist";
    case TextFormat::gates: return "gates";
    case TextFormat::raw: return "raw";
    case TextFormat::pair: return "pair";
  }
  return "?";
}

TextFormat default_format(const std::string& problem_id) {
  if (problem_id == "3sat") return TextFormat::dimacs;
  if (problem_id == "hampath" || problem_id.rfind("hs", 0) == 0) return TextFormat::edgelist;
  if (problem_id == "circuitsat") return TextFormat::gates;
  if (has_problem(problem_id) && problem(problem_id).pair_language) return TextFormat::pair;
  return TextFormat::raw;
}

BitStr parse_instance_text(const std::string& problem_id, TextFormat format,
                           const std::string& text) {
  switch (format) {
    case TextFormat::dimacs: return parse_dimacs(text);
    case TextFormat::edgelist:
      return problem_id == "hampath" ? parse_graph_edgelist(text)
                                     : parse_hypergraph_edgelist(problem_id, text);
    case TextFormat::gates: return parse_gates(text);
    case TextFormat::raw: return parse_raw(text);
    case TextFormat::pair: return parse_pair(problem_id, text);
  }
  raise(Errc::usage, "unhandled format");
}

std::string render_instance_text(const std::string& problem_id, TextFormat format,
                                 const BitStr& instance) {
  switch (format) {
    case TextFormat::dimacs: return render_dimacs(instance);
    case TextFormat::edgelist:
      return problem_id == "hampath" ? render_graph_edgelist(instance)
                                     : render_hypergraph_edgelist(instance);
    case TextFormat::gates: return render_gates(instance);
    case TextFormat::raw: return render_raw(instance);
    case TextFormat::pair: return render_pair(problem_id, instance);
  }
  raise(Errc::usage, "unhandled format");
}

}  // namespace cplc
