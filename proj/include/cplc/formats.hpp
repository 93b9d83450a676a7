#pragma once

#include <string>

#include "cplc/bitstr.hpp"

namespace cplc {

// Textual instance formats. Parsers are strict: the text must describe the
// canonical form (sorted clauses/edges), so text -> binary -> text round
// trips are lossless.
//
//   dimacs   "p cnf <vars> <clauses>" header plus "l1 l2 l3 0" lines
//   edgelist graphs: "n m" then "u v" lines (1-based, u < v, sorted);
//            hypergraphs: "n d k m" then one sorted vertex list per line
//   gates    one gate per line: INPUT | NOT i | AND i j | OR i j (0-based)
//   raw      a single line of 0/1 characters
//
// Pair instances are two sections separated by a line containing only "---";
// the second component uses "clause" (ints terminated by 0), "assignment"
// (0/1 string) or raw, depending on the pair language.

enum class TextFormat { dimacs, edgelist, gates, raw, pair };

TextFormat parse_format_name(const std::string& name);
std::string format_name(TextFormat f);

/// Default text format for a problem id.
TextFormat default_format(const std::string& problem_id);

/// Parses text into the canonical binary encoding for the given problem.
/// Throws Errc::malformed_instance on any deviation.
BitStr parse_instance_text(const std::string& problem_id, TextFormat format,
                           const std::string& text);

/// Renders the canonical binary encoding as text.
std::string render_instance_text(const std::string& problem_id, TextFormat format,
                                 const BitStr& instance);

}  // namespace cplc
