#pragma once

// Graphviz export of the configuration flow of a reversible automaton.

#include <sstream>
#include <string>

#include "revdyn/automaton.hpp"
#include "revdyn/permutation.hpp"

namespace revdyn {

namespace detail {
inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + '"';
}
}  // namespace detail

/// One node per configuration in canonical index order, one edge per
/// application of U. Fixed points come out as self-loops.
inline std::string export_dot(const Automaton& a) {
  const auto p = to_permutation(a);
  std::ostringstream os;
  os << "digraph flow {\n";
  for (std::size_t k = 0; k < p.size(); ++k)
    os << "  n" << k << " [label=" << detail::dot_quote(to_string(a.input_config(k))) << "];\n";
  for (std::size_t k = 0; k < p.size(); ++k) os << "  n" << k << " -> n" << p(k) << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace revdyn
