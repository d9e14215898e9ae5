#pragma once

/**
 * @file automaton.hpp
 * @brief Finite Mealy automata with a one-to-one combined map.
 *
 * An automaton is given by states S, inputs I, outputs O, a transition table
 * delta : S x I -> S and an output table lambda : S x I -> O. The combined map
 *
 *     U : (s, i) -> (delta(s, i), lambda(s, i))
 *
 * is what evolves a configuration. The machine is called reversible when U is
 * injective; neither delta nor lambda has to be injective on its own.
 *
 * Symbols are opaque tokens compared by identity. Declaration order is the
 * canonical index order: configuration (s, i) has index
 * state_index(s) * |I| + input_index(i).
 */

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "revdyn/errors.hpp"
#include "revdyn/text.hpp"

namespace revdyn {

/// Ordered list of distinct tokens with index lookup.
class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    for (std::size_t k = 0; k < symbols_.size(); ++k) {
      if (!index_.emplace(symbols_[k], k).second)
        throw DomainError("duplicate symbol '" + symbols_[k] + "'");
    }
  }

  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  const std::string& operator[](std::size_t k) const { return symbols_.at(k); }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }

  std::optional<std::size_t> find(std::string_view sym) const {
    const auto it = index_.find(std::string(sym));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(std::string_view sym) const { return find(sym).has_value(); }

  /// Same tokens regardless of order.
  bool same_set(const Alphabet& other) const {
    if (size() != other.size()) return false;
    return std::all_of(symbols_.begin(), symbols_.end(),
                       [&](const std::string& s) { return other.contains(s); });
  }

  bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// A (state, symbol) pair. The symbol is an input before a step and an output
/// after it.
struct Configuration {
  std::string state;
  std::string symbol;

  bool operator==(const Configuration&) const = default;
};

inline std::string to_string(const Configuration& c) {
  return "(" + c.state + "," + c.symbol + ")";
}

/// One row of a transition/output table.
struct TableRow {
  std::string state;
  std::string input;
  std::string next_state;
  std::string output;
};

class Automaton {
 public:
  /// Builds and validates a machine. Rows may come in any order; the table
  /// must be total with no duplicate (state, input) pairs.
  static Automaton make(std::vector<std::string> states, std::vector<std::string> inputs,
                        std::vector<std::string> outputs, const std::vector<TableRow>& rows) {
    Automaton a;
    a.states_ = Alphabet(std::move(states));
    a.inputs_ = Alphabet(std::move(inputs));
    a.outputs_ = Alphabet(std::move(outputs));
    if (a.states_.empty() || a.inputs_.empty() || a.outputs_.empty())
      throw DomainError("states, inputs and outputs must be non-empty");

    const std::size_t n = a.config_count();
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    a.next_.assign(n, unset);
    a.out_.assign(n, unset);
    for (const auto& r : rows) {
      const auto s = a.states_.find(r.state);
      const auto i = a.inputs_.find(r.input);
      const auto ns = a.states_.find(r.next_state);
      const auto o = a.outputs_.find(r.output);
      if (!s) throw DomainError("undeclared state '" + r.state + "'");
      if (!i) throw DomainError("undeclared input '" + r.input + "'");
      if (!ns) throw DomainError("undeclared state '" + r.next_state + "'");
      if (!o) throw DomainError("undeclared output '" + r.output + "'");
      const std::size_t k = *s * a.inputs_.size() + *i;
      if (a.next_[k] != unset)
        throw DomainError("duplicate pair (" + r.state + "," + r.input + ")");
      a.next_[k] = *ns;
      a.out_[k] = *o;
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (a.next_[k] == unset) {
        const auto c = a.input_config(k);
        throw DomainError("missing pair (" + c.state + "," + c.symbol + ")");
      }
    }
    return a;
  }

  const Alphabet& states() const noexcept { return states_; }
  const Alphabet& inputs() const noexcept { return inputs_; }
  const Alphabet& outputs() const noexcept { return outputs_; }

  /// |S| * |I|.
  std::size_t config_count() const noexcept { return states_.size() * inputs_.size(); }

  /// Index-level transition: next state index for configuration index k.
  std::size_t next_state_index(std::size_t k) const { return next_.at(k); }
  /// Index-level output: output symbol index for configuration index k.
  std::size_t output_index(std::size_t k) const { return out_.at(k); }

  /// Canonical index of a pre-step configuration (symbol drawn from inputs).
  std::size_t index_of(const Configuration& c) const {
    const auto s = states_.find(c.state);
    if (!s) throw DomainError("unknown state '" + c.state + "'");
    const auto i = inputs_.find(c.symbol);
    if (!i) throw DomainError("symbol '" + c.symbol + "' is not in the input alphabet");
    return *s * inputs_.size() + *i;
  }

  Configuration input_config(std::size_t k) const {
    return {states_[k / inputs_.size()], inputs_[k % inputs_.size()]};
  }

  /// All table rows in canonical order.
  std::vector<TableRow> rows() const {
    std::vector<TableRow> out;
    out.reserve(config_count());
    for (std::size_t k = 0; k < config_count(); ++k) {
      const auto c = input_config(k);
      out.push_back({c.state, c.symbol, states_[next_[k]], outputs_[out_[k]]});
    }
    return out;
  }

  bool operator==(const Automaton& o) const {
    return states_ == o.states_ && inputs_ == o.inputs_ && outputs_ == o.outputs_ &&
           next_ == o.next_ && out_ == o.out_;
  }

 private:
  Automaton() = default;

  Alphabet states_;
  Alphabet inputs_;
  Alphabet outputs_;
  std::vector<std::size_t> next_;
  std::vector<std::size_t> out_;
};

// ---------------------------------------------------------------------------
// Document format

/// Parses the line-oriented description:
///
///     states: s1 s2
///     inputs: 1 2 3
///     outputs: 1 2 3
///     table:
///     s1 1 -> s1 1
///     ...
///
/// '#' starts a comment line. Errors carry the offending line number.
inline Automaton parse_automaton(std::string_view doc) {
  std::optional<std::vector<std::string>> states, inputs, outputs;
  std::vector<TableRow> rows;
  std::set<std::pair<std::string, std::string>> seen;
  bool in_table = false;

  auto header = [](const text::Line& l, std::string_view rest,
                   std::optional<std::vector<std::string>>& slot, const char* name) {
    if (slot) throw ParseError(l.number, std::string("repeated '") + name + ":' line");
    auto toks = text::split_ws(rest);
    if (toks.empty()) throw ParseError(l.number, std::string("empty '") + name + ":' list");
    std::set<std::string> distinct;
    for (const auto& t : toks) {
      if (t == "->") throw ParseError(l.number, "'->' is not a valid symbol");
      if (!distinct.insert(t).second)
        throw ParseError(l.number, "duplicate symbol '" + t + "'");
    }
    slot = std::move(toks);
  };

  for (const auto& l : text::logical_lines(doc)) {
    std::string_view rest;
    if (!in_table) {
      if (text::strip_key(l.content, "states", rest)) {
        header(l, rest, states, "states");
      } else if (text::strip_key(l.content, "inputs", rest)) {
        header(l, rest, inputs, "inputs");
      } else if (text::strip_key(l.content, "outputs", rest)) {
        header(l, rest, outputs, "outputs");
      } else if (l.content == "table:") {
        if (!states || !inputs || !outputs)
          throw ParseError(l.number, "'table:' before states/inputs/outputs are declared");
        in_table = true;
      } else {
        throw ParseError(l.number, "malformed line '" + std::string(l.content) + "'");
      }
      continue;
    }
    const auto toks = text::split_ws(l.content);
    if (toks.size() != 5 || toks[2] != "->")
      throw ParseError(l.number, "malformed table row '" + std::string(l.content) + "'");
    TableRow r{toks[0], toks[1], toks[3], toks[4]};
    if (!seen.emplace(r.state, r.input).second)
      throw ParseError(l.number, "duplicate pair (" + r.state + "," + r.input + ")");
    auto check = [&](const std::vector<std::string>& alpha, const std::string& sym,
                     const char* kind) {
      if (std::find(alpha.begin(), alpha.end(), sym) == alpha.end())
        throw ParseError(l.number, std::string("undeclared ") + kind + " '" + sym + "'");
    };
    check(*states, r.state, "state");
    check(*inputs, r.input, "input");
    check(*states, r.next_state, "state");
    check(*outputs, r.output, "output");
    rows.push_back(std::move(r));
  }
  if (!states || !inputs || !outputs) throw ParseError(0, "missing states/inputs/outputs");
  if (!in_table) throw ParseError(0, "missing 'table:' section");

  try {
    return Automaton::make(*states, *inputs, *outputs, rows);
  } catch (const DomainError& e) {
    // Only duplicate declarations and totality can fail here; neither is
    // tied to a single row.
    throw ParseError(0, e.what());
  }
}

inline Automaton load_automaton(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_automaton(ss.str());
}

/// Inverse of parse_automaton.
inline std::string format_automaton(const Automaton& a) {
  std::ostringstream os;
  auto list = [&](const char* key, const Alphabet& al) {
    os << key << ":";
    for (const auto& s : al.symbols()) os << ' ' << s;
    os << '\n';
  };
  list("states", a.states());
  list("inputs", a.inputs());
  list("outputs", a.outputs());
  os << "table:\n";
  for (const auto& r : a.rows())
    os << r.state << ' ' << r.input << " -> " << r.next_state << ' ' << r.output << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Reversibility

struct ReversibilityReport {
  bool reversible = true;
  /// Groups of distinct configurations that U sends to the same (state,
  /// output) pair. Each group lists pre-step configurations in canonical
  /// order; groups are ordered by their first member.
  std::vector<std::vector<Configuration>> collisions;
};

inline ReversibilityReport check_reversible(const Automaton& a) {
  const std::size_t n = a.config_count();
  const std::size_t n_out = a.outputs().size();
  std::vector<std::vector<std::size_t>> by_image(a.states().size() * n_out);
  for (std::size_t k = 0; k < n; ++k)
    by_image[a.next_state_index(k) * n_out + a.output_index(k)].push_back(k);

  ReversibilityReport report;
  std::vector<std::vector<std::size_t>> groups;
  for (auto& g : by_image)
    if (g.size() > 1) groups.push_back(g);
  std::sort(groups.begin(), groups.end());
  for (const auto& g : groups) {
    report.reversible = false;
    std::vector<Configuration> cs;
    for (auto k : g) cs.push_back(a.input_config(k));
    report.collisions.push_back(std::move(cs));
  }
  return report;
}

inline bool is_reversible(const Automaton& a) { return check_reversible(a).reversible; }

// ---------------------------------------------------------------------------
// Evolution

/// One application of U.
inline Configuration step(const Automaton& a, const Configuration& c) {
  const std::size_t k = a.index_of(c);
  return {a.states()[a.next_state_index(k)], a.outputs()[a.output_index(k)]};
}

enum class RunMode { closed_loop, open_loop };

/// A run of the machine.
///
/// Closed loop: steps[t+1] = U(steps[t]); every emitted output is the next
/// input. Open loop: steps[0] = (s0, in_0) and steps[t+1] = U(s_t, in_t), so
/// each later entry carries the emitted output; the external inputs are kept
/// in `fed_inputs`.
struct Trajectory {
  std::vector<Configuration> steps;
  RunMode mode = RunMode::closed_loop;
  std::vector<std::string> fed_inputs;

  bool closed_loop() const noexcept { return mode == RunMode::closed_loop; }
  bool operator==(const Trajectory&) const = default;
};

inline Trajectory run_closed(const Automaton& a, const Configuration& c0, std::size_t n) {
  a.index_of(c0);
  Trajectory t;
  t.steps.reserve(n + 1);
  t.steps.push_back(c0);
  for (std::size_t k = 0; k < n; ++k) {
    const auto next = step(a, t.steps.back());
    if (k + 1 < n && !a.inputs().contains(next.symbol)) {
      throw DomainError("feedback violation at step " + std::to_string(k + 1) +
                        ": output '" + next.symbol + "' is not a legal input");
    }
    t.steps.push_back(next);
  }
  return t;
}

inline Trajectory run_open(const Automaton& a, const std::string& s0,
                           const std::vector<std::string>& inputs) {
  Trajectory t;
  t.mode = RunMode::open_loop;
  t.fed_inputs = inputs;
  if (!a.states().contains(s0)) throw DomainError("unknown state '" + s0 + "'");
  if (inputs.empty()) {
    t.steps.push_back({s0, ""});
    return t;
  }
  t.steps.push_back({s0, inputs.front()});
  std::string state = s0;
  for (const auto& in : inputs) {
    auto next = step(a, {state, in});
    state = next.state;
    t.steps.push_back(std::move(next));
  }
  return t;
}

/// The machine a^-1 with inputs and outputs swapped, so that
/// step(invert(a), step(a, c)) == c.
inline Automaton invert(const Automaton& a) {
  const auto rep = check_reversible(a);
  if (!rep.reversible) {
    const auto& g = rep.collisions.front();
    throw DomainError("not reversible: " + to_string(g[0]) + " and " + to_string(g[1]) +
                      " have the same image");
  }
  if (a.inputs().size() != a.outputs().size())
    throw DomainError("alphabet size mismatch: |inputs| = " +
                      std::to_string(a.inputs().size()) + ", |outputs| = " +
                      std::to_string(a.outputs().size()));
  std::vector<TableRow> rows;
  rows.reserve(a.config_count());
  for (const auto& r : a.rows()) rows.push_back({r.next_state, r.output, r.state, r.input});
  return Automaton::make(a.states().symbols(), a.outputs().symbols(), a.inputs().symbols(),
                         rows);
}

/// Runs the inverse machine back from the last configuration of `t` and
/// returns the recovered starting configuration. For open-loop runs the
/// emitted outputs stored in the trajectory are recycled as inverse inputs.
inline Configuration undo_trajectory(const Automaton& a, const Trajectory& t) {
  if (t.steps.empty()) throw DomainError("empty trajectory");
  const Automaton inv = invert(a);
  const std::size_t n = t.steps.size() - 1;
  if (t.closed_loop()) {
    Configuration c = t.steps.back();
    for (std::size_t k = 0; k < n; ++k) c = step(inv, c);
    return c;
  }
  if (n == 0) return t.steps.front();
  Configuration c = t.steps.back();
  for (std::size_t k = n; k-- > 0;) {
    const auto back = step(inv, c);  // (s_k, in_k)
    if (k == 0) return back;
    c = {back.state, t.steps[k].symbol};
  }
  return c;
}

}  // namespace revdyn
