#pragma once

/**
 * @file interface.hpp
 * @brief Question-indexed readouts across the observer/object cut.
 *
 * Asking question q about micro configuration x yields readout(q, x), an
 * answer symbol. Readouts are total over questions x micro indices. When some
 * readout is many-to-one the observer sees only a coarse-grained macro
 * sequence, and the micro state has to be recovered by filtering preimages
 * through the (one-to-one) micro dynamics.
 */

#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "revdyn/automaton.hpp"
#include "revdyn/errors.hpp"
#include "revdyn/permutation.hpp"
#include "revdyn/text.hpp"

namespace revdyn {

/// User-declared interface type. Recorded as metadata only; nothing here
/// infers it from the readout.
enum class Scenario { unspecified, classical, quasi_classical, quantum };

inline std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::classical: return "I_classical";
    case Scenario::quasi_classical: return "II_quasi_classical";
    case Scenario::quantum: return "III_quantum";
    case Scenario::unspecified: break;
  }
  return "unspecified";
}

inline Scenario parse_scenario(std::string_view s) {
  if (s == "I" || s == "I_classical" || s == "classical") return Scenario::classical;
  if (s == "II" || s == "II_quasi_classical" || s == "quasi_classical")
    return Scenario::quasi_classical;
  if (s == "III" || s == "III_quantum" || s == "quantum") return Scenario::quantum;
  if (s == "unspecified") return Scenario::unspecified;
  throw DomainError("unknown scenario label '" + std::string(s) + "'");
}

class InterfaceMap {
 public:
  /// `table[q * micro_count + x]` is the answer index for question q on
  /// micro configuration x.
  InterfaceMap(std::vector<std::string> questions, std::vector<std::string> answers,
               std::size_t micro_count, std::vector<std::size_t> table,
               Scenario scenario = Scenario::unspecified)
      : questions_(std::move(questions)),
        answers_(std::move(answers)),
        micro_count_(micro_count),
        table_(std::move(table)),
        scenario_(scenario) {
    if (questions_.empty() || answers_.empty())
      throw DomainError("interface needs at least one question and one answer");
    if (table_.size() != questions_.size() * micro_count_)
      throw DomainError("readout is not total: expected " +
                        std::to_string(questions_.size() * micro_count_) + " entries, got " +
                        std::to_string(table_.size()));
    for (auto v : table_)
      if (v >= answers_.size()) throw DomainError("readout refers to an undeclared answer");
  }

  /// Single-question readout from per-configuration answer labels.
  static InterfaceMap from_labels(std::string question, std::vector<std::string> answers,
                                  const std::vector<std::string>& labels,
                                  Scenario scenario = Scenario::unspecified) {
    Alphabet ans(answers);
    std::vector<std::size_t> table;
    table.reserve(labels.size());
    for (const auto& l : labels) {
      const auto k = ans.find(l);
      if (!k) throw DomainError("undeclared answer '" + l + "'");
      table.push_back(*k);
    }
    return InterfaceMap({std::move(question)}, std::move(answers), labels.size(),
                        std::move(table), scenario);
  }

  /// Lossless readout: every configuration answers with its own label.
  static InterfaceMap identity(const Automaton& a, std::string question = "which") {
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < a.config_count(); ++k) labels.push_back(to_string(a.input_config(k)));
    return from_labels(std::move(question), labels, labels);
  }

  /// Reads only the state component of each configuration.
  static InterfaceMap state_only(const Automaton& a, std::string question = "state") {
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < a.config_count(); ++k) labels.push_back(a.input_config(k).state);
    return from_labels(std::move(question), a.states().symbols(), labels);
  }

  /// Every configuration gives the same answer.
  static InterfaceMap constant(std::size_t micro_count, std::string question = "any",
                               std::string answer = "*") {
    return from_labels(std::move(question), {answer},
                       std::vector<std::string>(micro_count, answer));
  }

  const Alphabet& questions() const noexcept { return questions_; }
  const Alphabet& answers() const noexcept { return answers_; }
  std::size_t micro_count() const noexcept { return micro_count_; }
  Scenario scenario() const noexcept { return scenario_; }

  std::size_t question_index(std::string_view q) const {
    const auto k = questions_.find(q);
    if (!k) throw DomainError("unknown question '" + std::string(q) + "'");
    return *k;
  }

  std::size_t answer_index(std::size_t q, std::size_t x) const {
    if (x >= micro_count_)
      throw DomainError("no readout entry for micro index " + std::to_string(x));
    return table_.at(q * micro_count_ + x);
  }

  const std::string& readout(std::string_view q, std::size_t x) const {
    return answers_[answer_index(question_index(q), x)];
  }

  /// readout(q, .)^-1(answer) in increasing index order.
  std::vector<std::size_t> preimage(std::size_t q, std::size_t answer) const {
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < micro_count_; ++x)
      if (answer_index(q, x) == answer) out.push_back(x);
    return out;
  }

 private:
  Alphabet questions_;
  Alphabet answers_;
  std::size_t micro_count_;
  std::vector<std::size_t> table_;
  Scenario scenario_;
};

/// Reads an interface document over the configurations of `a`:
///
///     questions: state
///     answers: s1 s2
///     scenario: II          (optional)
///     readout:
///     state s1 1 -> s1
///     ...
inline InterfaceMap parse_interface(std::string_view doc, const Automaton& a) {
  std::optional<std::vector<std::string>> questions, answers;
  Scenario scenario = Scenario::unspecified;
  bool in_readout = false;
  std::vector<std::size_t> table;
  std::vector<bool> filled;
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  const std::size_t n = a.config_count();

  for (const auto& l : text::logical_lines(doc)) {
    std::string_view rest;
    if (!in_readout) {
      if (text::strip_key(l.content, "questions", rest)) {
        questions = text::split_ws(rest);
      } else if (text::strip_key(l.content, "answers", rest)) {
        answers = text::split_ws(rest);
      } else if (text::strip_key(l.content, "scenario", rest)) {
        try {
          scenario = parse_scenario(rest);
        } catch (const DomainError& e) {
          throw ParseError(l.number, e.what());
        }
      } else if (l.content == "readout:") {
        if (!questions || !answers || questions->empty() || answers->empty())
          throw ParseError(l.number, "'readout:' before questions/answers are declared");
        in_readout = true;
        table.assign(questions->size() * n, unset);
      } else {
        throw ParseError(l.number, "malformed line '" + std::string(l.content) + "'");
      }
      continue;
    }
    const auto toks = text::split_ws(l.content);
    if (toks.size() != 5 || toks[3] != "->")
      throw ParseError(l.number, "malformed readout row '" + std::string(l.content) + "'");
    const auto q = std::find(questions->begin(), questions->end(), toks[0]);
    if (q == questions->end()) throw ParseError(l.number, "undeclared question '" + toks[0] + "'");
    const auto ans = std::find(answers->begin(), answers->end(), toks[4]);
    if (ans == answers->end()) throw ParseError(l.number, "undeclared answer '" + toks[4] + "'");
    std::size_t x = 0;
    try {
      x = a.index_of({toks[1], toks[2]});
    } catch (const DomainError& e) {
      throw ParseError(l.number, e.what());
    }
    const auto slot = static_cast<std::size_t>(q - questions->begin()) * n + x;
    if (table[slot] != unset)
      throw ParseError(l.number, "duplicate readout for " + toks[0] + " (" + toks[1] + "," +
                                     toks[2] + ")");
    table[slot] = static_cast<std::size_t>(ans - answers->begin());
  }
  if (!in_readout) throw ParseError(0, "missing 'readout:' section");
  for (std::size_t s = 0; s < table.size(); ++s) {
    if (table[s] == unset) {
      const auto c = a.input_config(s % n);
      throw ParseError(0, "readout is not total: missing " + (*questions)[s / n] + " " +
                              to_string(c));
    }
  }
  try {
    return InterfaceMap(*questions, *answers, n, std::move(table), scenario);
  } catch (const DomainError& e) {
    throw ParseError(0, e.what());
  }
}

inline InterfaceMap load_interface(const std::string& path, const Automaton& a) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_interface(ss.str(), a);
}

// ---------------------------------------------------------------------------
// Coarse graining

inline std::vector<std::string> coarse_grain(std::span<const std::size_t> micro,
                                             const InterfaceMap& m, std::string_view q) {
  const auto qi = m.question_index(q);
  std::vector<std::string> out;
  out.reserve(micro.size());
  for (auto x : micro) out.push_back(m.answers()[m.answer_index(qi, x)]);
  return out;
}

/// Macro sequence seen through question q along a trajectory of `a`.
inline std::vector<std::string> coarse_grain(const Automaton& a, const Trajectory& t,
                                             const InterfaceMap& m, std::string_view q) {
  std::vector<std::size_t> idx;
  idx.reserve(t.steps.size());
  for (const auto& c : t.steps) idx.push_back(a.index_of(c));
  return coarse_grain(std::span<const std::size_t>(idx), m, q);
}

enum class Injectivity { one_to_one, many_to_one };

inline std::string to_string(Injectivity i) {
  return i == Injectivity::one_to_one ? "one_to_one" : "many_to_one";
}

struct InterfaceClassification {
  std::map<std::string, Injectivity> per_question;
  /// Preimage size of every declared answer, per question (answer order).
  std::map<std::string, std::vector<std::size_t>> preimage_sizes;
  Injectivity overall = Injectivity::one_to_one;
  Scenario scenario_label = Scenario::unspecified;
};

inline InterfaceClassification classify_interface(const InterfaceMap& m,
                                                  std::size_t micro_count) {
  if (micro_count != m.micro_count())
    throw DomainError("interface covers " + std::to_string(m.micro_count()) +
                      " micro configurations, not " + std::to_string(micro_count));
  InterfaceClassification out;
  out.scenario_label = m.scenario();
  for (std::size_t q = 0; q < m.questions().size(); ++q) {
    std::vector<std::size_t> sizes(m.answers().size(), 0);
    for (std::size_t x = 0; x < micro_count; ++x) ++sizes[m.answer_index(q, x)];
    bool injective = true;
    for (auto s : sizes) injective = injective && s <= 1;
    const auto& name = m.questions()[q];
    out.per_question[name] = injective ? Injectivity::one_to_one : Injectivity::many_to_one;
    out.preimage_sizes[name] = std::move(sizes);
    if (!injective) out.overall = Injectivity::many_to_one;
  }
  return out;
}

inline InterfaceClassification classify_interface(const InterfaceMap& m) {
  return classify_interface(m, m.micro_count());
}

// ---------------------------------------------------------------------------
// Observer-side reconstruction

/// Sorted micro indices still consistent with every observation so far.
using CandidateSet = std::vector<std::size_t>;

/// Observations cannot come from the model; `step()` is where the candidate
/// set emptied.
class InconsistentObservations : public DomainError {
 public:
  explicit InconsistentObservations(std::size_t step)
      : DomainError("observations inconsistent with the model: candidate set empty at step " +
                    std::to_string(step)),
        step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

inline CandidateSet all_candidates(std::size_t n) {
  CandidateSet c(n);
  std::iota(c.begin(), c.end(), std::size_t{0});
  return c;
}

/// Index-level filter over a micro permutation:
///   C_0 = prior ∩ R^-1(obs_0),  C_t = U(C_{t-1}) ∩ R^-1(obs_t).
inline std::vector<CandidateSet> candidate_filter(const Permutation& u, const InterfaceMap& m,
                                                  std::string_view q,
                                                  std::span<const std::string> observations,
                                                  const CandidateSet& prior) {
  if (observations.empty()) throw DomainError("no observations");
  if (u.size() != m.micro_count())
    throw DomainError("interface and dynamics disagree on the micro configuration count");
  const auto qi = m.question_index(q);
  std::vector<CandidateSet> out;
  out.reserve(observations.size());
  CandidateSet current = prior;
  for (std::size_t t = 0; t < observations.size(); ++t) {
    const auto a = m.answers().find(observations[t]);
    if (!a) throw DomainError("unknown answer '" + observations[t] + "'");
    if (t > 0)
      for (auto& x : current) x = u(x);
    std::erase_if(current, [&](std::size_t x) { return m.answer_index(qi, x) != *a; });
    std::sort(current.begin(), current.end());
    if (current.empty()) throw InconsistentObservations(t);
    out.push_back(current);
  }
  return out;
}

inline std::vector<CandidateSet> candidate_filter(const Automaton& a, const InterfaceMap& m,
                                                  std::string_view q,
                                                  std::span<const std::string> observations,
                                                  const CandidateSet& prior) {
  return candidate_filter(to_permutation(a), m, q, observations, prior);
}

inline std::vector<CandidateSet> candidate_filter(const Automaton& a, const InterfaceMap& m,
                                                  std::string_view q,
                                                  std::span<const std::string> observations) {
  return candidate_filter(a, m, q, observations, all_candidates(a.config_count()));
}

/// The micro configurations at time 0 that are consistent with a filtered
/// candidate set at time `steps`.
inline CandidateSet initial_candidates(const Permutation& u, const CandidateSet& final_set,
                                       std::size_t steps) {
  CandidateSet out;
  for (auto x : final_set)
    out.push_back(apply_power(u, -static_cast<std::int64_t>(steps), x));
  std::sort(out.begin(), out.end());
  return out;
}

struct ReconstructibilityReport {
  std::size_t horizon = 0;
  std::size_t starts = 0;
  std::size_t identified = 0;
  double fraction_identified = 0.0;
  double mean_final_size = 0.0;
  /// Final candidate-set size for each initial configuration, by index.
  std::vector<std::size_t> final_sizes;
};

/// Filters the closed-loop run of length `horizon` from every initial
/// configuration, with the uninformed prior, and summarizes how often the
/// start is pinned down.
inline ReconstructibilityReport reconstructibility_report(const Automaton& a,
                                                          const InterfaceMap& m,
                                                          std::string_view q,
                                                          std::size_t horizon) {
  const auto u = to_permutation(a);
  const auto qi = m.question_index(q);
  const std::size_t n = u.size();
  ReconstructibilityReport rep;
  rep.horizon = horizon;
  rep.starts = n;
  rep.final_sizes.resize(n);
  std::size_t total = 0;
  for (std::size_t x0 = 0; x0 < n; ++x0) {
    std::vector<std::string> obs;
    obs.reserve(horizon + 1);
    std::size_t x = x0;
    for (std::size_t t = 0; t <= horizon; ++t) {
      obs.push_back(m.answers()[m.answer_index(qi, x)]);
      x = u(x);
    }
    const auto sets = candidate_filter(u, m, q, obs, all_candidates(n));
    const auto size = sets.back().size();
    rep.final_sizes[x0] = size;
    total += size;
    if (size == 1) ++rep.identified;
  }
  rep.fraction_identified = n ? static_cast<double>(rep.identified) / static_cast<double>(n) : 0.0;
  rep.mean_final_size = n ? static_cast<double>(total) / static_cast<double>(n) : 0.0;
  return rep;
}

}  // namespace revdyn
