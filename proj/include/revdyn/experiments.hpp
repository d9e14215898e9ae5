#pragma once

/**
 * @file experiments.hpp
 * @brief Measurement-undo on a composite object/observer system, and the
 *        four-step recall protocol run as a seeded statistical test.
 *
 * A measurement is a reversible copy of the object symbol into the observer
 * register: (x, r) -> (x, r + x mod k). Undoing it subtracts the same amount,
 * so the whole composite returns to where it started.
 */

#include <cstdint>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "revdyn/errors.hpp"
#include "revdyn/text.hpp"

namespace revdyn {

struct CompositeSystem {
  std::uint32_t modulus = 1;
  std::uint32_t object_state = 0;
  std::uint32_t observer_register = 0;

  bool operator==(const CompositeSystem&) const = default;
};

inline void validate(const CompositeSystem& c) {
  if (c.modulus == 0) throw DomainError("modulus must be at least 1");
  if (c.object_state >= c.modulus || c.observer_register >= c.modulus)
    throw DomainError("composite state out of range for modulus " + std::to_string(c.modulus));
}

inline std::string to_string(const CompositeSystem& c) {
  return "(" + std::to_string(c.object_state) + "," + std::to_string(c.observer_register) + ")";
}

inline CompositeSystem measure(const CompositeSystem& c) {
  validate(c);
  return {c.modulus, c.object_state,
          static_cast<std::uint32_t>((std::uint64_t{c.observer_register} + c.object_state) %
                                     c.modulus)};
}

inline CompositeSystem unmeasure(const CompositeSystem& c) {
  validate(c);
  return {c.modulus, c.object_state,
          static_cast<std::uint32_t>(
              (std::uint64_t{c.observer_register} + c.modulus - c.object_state) % c.modulus)};
}

// ---------------------------------------------------------------------------
// Seeded randomness
//
// Every trial draws from its own generator derived from (seed, trial), and
// bounded draws use rejection on raw 64-bit output, so results do not depend
// on the standard library's distribution implementations.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 trial_generator(std::uint64_t seed, std::uint64_t trial) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ trial));
}

/// Uniform integer in [0, bound).
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound) {
  if (bound == 0) throw DomainError("empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = gen();
  } while (x >= limit);
  return x % bound;
}

// ---------------------------------------------------------------------------
// Eraser

struct EraserReport {
  bool restored = false;
  bool trace_left = false;
  /// Register value right after the measurement: the observer did hold the
  /// result before it was recycled.
  std::uint32_t mid_register = 0;
  std::uint64_t seed = 0;
  /// Composite states from the initial one to the final one.
  std::vector<CompositeSystem> steps;
};

/// Measure, let the observer work on the record with a seeded sequence of
/// reversible register shifts, undo those shifts in reverse, then unmeasure.
inline EraserReport eraser_experiment(std::uint32_t k, const CompositeSystem& initial,
                                      std::uint64_t seed) {
  if (initial.modulus != k)
    throw DomainError("initial state has modulus " + std::to_string(initial.modulus) +
                      ", expected " + std::to_string(k));
  validate(initial);
  EraserReport rep;
  rep.seed = seed;
  rep.steps.push_back(initial);
  rep.steps.push_back(measure(initial));
  rep.mid_register = rep.steps.back().observer_register;

  auto gen = trial_generator(seed, 0);
  const auto shifts = uniform_below(gen, 4);
  std::vector<std::uint32_t> offsets;
  for (std::uint64_t s = 0; s < shifts; ++s) {
    offsets.push_back(static_cast<std::uint32_t>(uniform_below(gen, k)));
    auto c = rep.steps.back();
    c.observer_register = static_cast<std::uint32_t>((std::uint64_t{c.observer_register} + offsets.back()) % k);
    rep.steps.push_back(c);
  }
  for (auto it = offsets.rbegin(); it != offsets.rend(); ++it) {
    auto c = rep.steps.back();
    c.observer_register = static_cast<std::uint32_t>((std::uint64_t{c.observer_register} + k - *it) % k);
    rep.steps.push_back(c);
  }
  rep.steps.push_back(unmeasure(rep.steps.back()));

  const auto& fin = rep.steps.back();
  rep.restored = fin == initial;
  rep.trace_left = fin.observer_register != initial.observer_register;
  return rep;
}

inline std::string format_eraser(const EraserReport& r) {
  std::ostringstream os;
  os << std::setw(6) << "step" << std::setw(10) << "object" << std::setw(10) << "register"
     << '\n';
  for (std::size_t t = 0; t < r.steps.size(); ++t) {
    os << std::setw(6) << t << std::setw(10) << r.steps[t].object_state << std::setw(10)
       << r.steps[t].observer_register << '\n';
  }
  os << "restored=" << (r.restored ? "true" : "false")
     << " trace_left=" << (r.trace_left ? "true" : "false") << " mid_register=" << r.mid_register
     << " seed=" << r.seed << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Recall protocol

enum class Agent { immanent, transcendent };

inline Agent parse_agent(const std::string& s) {
  if (s == "immanent") return Agent::immanent;
  if (s == "transcendent") return Agent::transcendent;
  throw DomainError("unknown agent '" + s + "' (expected immanent or transcendent)");
}

inline std::string to_string(Agent a) {
  return a == Agent::immanent ? "immanent" : "transcendent";
}

enum class Verdict { not_falsified, falsified };

inline std::string to_string(Verdict v) {
  return v == Verdict::falsified ? "falsified" : "not_falsified";
}

struct TranscendenceReport {
  std::uint64_t trials = 0;
  std::uint64_t matches = 0;
  double match_rate = 0.0;
  Verdict verdict = Verdict::not_falsified;
  std::uint32_t outcomes = 0;
  Agent agent = Agent::immanent;
  std::uint64_t seed = 0;
};

/// One trial:
///   I   draw the hidden object state, measure it into the observer register;
///   II  unmeasure, so no physical record of the outcome remains;
///   III the agent predicts the outcome (a transcendent agent reads its
///       out-of-band record, an immanent one can only guess);
///   IV  measure the restored state again and compare.
/// Any mismatch falsifies.
inline TranscendenceReport transcendence_experiment(std::uint32_t k, Agent agent,
                                                    std::uint64_t trials, std::uint64_t seed) {
  if (k < 2) throw DomainError("need at least 2 outcomes");
  if (trials < 1) throw DomainError("need at least 1 trial");
  TranscendenceReport rep;
  rep.trials = trials;
  rep.outcomes = k;
  rep.agent = agent;
  rep.seed = seed;
  for (std::uint64_t t = 0; t < trials; ++t) {
    auto gen = trial_generator(seed, t);
    const CompositeSystem start{k, static_cast<std::uint32_t>(uniform_below(gen, k)), 0};

    const auto measured = measure(start);
    const std::uint32_t outcome = measured.observer_register;
    // Stored outside the simulated physical state.
    const std::uint32_t out_of_band = outcome;

    const auto restored = unmeasure(measured);

    const std::uint32_t prediction = agent == Agent::transcendent
                                         ? out_of_band
                                         : static_cast<std::uint32_t>(uniform_below(gen, k));

    const std::uint32_t redone = measure(restored).observer_register;
    if (prediction == redone) ++rep.matches;
  }
  rep.match_rate = static_cast<double>(rep.matches) / static_cast<double>(trials);
  rep.verdict = rep.matches < rep.trials ? Verdict::falsified : Verdict::not_falsified;
  return rep;
}

inline std::string format_transcendence(const TranscendenceReport& r) {
  std::ostringstream os;
  os << std::left << std::setw(14) << "agent" << std::right << std::setw(10) << "outcomes"
     << std::setw(10) << "trials" << std::setw(10) << "matches" << '\n'
     << std::left << std::setw(14) << to_string(r.agent) << std::right << std::setw(10)
     << r.outcomes << std::setw(10) << r.trials << std::setw(10) << r.matches << '\n';
  os << "trials=" << r.trials << " matches=" << r.matches
     << " match_rate=" << text::sig(r.match_rate) << " verdict=" << to_string(r.verdict)
     << " seed=" << r.seed << '\n';
  return os.str();
}

}  // namespace revdyn
