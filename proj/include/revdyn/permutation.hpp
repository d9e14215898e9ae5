#pragma once

/**
 * @file permutation.hpp
 * @brief The combined map of a reversible automaton as a permutation of
 *        configuration indices.
 *
 * Matrix convention: row = source configuration, column = target, so row k
 * has its single 1 in column image[k].
 */

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "revdyn/automaton.hpp"
#include "revdyn/errors.hpp"

namespace revdyn {

class Permutation {
 public:
  Permutation() = default;

  /// Throws DomainError unless `image` is a bijection on {0, ..., n-1}.
  explicit Permutation(std::vector<std::size_t> image) : image_(std::move(image)) {
    std::vector<bool> hit(image_.size(), false);
    for (std::size_t k = 0; k < image_.size(); ++k) {
      const auto t = image_[k];
      if (t >= image_.size())
        throw DomainError("image[" + std::to_string(k) + "] = " + std::to_string(t) +
                          " is out of range");
      if (hit[t]) throw DomainError("index " + std::to_string(t) + " is hit twice");
      hit[t] = true;
    }
  }

  static Permutation identity(std::size_t n) {
    std::vector<std::size_t> img(n);
    std::iota(img.begin(), img.end(), std::size_t{0});
    return Permutation(std::move(img));
  }

  std::size_t size() const noexcept { return image_.size(); }
  std::size_t operator()(std::size_t k) const { return image_.at(k); }
  const std::vector<std::size_t>& image() const noexcept { return image_; }

  Permutation inverse() const {
    std::vector<std::size_t> inv(size());
    for (std::size_t k = 0; k < size(); ++k) inv[image_[k]] = k;
    return Permutation(std::move(inv));
  }

  /// (*this after first): k -> (*this)(first(k)).
  Permutation after(const Permutation& first) const {
    if (first.size() != size()) throw DomainError("permutation size mismatch");
    std::vector<std::size_t> img(size());
    for (std::size_t k = 0; k < size(); ++k) img[k] = image_[first.image_[k]];
    return Permutation(std::move(img));
  }

  bool is_identity() const {
    for (std::size_t k = 0; k < size(); ++k)
      if (image_[k] != k) return false;
    return true;
  }

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<std::size_t> image_;
};

/// U as a permutation of the (state, input) configurations. Requires a
/// reversible machine whose output alphabet is the input alphabet (as a set);
/// outputs are indexed by their position in the input alphabet.
inline Permutation to_permutation(const Automaton& a) {
  if (!a.inputs().same_set(a.outputs()))
    throw DomainError("inputs and outputs differ; U does not act on state x input");
  const auto rep = check_reversible(a);
  if (!rep.reversible) {
    const auto& g = rep.collisions.front();
    throw DomainError("not reversible: " + to_string(g[0]) + " and " + to_string(g[1]) +
                      " have the same image");
  }
  const std::size_t n_in = a.inputs().size();
  std::vector<std::size_t> img(a.config_count());
  for (std::size_t k = 0; k < img.size(); ++k) {
    const auto sym = *a.inputs().find(a.outputs()[a.output_index(k)]);
    img[k] = a.next_state_index(k) * n_in + sym;
  }
  return Permutation(std::move(img));
}

/// Splits each image index back into (next state, output) to obtain a machine
/// with the given alphabets; inputs and outputs share `symbols`.
inline Automaton automaton_from_permutation(const Permutation& p,
                                            const std::vector<std::string>& states,
                                            const std::vector<std::string>& symbols) {
  if (states.size() * symbols.size() != p.size())
    throw DomainError("permutation size " + std::to_string(p.size()) +
                      " does not equal |states| * |symbols|");
  const std::size_t m = symbols.size();
  std::vector<TableRow> rows;
  rows.reserve(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto t = p(k);
    rows.push_back({states[k / m], symbols[k % m], states[t / m], symbols[t % m]});
  }
  return Automaton::make(states, symbols, symbols, rows);
}

using BinaryMatrix = std::vector<std::vector<int>>;

inline BinaryMatrix permutation_matrix(const Permutation& p) {
  BinaryMatrix m(p.size(), std::vector<int>(p.size(), 0));
  for (std::size_t k = 0; k < p.size(); ++k) m[k][p(k)] = 1;
  return m;
}

/// Text export: a comment line naming the convention, then one row per line.
inline std::string format_matrix(const BinaryMatrix& m) {
  std::ostringstream os;
  os << "# row = source configuration, column = target configuration\n";
  for (const auto& row : m) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? " " : "") << row[c];
    os << '\n';
  }
  return os.str();
}

struct CycleDecomposition {
  /// Each cycle starts at its smallest index; cycles sorted by first element.
  std::vector<std::vector<std::size_t>> cycles;
  /// lcm of the cycle lengths.
  std::uint64_t order = 1;
};

inline CycleDecomposition cycle_decomposition(const Permutation& p) {
  CycleDecomposition out;
  std::vector<bool> seen(p.size(), false);
  // Scanning starts in increasing order, so each cycle is found from its
  // smallest element and the list comes out sorted.
  for (std::size_t start = 0; start < p.size(); ++start) {
    if (seen[start]) continue;
    std::vector<std::size_t> cyc;
    for (std::size_t k = start; !seen[k]; k = p(k)) {
      seen[k] = true;
      cyc.push_back(k);
    }
    out.order = std::lcm(out.order, static_cast<std::uint64_t>(cyc.size()));
    out.cycles.push_back(std::move(cyc));
  }
  return out;
}

/// "(0)(1)(2 4 5)(3) order=3"
inline std::string format_cycles(const CycleDecomposition& d) {
  std::ostringstream os;
  for (const auto& c : d.cycles) {
    os << '(';
    for (std::size_t j = 0; j < c.size(); ++j) os << (j ? " " : "") << c[j];
    os << ')';
  }
  os << " order=" << d.order;
  return os.str();
}

/// p^k(idx); negative k walks backwards.
inline std::size_t apply_power(const Permutation& p, std::int64_t k, std::size_t idx) {
  if (idx >= p.size())
    throw DomainError("index " + std::to_string(idx) + " out of range for size " +
                      std::to_string(p.size()));
  std::vector<std::size_t> orbit{idx};
  for (std::size_t j = p(idx); j != idx; j = p(j)) orbit.push_back(j);
  const auto len = static_cast<std::int64_t>(orbit.size());
  const auto r = ((k % len) + len) % len;
  return orbit[static_cast<std::size_t>(r)];
}

}  // namespace revdyn
