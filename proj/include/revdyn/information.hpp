#pragma once

/**
 * @file information.hpp
 * @brief Entropy bookkeeping over micro/macro ensembles and the information
 *        flux calculus.
 *
 * Two independent parts live here:
 *  - Distributions over configuration indices. Pushing a distribution through
 *    a permutation keeps its Shannon entropy; projecting it through a
 *    many-to-one readout can only lower it.
 *  - Flow of bits through space: j = N v i, the surface flow sum of
 *    (j . n) dA over patches, the sphere flow 4 pi x^2 c i, and a lattice
 *    form of the continuity equation in exact integer arithmetic.
 */

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "revdyn/errors.hpp"
#include "revdyn/interface.hpp"
#include "revdyn/permutation.hpp"
#include "revdyn/text.hpp"

namespace revdyn {

// ---------------------------------------------------------------------------
// Distributions

class Distribution {
 public:
  static constexpr double sum_tolerance = 1e-12;

  explicit Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw DomainError("empty distribution");
    double sum = 0.0;
    for (auto p : probs_) {
      if (!(p >= 0.0) || !std::isfinite(p))
        throw DomainError("distribution entries must be finite and non-negative");
      sum += p;
    }
    if (std::abs(sum - 1.0) > sum_tolerance)
      throw DomainError("distribution sums to " + text::sig(sum, 17) + ", not 1");
  }

  static Distribution uniform(std::size_t n) {
    return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  static Distribution point(std::size_t n, std::size_t k) {
    std::vector<double> p(n, 0.0);
    p.at(k) = 1.0;
    return Distribution(std::move(p));
  }

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t k) const { return probs_.at(k); }
  const std::vector<double>& probs() const noexcept { return probs_; }

 private:
  std::vector<double> probs_;
};

/// Shannon entropy in bits, with 0 log 0 = 0.
inline double entropy(const Distribution& d) {
  double h = 0.0;
  for (auto p : d.probs())
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

/// out[image[k]] = d[k].
inline Distribution push_forward(const Distribution& d, const Permutation& p) {
  if (d.size() != p.size())
    throw DomainError("distribution has " + std::to_string(d.size()) +
                      " entries but the permutation acts on " + std::to_string(p.size()));
  std::vector<double> out(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) out[p(k)] = d[k];
  return Distribution(std::move(out));
}

/// Macro distribution over m's answers for question q.
inline Distribution project(const Distribution& d, const InterfaceMap& m, std::string_view q) {
  if (d.size() != m.micro_count())
    throw DomainError("readout covers " + std::to_string(m.micro_count()) +
                      " micro configurations, distribution has " + std::to_string(d.size()));
  const auto qi = m.question_index(q);
  std::vector<double> out(m.answers().size(), 0.0);
  for (std::size_t x = 0; x < d.size(); ++x) out[m.answer_index(qi, x)] += d[x];
  return Distribution(std::move(out));
}

// ---------------------------------------------------------------------------
// Flux

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline Vec3 normalized(const Vec3& a) { return (1.0 / norm(a)) * a; }

inline constexpr double speed_of_light = 2.998e8;  // m/s

/// j = N v i in bits m^-2 s^-1.
inline double flux_density(double objects_per_m3, double velocity, double bits_per_object) {
  if (objects_per_m3 < 0.0) throw DomainError("negative carrier density");
  if (bits_per_object < 0.0) throw DomainError("negative information per carrier");
  return objects_per_m3 * velocity * bits_per_object;
}

/// A flat surface element carrying flow density j (bits m^-2 s^-1).
struct SurfacePatch {
  Vec3 j{};
  Vec3 n{};  ///< unit normal
  double area = 0.0;  ///< m^2
};

inline void validate(const SurfacePatch& p) {
  if (std::abs(norm(p.n) - 1.0) > 1e-9) throw DomainError("patch normal is not a unit vector");
  if (!(p.area > 0.0)) throw DomainError("patch area must be positive");
}

/// Sum of (j . n) area over the patches, in bits/s.
inline double surface_flow(std::span<const SurfacePatch> patches) {
  double total = 0.0;
  for (const auto& p : patches) {
    validate(p);
    total += dot(p.j, p.n) * p.area;
  }
  return total;
}

/// 4 pi x^2 c i: bits/s leaving a sphere of radius x when j = c i radially.
inline double sphere_flow(double radius, double speed = speed_of_light, double bits = 1.0) {
  if (!(radius > 0.0)) throw DomainError("sphere radius must be positive");
  return 4.0 * std::numbers::pi * radius * radius * speed * bits;
}

/// Flat triangular patches of an icosphere (20 * 4^level faces) with a
/// uniform radial flow density of magnitude `j_magnitude`, evaluated at each
/// face centroid.
inline std::vector<SurfacePatch> icosphere_patches(double radius, unsigned level,
                                                   double j_magnitude) {
  if (!(radius > 0.0)) throw DomainError("sphere radius must be positive");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
                         {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
                         {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p = normalized(p);
  using Face = std::array<std::size_t, 3>;
  std::vector<Face> faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (unsigned l = 0; l < level; ++l) {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> midpoints;
    auto mid = [&](std::size_t a, std::size_t b) {
      const auto key = std::minmax(a, b);
      const auto it = midpoints.find(key);
      if (it != midpoints.end()) return it->second;
      v.push_back(normalized(v[a] + v[b]));
      midpoints.emplace(key, v.size() - 1);
      return v.size() - 1;
    };
    std::vector<Face> next;
    next.reserve(faces.size() * 4);
    for (const auto& [a, b, c] : faces) {
      const auto ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
      next.push_back({a, ab, ca});
      next.push_back({b, bc, ab});
      next.push_back({c, ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }
  std::vector<SurfacePatch> out;
  out.reserve(faces.size());
  for (const auto& [a, b, c] : faces) {
    const Vec3 pa = radius * v[a], pb = radius * v[b], pc = radius * v[c];
    const Vec3 cr = cross(pb - pa, pc - pa);
    const Vec3 centroid = (1.0 / 3.0) * (pa + pb + pc);
    out.push_back({j_magnitude * normalized(centroid), normalized(cr), 0.5 * norm(cr)});
  }
  return out;
}

/// Patch document: one "patch jx jy jz nx ny nz area" line per patch.
inline std::vector<SurfacePatch> parse_patches(std::string_view doc) {
  std::vector<SurfacePatch> out;
  for (const auto& l : text::logical_lines(doc)) {
    const auto toks = text::split_ws(l.content);
    if (toks.size() != 8 || toks[0] != "patch")
      throw ParseError(l.number, "expected 'patch jx jy jz nx ny nz area'");
    std::array<double, 7> v{};
    for (std::size_t k = 0; k < 7; ++k) {
      try {
        std::size_t used = 0;
        v[k] = std::stod(toks[k + 1], &used);
        if (used != toks[k + 1].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError(l.number, "not a number: '" + toks[k + 1] + "'");
      }
    }
    SurfacePatch p{{v[0], v[1], v[2]}, {v[3], v[4], v[5]}, v[6]};
    try {
      validate(p);
    } catch (const DomainError& e) {
      throw ParseError(l.number, e.what());
    }
    out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lattice continuity

struct Transfer {
  std::size_t from = 0;
  std::size_t to = 0;
  std::int64_t bits = 0;
};

/// Integer bit contents per cell plus the transfers applied on each tick.
/// Regions are named cell sets whose boundary bookkeeping is reported.
struct LatticeFlow {
  std::vector<std::int64_t> cells;
  std::vector<Transfer> transfers;
  std::map<std::string, std::vector<std::size_t>> regions;

  std::int64_t total() const {
    std::int64_t s = 0;
    for (auto c : cells) s += c;
    return s;
  }
};

struct RegionBalance {
  std::int64_t net_outward = 0;   ///< bits leaving minus bits entering
  std::int64_t delta_inside = 0;  ///< change of bits stored inside
  std::int64_t residual = 0;      ///< net_outward + delta_inside; 0 when conserved
};

struct ContinuityReport {
  std::vector<std::int64_t> inflow, outflow, delta, residual;
  std::int64_t total_before = 0;
  std::int64_t total_after = 0;
  std::map<std::string, RegionBalance> regions;

  std::int64_t residual_max() const {
    std::int64_t m = 0;
    for (auto r : residual) m = std::max(m, r < 0 ? -r : r);
    for (const auto& [_, b] : regions) m = std::max(m, b.residual < 0 ? -b.residual : b.residual);
    return m;
  }
  bool conserved() const { return residual_max() == 0 && total_before == total_after; }
};

inline void validate(const LatticeFlow& l) {
  const auto n = l.cells.size();
  std::vector<std::int64_t> sent(n, 0);
  for (auto c : l.cells)
    if (c < 0) throw DomainError("negative cell content");
  for (const auto& t : l.transfers) {
    if (t.from >= n || t.to >= n) throw DomainError("transfer refers to a missing cell");
    if (t.bits < 0) throw DomainError("negative transfer");
    sent[t.from] += t.bits;
  }
  for (std::size_t k = 0; k < n; ++k)
    if (sent[k] > l.cells[k])
      throw DomainError("cell " + std::to_string(k) + " would send " + std::to_string(sent[k]) +
                        " bits but holds " + std::to_string(l.cells[k]));
  for (const auto& [name, idx] : l.regions)
    for (auto k : idx)
      if (k >= n) throw DomainError("region '" + name + "' refers to a missing cell");
}

/// Applies all transfers simultaneously and audits the result: per cell,
/// (rho' - rho) - (in - out) must be 0; per region, outward net transfer must
/// equal the loss of bits inside.
inline std::pair<LatticeFlow, ContinuityReport> lattice_tick(LatticeFlow l) {
  validate(l);
  const auto n = l.cells.size();
  ContinuityReport rep;
  rep.inflow.assign(n, 0);
  rep.outflow.assign(n, 0);
  rep.total_before = l.total();
  const auto before = l.cells;

  for (const auto& t : l.transfers) {
    rep.outflow[t.from] += t.bits;
    rep.inflow[t.to] += t.bits;
    l.cells[t.from] -= t.bits;
    l.cells[t.to] += t.bits;
  }
  rep.total_after = l.total();
  rep.delta.resize(n);
  rep.residual.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    rep.delta[k] = l.cells[k] - before[k];
    rep.residual[k] = rep.delta[k] - (rep.inflow[k] - rep.outflow[k]);
  }
  for (const auto& [name, idx] : l.regions) {
    std::vector<bool> inside(n, false);
    for (auto k : idx) inside[k] = true;
    RegionBalance b;
    for (const auto& t : l.transfers) {
      if (inside[t.from] && !inside[t.to]) b.net_outward += t.bits;
      if (!inside[t.from] && inside[t.to]) b.net_outward -= t.bits;
    }
    for (std::size_t k = 0; k < n; ++k)
      if (inside[k]) b.delta_inside += l.cells[k] - before[k];
    b.residual = b.net_outward + b.delta_inside;
    rep.regions.emplace(name, b);
  }
  return {std::move(l), std::move(rep)};
}

/// Lattice document:
///
///     cells: 5 0
///     transfer 0 1 3
///     region left 0
inline LatticeFlow parse_lattice(std::string_view doc) {
  LatticeFlow l;
  bool have_cells = false;
  auto to_int = [](const std::string& s, std::size_t line) -> std::int64_t {
    try {
      std::size_t used = 0;
      const auto v = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw ParseError(line, "not an integer: '" + s + "'");
    }
  };
  auto to_index = [&](const std::string& s, std::size_t line) -> std::size_t {
    const auto v = to_int(s, line);
    if (v < 0 || static_cast<std::size_t>(v) >= l.cells.size())
      throw ParseError(line, "cell index " + s + " out of range");
    return static_cast<std::size_t>(v);
  };
  for (const auto& ln : text::logical_lines(doc)) {
    std::string_view rest;
    if (text::strip_key(ln.content, "cells", rest)) {
      if (have_cells) throw ParseError(ln.number, "repeated 'cells:' line");
      for (const auto& t : text::split_ws(rest)) {
        const auto v = to_int(t, ln.number);
        if (v < 0) throw ParseError(ln.number, "negative cell content");
        l.cells.push_back(v);
      }
      have_cells = true;
      continue;
    }
    const auto toks = text::split_ws(ln.content);
    if (!have_cells) throw ParseError(ln.number, "'cells:' must come first");
    if (toks[0] == "transfer" && toks.size() == 4) {
      const auto bits = to_int(toks[3], ln.number);
      if (bits < 0) throw ParseError(ln.number, "negative transfer");
      l.transfers.push_back({to_index(toks[1], ln.number), to_index(toks[2], ln.number), bits});
    } else if (toks[0] == "region" && toks.size() >= 3) {
      auto& r = l.regions[toks[1]];
      for (std::size_t k = 2; k < toks.size(); ++k) r.push_back(to_index(toks[k], ln.number));
    } else {
      throw ParseError(ln.number, "malformed line '" + std::string(ln.content) + "'");
    }
  }
  if (!have_cells) throw ParseError(0, "missing 'cells:' line");
  return l;
}

/// Aligned per-cell table plus a "key=value" footer.
inline std::string format_continuity(const LatticeFlow& after, const ContinuityReport& r) {
  std::ostringstream os;
  os << std::setw(6) << "cell" << std::setw(10) << "bits" << std::setw(10) << "inflow"
     << std::setw(10) << "outflow" << std::setw(10) << "delta" << std::setw(10) << "residual"
     << '\n';
  for (std::size_t k = 0; k < after.cells.size(); ++k) {
    os << std::setw(6) << k << std::setw(10) << after.cells[k] << std::setw(10) << r.inflow[k]
       << std::setw(10) << r.outflow[k] << std::setw(10) << r.delta[k] << std::setw(10)
       << r.residual[k] << '\n';
  }
  for (const auto& [name, b] : r.regions) {
    os << "region " << name << ": net_outward=" << b.net_outward
       << " delta_inside=" << b.delta_inside << " residual=" << b.residual << '\n';
  }
  os << "total_bits=" << r.total_after << " residual_max=" << r.residual_max() << '\n';
  return os.str();
}

}  // namespace revdyn
