#pragma once

// Exhaustive lattice enumerations and seeded random draws of measures with
// bounded common denominator. Everything here is deterministic given the seed:
// only raw std::mt19937_64 output is used, never the implementation-defined
// standard distributions.

#include "pfm/measure.hpp"
#include "pfm/pf.hpp"

#include <functional>
#include <limits>
#include <random>
#include <set>

namespace pfm {

using Rng = std::mt19937_64;

/// Uniform index in [0, n).
inline std::size_t draw_index(Rng& rng, std::size_t n) {
  if (n == 0) throw std::invalid_argument("draw_index: empty range");
  return static_cast<std::size_t>(rng() % n);
}

/// Uniform integer in [lo, hi].
inline long long draw_between(Rng& rng, long long lo, long long hi) {
  return lo + static_cast<long long>(draw_index(rng, static_cast<std::size_t>(hi - lo + 1)));
}

/// Calls visit(parts) for every composition of `total` into parts.size() nonnegative integers.
inline void for_each_composition(unsigned total, std::size_t parts,
                                 const std::function<void(const std::vector<unsigned>&)>& visit) {
  if (parts == 0) return;
  std::vector<unsigned> cur(parts, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t idx, unsigned left) {
    if (idx + 1 == parts) {
      cur[idx] = left;
      visit(cur);
      return;
    }
    for (unsigned v = left + 1; v-- > 0;) {
      cur[idx] = v;
      rec(idx + 1, left - v);
    }
  };
  rec(0, total);
}

/// Every measure on `space` whose masses are multiples of 1/d for some d <= max_denominator
/// and whose support has at most `max_atoms` points. Sorted, without duplicates.
inline std::vector<Measure> enumerate_measures(const SpacePtr& space, unsigned max_denominator,
                                               std::size_t max_atoms = std::numeric_limits<std::size_t>::max()) {
  std::set<Measure> seen;
  for (unsigned d = 1; d <= max_denominator; ++d) {
    for_each_composition(d, space->size(), [&](const std::vector<unsigned>& parts) {
      std::vector<Atom> raw;
      for (PointId p = 0; p < parts.size(); ++p)
        if (parts[p] != 0) raw.push_back({p, Rational(parts[p], d)});
      if (raw.size() > max_atoms) return;
      seen.insert(canonicalize(space, std::move(raw)));
    });
  }
  return {seen.begin(), seen.end()};
}

inline std::vector<Measure> enumerate_pf(const SpacePtr& space, unsigned max_denominator) {
  std::vector<Measure> out;
  for (auto& mu : enumerate_measures(space, max_denominator))
    if (in_pf(mu)) out.push_back(std::move(mu));
  return out;
}

/// All nonempty subsets of the space, by bitmask order.
inline std::vector<PointSet> enumerate_subsets(std::size_t n, bool include_empty = false) {
  std::vector<PointSet> out;
  for (std::size_t mask = include_empty ? 0 : 1; mask < (std::size_t{1} << n); ++mask) {
    PointSet s;
    for (PointId p = 0; p < n; ++p)
      if (mask & (std::size_t{1} << p)) s.push_back(p);
    out.push_back(std::move(s));
  }
  return out;
}

/// Every map between the two spaces (target size ^ source size of them).
inline std::vector<PointMap> enumerate_point_maps(const SpacePtr& source, const SpacePtr& target) {
  std::vector<PointMap> out;
  std::vector<PointId> table(source->size(), 0);
  for (;;) {
    out.emplace_back(source, target, table);
    std::size_t i = 0;
    while (i < table.size() && ++table[i] == target->size()) table[i++] = 0;
    if (i == table.size()) break;
  }
  return out;
}

/// `count` distinct points, uniformly.
inline PointSet draw_points(Rng& rng, std::size_t n, std::size_t count) {
  std::vector<PointId> all(n);
  for (PointId p = 0; p < n; ++p) all[p] = p;
  for (std::size_t i = 0; i < count; ++i) std::swap(all[i], all[i + draw_index(rng, n - i)]);
  all.resize(count);
  return all;
}

/// Uniform composition of `total` into `parts` positive integers (total >= parts).
inline std::vector<long long> draw_positive_composition(Rng& rng, long long total, std::size_t parts) {
  // Choose parts-1 cut points among total-1 gaps.
  const auto gaps = draw_points(rng, static_cast<std::size_t>(total - 1), parts - 1);
  std::vector<long long> cuts(gaps.begin(), gaps.end());
  std::sort(cuts.begin(), cuts.end());
  std::vector<long long> out;
  long long prev = 0;
  for (auto c : cuts) {
    out.push_back(c + 1 - prev);
    prev = c + 1;
  }
  out.push_back(total - prev);
  return out;
}

/// Support of `support` points (drawn), common denominator `den`, the first drawn point
/// carrying numerator `dominant` and the rest positive. Requires den - dominant >= support - 1.
inline Measure draw_measure_with_dominant(Rng& rng, const SpacePtr& space, std::size_t support, long long den,
                                          long long dominant) {
  const auto pts = draw_points(rng, space->size(), support);
  std::vector<Atom> raw{{pts[0], Rational(dominant, den)}};
  if (support > 1) {
    const auto rest = draw_positive_composition(rng, den - dominant, support - 1);
    for (std::size_t i = 1; i < support; ++i) raw.push_back({pts[i], Rational(rest[i - 1], den)});
  }
  return canonicalize(space, std::move(raw));
}

/// Random measure in P_f whose dominant mass is at least (n+extra)/(n+extra+1).
/// extra = 1 leaves room to add one more atom without leaving P_f.
inline Measure draw_pf_measure(Rng& rng, const SpacePtr& space, std::size_t min_support = 1, std::size_t extra = 0,
                               std::size_t max_support = std::numeric_limits<std::size_t>::max()) {
  const std::size_t hi = std::min(space->size(), max_support);
  const std::size_t k = static_cast<std::size_t>(draw_between(rng, static_cast<long long>(min_support),
                                                              static_cast<long long>(std::max(min_support, hi))));
  if (k == 1) return dirac(space, draw_index(rng, space->size()));
  const long long m = static_cast<long long>(k + extra);
  // den = (m+1) q; dominant >= m q, leaving at least k-1 units for the other atoms.
  const long long q = draw_between(rng, static_cast<long long>(k - 1), static_cast<long long>(k + 3));
  const long long den = (m + 1) * q;
  const long long dom = draw_between(rng, m * q, den - static_cast<long long>(k - 1));
  return draw_measure_with_dominant(rng, space, k, den, dom);
}

/// Random measure with `support` atoms (>= 2) and a unique atom of mass > 1/2.
inline Measure draw_majority_measure(Rng& rng, const SpacePtr& space, std::size_t support,
                                     long long max_denominator = 24) {
  const auto k = static_cast<long long>(support);
  const long long lo = std::max<long long>(2 * k, 4);
  const long long den = draw_between(rng, lo, std::max(lo, max_denominator));
  const long long dom = draw_between(rng, den / 2 + 1, den - (k - 1));
  return draw_measure_with_dominant(rng, space, support, den, dom);
}

inline Measure draw_majority_measure(Rng& rng, const SpacePtr& space, long long max_denominator = 24) {
  const auto k = static_cast<std::size_t>(draw_between(rng, 2, static_cast<long long>(space->size())));
  return draw_majority_measure(rng, space, k, max_denominator);
}

}  // namespace pfm
