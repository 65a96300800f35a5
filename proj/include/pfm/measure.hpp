#pragma once

// Finitely supported probability measures over a finite metric space, kept in a
// canonical form (distinct atoms, strictly positive exact masses, sorted by
// point order) so that equality of measures is structural equality.

#include "pfm/error.hpp"
#include "pfm/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace pfm {

using PointId = std::size_t;
using PointSet = std::vector<PointId>;

class FiniteSpace {
 public:
  /// Validates distinct names, a square metric, zero exactly on the diagonal,
  /// symmetry, positivity off the diagonal and the triangle inequality.
  FiniteSpace(std::vector<std::string> points, std::vector<std::vector<Rational>> metric,
              std::string id = "X")
      : id_(std::move(id)), points_(std::move(points)), metric_(std::move(metric)) {
    const auto n = points_.size();
    if (n == 0) throw Error(ErrorKind::InvalidSpace, "a space needs at least one point");
    for (PointId i = 0; i < n; ++i) {
      if (!index_.emplace(points_[i], i).second)
        throw Error(ErrorKind::InvalidSpace, "duplicate point '" + points_[i] + "'");
    }
    if (metric_.size() != n) throw Error(ErrorKind::InvalidSpace, "metric must be square");
    for (const auto& row : metric_)
      if (row.size() != n) throw Error(ErrorKind::InvalidSpace, "metric must be square");
    for (PointId i = 0; i < n; ++i) {
      if (metric_[i][i] != 0) throw Error(ErrorKind::InvalidSpace, "nonzero diagonal at " + points_[i]);
      for (PointId j = 0; j < n; ++j) {
        if (i != j && metric_[i][j] <= 0)
          throw Error(ErrorKind::InvalidSpace, "distinct points at distance <= 0: " + points_[i] + "," + points_[j]);
        if (metric_[i][j] != metric_[j][i])
          throw Error(ErrorKind::InvalidSpace, "asymmetric metric at " + points_[i] + "," + points_[j]);
      }
    }
    for (PointId i = 0; i < n; ++i)
      for (PointId j = 0; j < n; ++j)
        for (PointId k = 0; k < n; ++k)
          if (metric_[i][k] > metric_[i][j] + metric_[j][k])
            throw Error(ErrorKind::InvalidSpace,
                        "triangle inequality fails for " + points_[i] + "," + points_[j] + "," + points_[k]);
  }

  /// Uniform discrete metric: every pair of distinct points at distance 1.
  static std::shared_ptr<const FiniteSpace> discrete(std::vector<std::string> points, std::string id = "X") {
    const auto n = points.size();
    std::vector<std::vector<Rational>> metric(n, std::vector<Rational>(n, Rational(1)));
    for (std::size_t i = 0; i < n; ++i) metric[i][i] = 0;
    return std::make_shared<const FiniteSpace>(std::move(points), std::move(metric), std::move(id));
  }

  std::size_t size() const noexcept { return points_.size(); }
  const std::string& id() const noexcept { return id_; }
  const std::string& name(PointId p) const { return points_.at(p); }
  const std::vector<std::string>& points() const noexcept { return points_; }
  const std::vector<std::vector<Rational>>& metric() const noexcept { return metric_; }
  const Rational& distance(PointId a, PointId b) const { return metric_.at(a).at(b); }

  std::optional<PointId> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  PointId index_of(const std::string& name) const {
    if (auto p = find(name)) return *p;
    throw Error(ErrorKind::UnknownPoint, "'" + name + "' is not a point of space " + id_);
  }

  bool contains(PointId p) const noexcept { return p < points_.size(); }

  friend bool operator==(const FiniteSpace& a, const FiniteSpace& b) {
    return a.points_ == b.points_ && a.metric_ == b.metric_;
  }

 private:
  std::string id_;
  std::vector<std::string> points_;
  std::vector<std::vector<Rational>> metric_;
  std::unordered_map<std::string, PointId> index_;
};

using SpacePtr = std::shared_ptr<const FiniteSpace>;

inline bool same_space(const SpacePtr& a, const SpacePtr& b) {
  return a == b || (a && b && *a == *b);
}

inline void require_same_space(const SpacePtr& a, const SpacePtr& b, const char* where) {
  if (!same_space(a, b)) throw Error(ErrorKind::SpaceMismatch, where);
}

/// Membership mask of `set` over `space`; rejects indices outside the space.
inline std::vector<char> membership_mask(const FiniteSpace& space, std::span<const PointId> set) {
  std::vector<char> mask(space.size(), 0);
  for (PointId p : set) {
    if (!space.contains(p))
      throw Error(ErrorKind::UnknownPoint, "point index " + std::to_string(p) + " outside space " + space.id());
    mask[p] = 1;
  }
  return mask;
}

struct Atom {
  PointId point;
  Rational mass;

  friend bool operator==(const Atom&, const Atom&) = default;
};

class Measure;
inline Measure canonicalize(SpacePtr space, std::vector<Atom> raw);

class Measure {
 public:
  const SpacePtr& space() const noexcept { return space_; }
  std::span<const Atom> atoms() const noexcept { return atoms_; }
  std::size_t support_size() const noexcept { return atoms_.size(); }
  bool is_dirac() const noexcept { return atoms_.size() == 1; }

  Rational mass_at(PointId p) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), p,
                               [](const Atom& a, PointId q) { return a.point < q; });
    return (it != atoms_.end() && it->point == p) ? it->mass : Rational(0);
  }

  bool in_support(PointId p) const { return mass_at(p) != 0; }

  /// Atom of largest mass; the earliest in point order on ties.
  const Atom& heaviest() const {
    return *std::max_element(atoms_.begin(), atoms_.end(),
                             [](const Atom& a, const Atom& b) { return a.mass < b.mass; });
  }

  /// Masses indexed by point, zeros included.
  std::vector<Rational> dense() const {
    std::vector<Rational> out(space_->size(), Rational(0));
    for (const auto& a : atoms_) out[a.point] = a.mass;
    return out;
  }

  friend bool operator==(const Measure& a, const Measure& b) {
    return a.atoms_ == b.atoms_ && same_space(a.space_, b.space_);
  }

  /// Lexicographic order on atoms; only meaningful within one space.
  friend bool operator<(const Measure& a, const Measure& b) {
    return std::lexicographical_compare(a.atoms_.begin(), a.atoms_.end(), b.atoms_.begin(), b.atoms_.end(),
                                        [](const Atom& x, const Atom& y) {
                                          if (x.point != y.point) return x.point < y.point;
                                          return x.mass < y.mass;
                                        });
  }

 private:
  friend Measure canonicalize(SpacePtr, std::vector<Atom>);
  Measure(SpacePtr space, std::vector<Atom> atoms) : space_(std::move(space)), atoms_(std::move(atoms)) {}

  SpacePtr space_;
  std::vector<Atom> atoms_;
};

/// Merges duplicate points, drops zero masses and sorts by point order.
inline Measure canonicalize(SpacePtr space, std::vector<Atom> raw) {
  if (!space) throw Error(ErrorKind::InvalidSpace, "null space");
  Rational total(0);
  for (const auto& a : raw) {
    if (!space->contains(a.point))
      throw Error(ErrorKind::UnknownPoint, "point index " + std::to_string(a.point) + " outside space " + space->id());
    if (a.mass < 0) throw Error(ErrorKind::NegativeMass, "mass " + to_string(a.mass) + " at " + space->name(a.point));
    total += a.mass;
  }
  if (total != 1) throw Error(ErrorKind::MassSumViolation, "masses sum to " + to_string(total));

  std::stable_sort(raw.begin(), raw.end(), [](const Atom& a, const Atom& b) { return a.point < b.point; });
  std::vector<Atom> atoms;
  atoms.reserve(raw.size());
  for (auto& a : raw) {
    if (!atoms.empty() && atoms.back().point == a.point)
      atoms.back().mass += a.mass;
    else
      atoms.push_back(std::move(a));
  }
  std::erase_if(atoms, [](const Atom& a) { return a.mass == 0; });
  return Measure(std::move(space), std::move(atoms));
}

/// Named-point variant used by parsers and tests.
inline Measure canonicalize(const SpacePtr& space, const std::vector<std::pair<std::string, Rational>>& raw) {
  std::vector<Atom> atoms;
  atoms.reserve(raw.size());
  for (const auto& [name, mass] : raw) atoms.push_back({space->index_of(name), mass});
  return canonicalize(space, std::move(atoms));
}

inline Measure dirac(const SpacePtr& space, PointId p) { return canonicalize(space, {{p, Rational(1)}}); }

inline void require_unit_interval(const Rational& t, const char* what) {
  if (t < 0 || t > 1) throw Error(ErrorKind::ParameterOutOfRange, std::string(what) + " = " + to_string(t) + " outside [0,1]");
}

/// (1 - t) * mu + t * nu, atomwise.
inline Measure convex_combine(const Rational& t, const Measure& mu, const Measure& nu) {
  require_same_space(mu.space(), nu.space(), "convex_combine: measures over different spaces");
  require_unit_interval(t, "convex_combine: t");
  const Rational s = Rational(1) - t;
  std::vector<Atom> raw;
  raw.reserve(mu.support_size() + nu.support_size());
  for (const auto& a : mu.atoms()) raw.push_back({a.point, s * a.mass});
  for (const auto& a : nu.atoms()) raw.push_back({a.point, t * a.mass});
  return canonicalize(mu.space(), std::move(raw));
}

inline Rational mass_of_set(const Measure& mu, std::span<const PointId> set) {
  const auto mask = membership_mask(*mu.space(), set);
  Rational total(0);
  for (const auto& a : mu.atoms())
    if (mask[a.point]) total += a.mass;
  return total;
}

/// Total map between the points of two finite spaces.
class PointMap {
 public:
  PointMap(SpacePtr source, SpacePtr target, std::vector<PointId> table)
      : source_(std::move(source)), target_(std::move(target)), table_(std::move(table)) {
    if (!source_ || !target_) throw Error(ErrorKind::InvalidPointMap, "null space");
    if (table_.size() != source_->size())
      throw Error(ErrorKind::InvalidPointMap, "table must assign an image to every source point");
    for (PointId img : table_)
      if (!target_->contains(img)) throw Error(ErrorKind::InvalidPointMap, "image outside target space");
  }

  static PointMap identity(const SpacePtr& space) {
    std::vector<PointId> table(space->size());
    for (PointId p = 0; p < table.size(); ++p) table[p] = p;
    return PointMap(space, space, std::move(table));
  }

  const SpacePtr& source() const noexcept { return source_; }
  const SpacePtr& target() const noexcept { return target_; }
  const std::vector<PointId>& table() const noexcept { return table_; }
  PointId operator()(PointId p) const { return table_.at(p); }

  /// Points of the source mapped into `set` (a subset of the target).
  PointSet preimage(std::span<const PointId> set) const {
    const auto mask = membership_mask(*target_, set);
    PointSet out;
    for (PointId p = 0; p < table_.size(); ++p)
      if (mask[table_[p]]) out.push_back(p);
    return out;
  }

  friend bool operator==(const PointMap& a, const PointMap& b) {
    return a.table_ == b.table_ && same_space(a.source_, b.source_) && same_space(a.target_, b.target_);
  }

 private:
  SpacePtr source_;
  SpacePtr target_;
  std::vector<PointId> table_;
};

inline Measure pushforward(const Measure& mu, const PointMap& f) {
  require_same_space(mu.space(), f.source(), "pushforward: measure is not over the map's source");
  std::vector<Atom> raw;
  raw.reserve(mu.support_size());
  for (const auto& a : mu.atoms()) raw.push_back({f(a.point), a.mass});
  return canonicalize(f.target(), std::move(raw));
}

}  // namespace pfm
