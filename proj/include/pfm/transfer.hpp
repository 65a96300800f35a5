#pragma once

// Transport of a neighbourhood retraction r: U -> X of the ground space to a
// neighbourhood retraction of P_f: first move all mass outside U onto the
// dominant atom, then push the result forward along r.

#include "pfm/measure.hpp"
#include "pfm/pf.hpp"

#include <map>

namespace pfm {

/// X inside U inside Y, with a retraction U -> X that fixes X.
class EmbeddedSubspace {
 public:
  EmbeddedSubspace(SpacePtr ambient, PointSet subspace, PointSet neighborhood, std::map<PointId, PointId> retraction)
      : ambient_(std::move(ambient)),
        subspace_(std::move(subspace)),
        neighborhood_(std::move(neighborhood)),
        retraction_(std::move(retraction)) {
    std::sort(subspace_.begin(), subspace_.end());
    std::sort(neighborhood_.begin(), neighborhood_.end());
    const auto in_x = membership_mask(*ambient_, subspace_);
    const auto in_u = membership_mask(*ambient_, neighborhood_);
    if (subspace_.empty()) throw Error(ErrorKind::InvalidEmbedding, "empty subspace");
    for (PointId x : subspace_) {
      if (!in_u[x]) throw Error(ErrorKind::InvalidEmbedding, "subspace point " + ambient_->name(x) + " outside U");
      auto it = retraction_.find(x);
      if (it == retraction_.end())
        retraction_[x] = x;
      else if (it->second != x)
        throw Error(ErrorKind::InvalidEmbedding, "retraction moves subspace point " + ambient_->name(x));
    }
    for (PointId u : neighborhood_) {
      auto it = retraction_.find(u);
      if (it == retraction_.end())
        throw Error(ErrorKind::InvalidEmbedding, "retraction undefined at " + ambient_->name(u));
      if (!ambient_->contains(it->second) || !in_x[it->second])
        throw Error(ErrorKind::InvalidEmbedding, "retraction sends " + ambient_->name(u) + " outside the subspace");
    }
    for (const auto& [from, to] : retraction_)
      if (!ambient_->contains(from) || !in_u[from])
        throw Error(ErrorKind::InvalidEmbedding, "retraction defined outside U");

    std::vector<PointId> table(ambient_->size());
    for (PointId p = 0; p < table.size(); ++p) {
      auto it = retraction_.find(p);
      table[p] = it == retraction_.end() ? p : it->second;
    }
    extended_ = PointMap(ambient_, ambient_, std::move(table));
  }

  const SpacePtr& ambient() const noexcept { return ambient_; }
  const PointSet& subspace() const noexcept { return subspace_; }
  const PointSet& neighborhood() const noexcept { return neighborhood_; }
  const std::map<PointId, PointId>& retraction() const noexcept { return retraction_; }

  /// The retraction on U, extended by the identity outside U.
  const PointMap& extended_retraction() const noexcept { return *extended_; }

  bool supported_in_subspace(const Measure& mu) const {
    const auto in_x = membership_mask(*ambient_, subspace_);
    for (const auto& a : mu.atoms())
      if (!in_x[a.point]) return false;
    return true;
  }

 private:
  SpacePtr ambient_;
  PointSet subspace_;
  PointSet neighborhood_;
  std::map<PointId, PointId> retraction_;
  std::optional<PointMap> extended_;
};

/// (n_dom + nu(Y \ U)) delta_dom + sum over other atoms in U of n_i delta_i.
inline Measure mass_transfer_into(const Measure& nu, std::span<const PointId> neighborhood) {
  const auto cert = require_pf(nu, "mass_transfer_into");
  const auto in_u = membership_mask(*nu.space(), neighborhood);
  Rational inside(0);
  for (const auto& a : nu.atoms())
    if (in_u[a.point]) inside += a.mass;
  if (inside <= one_half())
    throw Error(ErrorKind::OutsideNeighborhood, "mass_transfer_into: nu(U) = " + to_string(inside) + " <= 1/2");
  // nu(U) > 1/2 forces the dominant atom into U: otherwise nu(U) <= 1/(n+1) <= 1/2.
  if (!in_u[cert.dominant_point]) throw InvariantViolation("mass_transfer_into: dominant atom outside U");

  std::vector<Atom> raw;
  Rational outside(0);
  for (const auto& a : nu.atoms()) {
    if (!in_u[a.point])
      outside += a.mass;
    else
      raw.push_back(a);
  }
  raw.push_back({cert.dominant_point, outside});
  return canonicalize(nu.space(), std::move(raw));
}

/// R o r_U: transfer into U, then push forward along the retraction U -> X.
inline Measure transfer_retract(const Measure& nu, const EmbeddedSubspace& emb) {
  require_same_space(nu.space(), emb.ambient(), "transfer_retract: measure is not over the ambient space");
  return pushforward(mass_transfer_into(nu, emb.neighborhood()), emb.extended_retraction());
}

}  // namespace pfm
