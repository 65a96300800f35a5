#pragma once

// Half-and-half pair measures (1/2)delta_x + (1/2)delta_y, their convex hull
// (measures with every mass <= 1/2), the constructive pair decomposition that
// witnesses membership in it, and the neighbourhood retraction onto P_f defined
// on its complement.

#include "pfm/measure.hpp"
#include "pfm/pf.hpp"

#include <map>
#include <numeric>
#include <variant>

namespace pfm {

/// True iff every atom has mass <= 1/2. Dirac measures are rejected.
inline bool omega_half_membership(const Measure& mu) {
  if (mu.is_dirac()) throw Error(ErrorKind::DegenerateSupport, "omega_half_membership: Dirac measure");
  return mu.heaviest().mass <= one_half();
}

/// Symmetric weights w_{kl} on unordered pairs k < l; absent pairs weigh 0.
class PairDecomposition {
 public:
  using Pair = std::pair<PointId, PointId>;

  PairDecomposition(SpacePtr space, std::map<Pair, Rational> weights)
      : space_(std::move(space)), weights_(std::move(weights)) {
    for (const auto& [pair, w] : weights_) {
      if (pair.first >= pair.second || !space_->contains(pair.second))
        throw Error(ErrorKind::InvalidArgument, "pair keys must be ordered distinct points of the space");
      if (w <= 0) throw Error(ErrorKind::NegativeMass, "pair weights must be positive");
    }
  }

  const SpacePtr& space() const noexcept { return space_; }
  const std::map<Pair, Rational>& weights() const noexcept { return weights_; }

  Rational weight(PointId a, PointId b) const {
    if (a > b) std::swap(a, b);
    auto it = weights_.find({a, b});
    return it == weights_.end() ? Rational(0) : it->second;
  }

  Rational total() const {
    Rational s(0);
    for (const auto& [pair, w] : weights_) s += w;
    return s;
  }

  /// sum_l w_{kl}; equals 2 m_k for a decomposition of m.
  Rational row_sum(PointId k) const {
    Rational s(0);
    for (const auto& [pair, w] : weights_)
      if (pair.first == k || pair.second == k) s += w;
    return s;
  }

  /// sum w_{kl} ((1/2)delta_k + (1/2)delta_l).
  Measure recompose() const {
    std::vector<Atom> raw;
    for (const auto& [pair, w] : weights_) {
      raw.push_back({pair.first, w / 2});
      raw.push_back({pair.second, w / 2});
    }
    return canonicalize(space_, std::move(raw));
  }

  friend bool operator==(const PairDecomposition& a, const PairDecomposition& b) {
    return a.weights_ == b.weights_ && same_space(a.space_, b.space_);
  }

 private:
  SpacePtr space_;
  std::map<Pair, Rational> weights_;
};

/// Reported when some mass exceeds 1/2.
struct Infeasible {
  PointId point;
  Rational mass;
};

using DecompositionResult = std::variant<PairDecomposition, Infeasible>;

/// Greedy largest-two pairing on the row targets r_k = 2 m_k (total 2).
///
/// Each step pairs the two largest residuals r1 >= r2 (ties by point order) with
/// weight min(r2, S/2 - r3), S the residual total and r3 the third largest. That
/// keeps max r <= S/2, which is exactly feasibility, so the residuals reach zero
/// exactly. Once the largest residual equals S/2 every further step zeroes one
/// atom, hence at most 2 * |supp| steps.
inline DecompositionResult pair_decompose(const Measure& mu) {
  if (mu.is_dirac()) throw Error(ErrorKind::DegenerateSupport, "pair_decompose: Dirac measure");
  const Atom& top = mu.heaviest();
  if (top.mass > one_half()) return Infeasible{top.point, top.mass};

  struct Residual {
    PointId point;
    Rational value;
  };
  std::vector<Residual> residual;
  for (const auto& a : mu.atoms()) residual.push_back({a.point, 2 * a.mass});
  Rational remaining(2);

  std::map<PairDecomposition::Pair, Rational> weights;
  const std::size_t step_limit = 2 * residual.size() + 2;
  for (std::size_t step = 0; remaining != 0; ++step) {
    if (step > step_limit) throw InvariantViolation("pair_decompose did not terminate");
    std::stable_sort(residual.begin(), residual.end(), [](const Residual& a, const Residual& b) {
      if (a.value != b.value) return a.value > b.value;
      return a.point < b.point;
    });
    if (residual.size() < 2 || residual[1].value == 0) throw InvariantViolation("pair_decompose stalled");
    const Rational third = residual.size() > 2 ? residual[2].value : Rational(0);
    const Rational w = std::min(residual[1].value, remaining / 2 - third);
    if (w <= 0) throw InvariantViolation("pair_decompose produced a non-positive weight");
    residual[0].value -= w;
    residual[1].value -= w;
    remaining -= 2 * w;
    auto key = std::minmax(residual[0].point, residual[1].point);
    weights[{key.first, key.second}] += w;
    std::erase_if(residual, [](const Residual& r) { return r.value == 0; });
  }
  return PairDecomposition(mu.space(), std::move(weights));
}

/// The rescaling branch of the retraction: n/(n+1) at the dominant atom and
/// alpha_i / ((n+1)(1 - alpha)) elsewhere, alpha the dominant mass. `masses`
/// is indexed by point and may hold zeros; n is passed explicitly.
inline std::vector<Rational> pf_rescale_branch(const std::vector<Rational>& masses, PointId dominant, std::size_t n) {
  const Rational& alpha = masses.at(dominant);
  if (alpha >= 1) return masses;
  const Rational scale = Rational(1) / (Rational(Integer(n + 1)) * (Rational(1) - alpha));
  std::vector<Rational> out(masses.size());
  for (PointId i = 0; i < masses.size(); ++i) out[i] = (i == dominant) ? pf_threshold(n) : masses[i] * scale;
  return out;
}

/// Both branches: identity when alpha >= n/(n+1), the rescaling branch otherwise.
inline std::vector<Rational> pf_projection(const std::vector<Rational>& masses, PointId dominant, std::size_t n) {
  const Rational& alpha = masses.at(dominant);
  if (alpha <= one_half()) throw InvariantViolation("pf_projection: dominant mass must exceed 1/2");
  if (alpha >= pf_threshold(n)) return masses;
  return pf_rescale_branch(masses, dominant, n);
}

/// Neighbourhood retraction of {max mass > 1/2} onto P_f.
inline Measure retract_to_pf(const Measure& mu) {
  const Atom& top = mu.heaviest();
  if (top.mass <= one_half())
    throw Error(ErrorKind::OutsideDomain, "retract_to_pf: max mass " + to_string(top.mass) + " <= 1/2");
  const auto out = pf_projection(mu.dense(), top.point, mu.support_size());
  std::vector<Atom> raw;
  for (PointId p = 0; p < out.size(); ++p)
    if (out[p] != 0) raw.push_back({p, out[p]});
  return canonicalize(mu.space(), std::move(raw));
}

/// mu lies in the neighbourhood <delta_x; 1/2>: on a discrete space, mu({x}) > 1/2.
inline bool half_neighborhood_contains(const Measure& mu, PointId x) {
  if (!mu.space()->contains(x))
    throw Error(ErrorKind::UnknownPoint, "point index " + std::to_string(x) + " outside space");
  return mu.mass_at(x) > one_half();
}

}  // namespace pfm
