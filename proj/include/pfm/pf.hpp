#pragma once

// The subspace P_f of measures whose support of size n carries an atom of mass
// at least n/(n+1), its retraction onto Dirac measures, the homotopies that
// contract each fibre and deform P_f onto the Dirac measures, and the
// functorial action of point maps.

#include "pfm/measure.hpp"

#include <concepts>
#include <map>
#include <optional>
#include <variant>

namespace pfm {

/// n/(n+1), the dominant-mass threshold for a support of size n.
inline Rational pf_threshold(std::size_t n) { return Rational(Integer(n), Integer(n + 1)); }

struct PfCertificate {
  std::size_t support_size;
  PointId dominant_point;
  Rational dominant_mass;

  friend bool operator==(const PfCertificate&, const PfCertificate&) = default;
};

/// Diagnostic for a measure outside P_f.
struct NotMember {
  Rational max_mass;
  Rational threshold;
};

using PfMembership = std::variant<PfCertificate, NotMember>;

inline PfMembership pf_membership(const Measure& mu) {
  const auto n = mu.support_size();
  const Atom& top = mu.heaviest();
  const Rational threshold = pf_threshold(n);
  if (top.mass < threshold) return NotMember{top.mass, threshold};
  // threshold >= 2/3 > 1/2 for n >= 2, so no second atom can reach it.
  for (const auto& a : mu.atoms())
    if (a.point != top.point && a.mass >= threshold)
      throw InvariantViolation("two atoms above the P_f threshold");
  return PfCertificate{n, top.point, top.mass};
}

inline std::optional<PfCertificate> pf_certificate(const Measure& mu) {
  auto m = pf_membership(mu);
  if (auto* c = std::get_if<PfCertificate>(&m)) return *c;
  return std::nullopt;
}

inline bool in_pf(const Measure& mu) { return std::holds_alternative<PfCertificate>(pf_membership(mu)); }

inline PfCertificate require_pf(const Measure& mu, const char* where) {
  auto m = pf_membership(mu);
  if (auto* c = std::get_if<PfCertificate>(&m)) return *c;
  const auto& nm = std::get<NotMember>(m);
  throw Error(ErrorKind::NotInPf, std::string(where) + ": max mass " + to_string(nm.max_mass) + " < threshold " +
                                      to_string(nm.threshold));
}

/// Dirac measure at the dominant atom.
inline Measure retract_to_dirac(const Measure& mu) {
  const auto cert = require_pf(mu, "retract_to_dirac");
  return dirac(mu.space(), cert.dominant_point);
}

/// (1 - t) * delta_x + t * mu, x the dominant point. Contracts the fibre of mu.
inline Measure fiber_homotopy(const Measure& mu, const Rational& t) {
  const auto cert = require_pf(mu, "fiber_homotopy");
  require_unit_interval(t, "fiber_homotopy: t");
  return convex_combine(t, dirac(mu.space(), cert.dominant_point), mu);
}

/// (1 - t) * mu + t * retract_to_dirac(mu). Fixes Dirac measures for every t.
inline Measure deformation_homotopy(const Measure& mu, const Rational& t) {
  const auto cert = require_pf(mu, "deformation_homotopy");
  require_unit_interval(t, "deformation_homotopy: t");
  return convex_combine(t, mu, dirac(mu.space(), cert.dominant_point));
}

struct FunctorImage {
  Measure measure;
  PfCertificate certificate;
};

/// Pushforward of a P_f measure. The image stays in P_f: support can only
/// shrink and the dominant mass can only grow.
inline FunctorImage functor_map(const Measure& mu, const PointMap& f) {
  require_pf(mu, "functor_map");
  Measure image = pushforward(mu, f);
  auto cert = pf_certificate(image);
  if (!cert) throw InvariantViolation("functor_map left P_f");
  return {std::move(image), *cert};
}

/// A homotopy of point maps sampled on a finite grid of times that includes 0 and 1.
class SampledHomotopy {
 public:
  explicit SampledHomotopy(std::map<Rational, PointMap> samples) : samples_(std::move(samples)) {
    if (!samples_.contains(Rational(0)) || !samples_.contains(Rational(1)))
      throw Error(ErrorKind::InvalidArgument, "a sampled homotopy needs maps at t = 0 and t = 1");
    const auto& first = samples_.begin()->second;
    for (const auto& [t, h] : samples_) {
      require_unit_interval(t, "SampledHomotopy: t");
      if (!same_space(h.source(), first.source()) || !same_space(h.target(), first.target()))
        throw Error(ErrorKind::SpaceMismatch, "SampledHomotopy: maps with different source or target");
    }
  }

  /// Constant family h(., t) = f.
  static SampledHomotopy constant(const PointMap& f) {
    return SampledHomotopy({{Rational(0), f}, {Rational(1), f}});
  }

  const PointMap& operator()(const Rational& t) const {
    auto it = samples_.find(t);
    if (it == samples_.end()) throw Error(ErrorKind::ParameterOutOfRange, "no sample at t = " + to_string(t));
    return it->second;
  }

  const std::map<Rational, PointMap>& samples() const noexcept { return samples_; }

 private:
  std::map<Rational, PointMap> samples_;
};

template <class Family>
concept PointHomotopy = requires(const Family& h, const Rational& t) {
  { h(t) } -> std::convertible_to<PointMap>;
};

/// sum m_i delta_{h(x_i, t)}: the homotopy of measures induced by a homotopy of points.
template <PointHomotopy Family>
Measure homotopy_lift(const Measure& mu, const Family& h, const Rational& t) {
  require_unit_interval(t, "homotopy_lift: t");
  return functor_map(mu, h(t)).measure;
}

}  // namespace pfm
