#pragma once

// Weak-topology base neighbourhoods and the empirical probes that exercise the
// continuity, openness and closure statements about P_f at desk scale. Distances
// between measures are Wasserstein-1, which metrizes weak convergence on a
// finite metric space.

#include "pfm/enumerate.hpp"
#include "pfm/measure.hpp"
#include "pfm/omega.hpp"
#include "pfm/pf.hpp"
#include "pfm/transfer.hpp"
#include "pfm/transport.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace pfm {

/// <center; U_1, ..., U_n; epsilon> = { mu : mu(U_i) - center(U_i) > -epsilon for all i }.
class NeighborhoodSpec {
 public:
  NeighborhoodSpec(Measure center, std::vector<PointSet> sets, Rational epsilon)
      : center_(std::move(center)), sets_(std::move(sets)), epsilon_(std::move(epsilon)) {
    if (epsilon_ <= 0) throw Error(ErrorKind::ParameterOutOfRange, "neighbourhood epsilon must be positive");
    for (const auto& s : sets_) membership_mask(*center_.space(), s);
  }

  const Measure& center() const noexcept { return center_; }
  const std::vector<PointSet>& sets() const noexcept { return sets_; }
  const Rational& epsilon() const noexcept { return epsilon_; }

 private:
  Measure center_;
  std::vector<PointSet> sets_;
  Rational epsilon_;
};

inline bool weak_nbhd_contains(const Measure& mu, const NeighborhoodSpec& spec) {
  require_same_space(mu.space(), spec.center().space(), "weak_nbhd_contains: measure and centre over different spaces");
  for (const auto& u : spec.sets())
    if (mass_of_set(mu, u) - mass_of_set(spec.center(), u) <= -spec.epsilon()) return false;
  return true;
}

/// mu0 with its dominant atom moved to x. Lies in every <mu0; V; eps> and retracts to delta_x.
inline Measure openness_witness(const Measure& mu0, PointId x, std::span<const PointId> v) {
  const auto cert = require_pf(mu0, "openness_witness");
  const auto in_v = membership_mask(*mu0.space(), v);
  if (!mu0.space()->contains(x) || !in_v[x]) throw Error(ErrorKind::InvalidArgument, "openness_witness: x not in V");
  if (!in_v[cert.dominant_point])
    throw Error(ErrorKind::InvalidArgument, "openness_witness: dominant point of mu0 not in V");

  std::vector<Atom> raw;
  for (const auto& a : mu0.atoms()) raw.push_back({a.point == cert.dominant_point ? x : a.point, a.mass});
  Measure witness = canonicalize(mu0.space(), std::move(raw));

  auto wc = pf_certificate(witness);
  if (!wc || wc->dominant_point != x) throw Error(ErrorKind::WitnessInvalid, "witness does not retract to delta_x");
  if (mass_of_set(witness, v) < mass_of_set(mu0, v)) throw Error(ErrorKind::WitnessInvalid, "witness lost mass on V");
  return witness;
}

enum class ProbeKind { Continuity, Openness, Closure, Seam };
enum class Verdict { Pass, Fail, Informational };

constexpr std::string_view probe_kind_name(ProbeKind k) {
  switch (k) {
    case ProbeKind::Continuity: return "continuity";
    case ProbeKind::Openness: return "openness";
    case ProbeKind::Closure: return "closure";
    case ProbeKind::Seam: return "seam";
  }
  return "?";
}

constexpr std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Informational: return "informational";
  }
  return "?";
}

struct Bucket {
  Rational dist;   // largest input distance seen in the bucket
  Rational worst;  // largest output distance seen in the bucket
  std::size_t pairs = 0;
};

/// Named measures plus an optional exact gap.
struct Counterexample {
  std::string label;
  std::vector<std::pair<std::string, Measure>> measures;
  std::optional<Rational> gap;
};

struct ProbeReport {
  ProbeKind kind = ProbeKind::Continuity;
  std::string subject;
  std::string scheme;
  std::size_t samples = 0;
  std::vector<Bucket> buckets;
  std::optional<Rational> gap;
  std::vector<Counterexample> counterexamples;
  Verdict verdict = Verdict::Pass;
  std::vector<std::string> notes;
};

enum class ProbeMap { RetractToDirac, RetractToPf, MassTransferInto };
enum class Scheme { SupportPreserving, SupportDegenerate };

constexpr std::string_view probe_map_name(ProbeMap m) {
  switch (m) {
    case ProbeMap::RetractToDirac: return "retract_to_dirac";
    case ProbeMap::RetractToPf: return "retract_to_pf";
    case ProbeMap::MassTransferInto: return "mass_transfer_into";
  }
  return "?";
}

inline ProbeMap parse_probe_map(std::string_view name) {
  for (auto m : {ProbeMap::RetractToDirac, ProbeMap::RetractToPf, ProbeMap::MassTransferInto})
    if (probe_map_name(m) == name) return m;
  throw Error(ErrorKind::UnknownMap, "no continuity probe for map '" + std::string(name) + "'");
}

constexpr std::string_view scheme_name(Scheme s) {
  return s == Scheme::SupportPreserving ? "support-preserving" : "support-degenerate";
}

inline Scheme parse_scheme(std::string_view name) {
  if (name == "support-preserving") return Scheme::SupportPreserving;
  if (name == "support-degenerate") return Scheme::SupportDegenerate;
  throw Error(ErrorKind::InvalidArgument, "unknown scheme '" + std::string(name) + "'");
}

namespace detail {

/// A probed map together with whatever fixed data it needs (U for the transfer map).
struct ProbedMap {
  ProbeMap map;
  PointSet neighborhood;

  bool in_domain(const Measure& mu) const {
    switch (map) {
      case ProbeMap::RetractToDirac: return in_pf(mu);
      case ProbeMap::RetractToPf: return mu.heaviest().mass > one_half();
      case ProbeMap::MassTransferInto: return in_pf(mu) && mass_of_set(mu, neighborhood) > one_half();
    }
    return false;
  }

  Measure operator()(const Measure& mu) const {
    switch (map) {
      case ProbeMap::RetractToDirac: return retract_to_dirac(mu);
      case ProbeMap::RetractToPf: return retract_to_pf(mu);
      case ProbeMap::MassTransferInto: return mass_transfer_into(mu, neighborhood);
    }
    throw InvariantViolation("unreachable");
  }

  /// Limit of the map along limit + eps (delta_fresh - delta_donor) as eps -> 0+, evaluated in
  /// closed form: the sampled measures keep `fresh` in their support, so each formula is
  /// evaluated with that atom present at mass zero.
  Measure one_sided_limit(const Measure& limit, PointId fresh) const {
    switch (map) {
      case ProbeMap::RetractToDirac:
      case ProbeMap::MassTransferInto: return (*this)(limit);
      case ProbeMap::RetractToPf: {
        auto masses = limit.dense();
        if (masses[fresh] != 0) throw InvariantViolation("one_sided_limit: fresh point already in support");
        const auto out = pf_projection(masses, limit.heaviest().point, limit.support_size() + 1);
        std::vector<Atom> raw;
        for (PointId p = 0; p < out.size(); ++p)
          if (out[p] != 0) raw.push_back({p, out[p]});
        return canonicalize(limit.space(), std::move(raw));
      }
    }
    throw InvariantViolation("unreachable");
  }
};

inline Measure move_mass(const Measure& mu, PointId from, PointId to, const Rational& amount) {
  auto dense = mu.dense();
  dense[from] -= amount;
  dense[to] += amount;
  std::vector<Atom> raw;
  for (PointId p = 0; p < dense.size(); ++p)
    if (dense[p] != 0) raw.push_back({p, dense[p]});
  return canonicalize(mu.space(), std::move(raw));
}

/// Verdict for a modulus profile: the finest bucket must be zero or at most a quarter
/// of the largest bucket.
inline bool modulus_shrinks(const std::vector<Bucket>& buckets) {
  std::optional<Rational> finest;
  Rational largest(0);
  for (const auto& b : buckets) {
    if (b.pairs == 0) continue;
    finest = b.worst;
    largest = std::max(largest, b.worst);
  }
  if (!finest) return true;
  return *finest == 0 || *finest * 4 <= largest;
}

struct Trajectory {
  Measure base;
  PointId donor;
  PointId recipient;
  ProbedMap f;
  std::string label;
};

}  // namespace detail

struct ContinuityOptions {
  std::size_t buckets = 8;
  std::size_t max_counterexamples = 8;
};

/// Samples pairs at geometrically shrinking Wasserstein distances and records, per scale,
/// the largest distance between the images. Never returns Verdict::Fail: a measured
/// discontinuity is reported as informational.
inline ProbeReport continuity_probe(ProbeMap map, const SpacePtr& space, std::size_t samples, Scheme scheme,
                                    std::uint64_t seed, const ContinuityOptions& opts = {}) {
  if (samples == 0) throw Error(ErrorKind::InvalidArgument, "continuity_probe: samples must be >= 1");
  ProbeReport report;
  report.kind = (map == ProbeMap::RetractToPf && scheme == Scheme::SupportPreserving) ? ProbeKind::Seam
                                                                                      : ProbeKind::Continuity;
  report.subject = std::string(probe_map_name(map));
  report.scheme = std::string(scheme_name(scheme));
  report.buckets.assign(opts.buckets, Bucket{Rational(0), Rational(0), 0});

  const std::size_t n = space->size();
  if (n < 2) {
    report.notes.push_back("space has a single point: every measure is Dirac, nothing to perturb");
    return report;
  }
  Rng rng(seed);

  auto draw_map = [&](const Measure& base) {
    detail::ProbedMap f{map, {}};
    if (map == ProbeMap::MassTransferInto) {
      // Any U holding the dominant atom satisfies nu(U) >= 2/3 > 1/2.
      const PointId dom = pf_certificate(base)->dominant_point;
      f.neighborhood.push_back(dom);
      for (PointId p = 0; p < n; ++p)
        if (p != dom && draw_index(rng, 2) == 1) f.neighborhood.push_back(p);
      std::sort(f.neighborhood.begin(), f.neighborhood.end());
    }
    return f;
  };

  auto pick_other = [&](const Measure& mu, PointId not_this) {
    std::vector<PointId> others;
    for (const auto& a : mu.atoms())
      if (a.point != not_this) others.push_back(a.point);
    return others[draw_index(rng, others.size())];
  };

  if (scheme == Scheme::SupportPreserving) {
    std::size_t seam_checked = 0;
    std::optional<Counterexample> finest_worst;  // gap field holds the output distance
    for (std::size_t s = 0; s < samples; ++s) {
      Measure base = dirac(space, 0);
      PointId donor = 0, recipient = 0;
      if (map == ProbeMap::RetractToPf) {
        // Base exactly on the seam: dominant mass k/(k+1) with support k.
        const auto k = static_cast<std::size_t>(draw_between(rng, 2, static_cast<long long>(n)));
        const long long q = draw_between(rng, static_cast<long long>(k - 1), static_cast<long long>(k + 3));
        base = draw_measure_with_dominant(rng, space, k, static_cast<long long>(k + 1) * q,
                                          static_cast<long long>(k) * q);
        const PointId dom = base.heaviest().point;
        if (pf_rescale_branch(base.dense(), dom, k) != base.dense())
          throw InvariantViolation("seam identity fails: (n+1)(1 - n/(n+1)) != 1");
        ++seam_checked;
        const PointId other = pick_other(base, dom);
        if (draw_index(rng, 2) == 0) {
          donor = other, recipient = dom;
        } else {
          donor = dom, recipient = other;
        }
      } else {
        base = draw_pf_measure(rng, space, 2);
        const auto& atoms = base.atoms();
        donor = atoms[draw_index(rng, atoms.size())].point;
        recipient = pick_other(base, donor);
      }
      const auto f = draw_map(base);
      const Measure image = f(base);
      const Rational donor_mass = base.mass_at(donor);

      for (std::size_t k = 0; k < opts.buckets; ++k) {
        const Measure moved = detail::move_mass(base, donor, recipient, donor_mass * pow2_inverse(unsigned(k + 2)));
        if (!f.in_domain(moved)) continue;
        ++report.samples;
        auto& b = report.buckets[k];
        const Rational din = wasserstein1(base, moved);
        const Rational dout = wasserstein1(image, f(moved));
        b.dist = std::max(b.dist, din);
        if (b.pairs == 0 || dout > b.worst) b.worst = dout;
        ++b.pairs;
        if (k + 1 == opts.buckets && dout != 0 && (!finest_worst || dout > finest_worst->gap)) {
          finest_worst = Counterexample{
              "finest-scale pair", {{"mu", base}, {"mu_prime", moved}, {"f_mu", image}, {"f_mu_prime", f(moved)}}, dout};
        }
      }
    }
    if (map == ProbeMap::RetractToPf)
      report.notes.push_back("seam identity (n+1)(1-n/(n+1)) = 1 verified exactly on " + std::to_string(seam_checked) +
                             " base measures");
    if (detail::modulus_shrinks(report.buckets)) {
      report.verdict = Verdict::Pass;
    } else {
      report.verdict = Verdict::Informational;
      report.notes.push_back("modulus does not shrink with distance");
      if (finest_worst) report.counterexamples.push_back(std::move(*finest_worst));
    }
    return report;
  }

  // Support-degenerate: mu_eps = limit + eps (delta_fresh - delta_donor) with eps -> 0, so the
  // support of mu_eps has one more point than the support of the limit.
  std::vector<detail::Trajectory> families;
  if (map == ProbeMap::RetractToPf && n >= 3) {
    const Measure limit = canonicalize(space, {{0, Rational(3, 5)}, {1, Rational(2, 5)}});
    families.push_back({limit, 1, 2, {map, {}}, "mu_eps = (3/5)d1 + (2/5 - eps)d2 + eps d3"});
  }
  while (families.size() < samples) {
    const auto k = static_cast<std::size_t>(draw_between(rng, 1, static_cast<long long>(n - 1)));
    Measure limit = dirac(space, draw_index(rng, n));
    if (map == ProbeMap::RetractToPf) {
      if (k >= 2) limit = draw_majority_measure(rng, space, k);
    } else {
      limit = draw_pf_measure(rng, space, k, 1, k);
    }
    const PointId dom = limit.heaviest().point;
    const PointId donor = limit.is_dirac() ? dom : pick_other(limit, dom);
    std::vector<PointId> fresh;
    for (PointId p = 0; p < n; ++p)
      if (!limit.in_support(p)) fresh.push_back(p);
    const PointId target = fresh[draw_index(rng, fresh.size())];
    families.push_back({limit, donor, target, draw_map(limit), "random family"});
  }

  Rational max_gap(0);
  std::vector<Counterexample> gaps;
  for (const auto& fam : families) {
    const auto& f = fam.f;
    const Measure image = f(fam.base);
    const Measure sided = f.one_sided_limit(fam.base, fam.recipient);
    const Rational gap = wasserstein1(sided, image);
    const Rational donor_mass = fam.base.mass_at(fam.donor);
    std::optional<Rational> first_approach, last_approach;
    std::optional<Measure> finest;
    for (std::size_t k = 0; k < opts.buckets; ++k) {
      const Measure mu_eps = detail::move_mass(fam.base, fam.donor, fam.recipient, donor_mass * pow2_inverse(unsigned(k + 2)));
      if (!f.in_domain(mu_eps)) continue;
      ++report.samples;
      const Measure out = f(mu_eps);
      auto& b = report.buckets[k];
      b.dist = std::max(b.dist, wasserstein1(mu_eps, fam.base));
      const Rational dout = wasserstein1(out, image);
      if (b.pairs == 0 || dout > b.worst) b.worst = dout;
      ++b.pairs;
      const Rational approach = wasserstein1(out, sided);
      if (!first_approach) first_approach = approach;
      last_approach = approach;
      finest = mu_eps;
    }
    if (first_approach && *last_approach > *first_approach)
      report.notes.push_back("sampled images do not approach the closed-form one-sided limit for " + fam.label);
    if (gap > 0) {
      max_gap = std::max(max_gap, gap);
      if (gaps.size() < opts.max_counterexamples) {
        Counterexample ce{fam.label, {{"limit", fam.base}, {"f_limit", image}, {"one_sided_limit", sided}}, gap};
        if (finest) {
          ce.measures.push_back({"mu_eps_finest", *finest});
          ce.measures.push_back({"f_mu_eps_finest", f(*finest)});
        }
        gaps.push_back(std::move(ce));
      }
    }
  }
  report.gap = max_gap;
  if (max_gap > 0) {
    report.verdict = Verdict::Informational;
    report.counterexamples = std::move(gaps);
    report.notes.push_back("persistent gap: images of mu_eps do not converge to the image of the limit");
  } else if (detail::modulus_shrinks(report.buckets)) {
    report.verdict = Verdict::Pass;
  } else {
    report.verdict = Verdict::Informational;
    report.notes.push_back("modulus does not shrink with distance");
  }
  return report;
}

struct OpennessOptions {
  unsigned max_denominator = 10;
  std::size_t max_counterexamples = 8;
};

/// Checks r(<mu0; V; eps> cap P_f) = { delta_x : x in V }: every delta_x is hit by the
/// constructed witness, and every P_f lattice measure in the neighbourhood retracts into V.
inline ProbeReport openness_probe(const Measure& mu0, const PointSet& v, const Rational& epsilon,
                                  const OpennessOptions& opts = {}) {
  const auto cert = require_pf(mu0, "openness_probe");
  const auto in_v = membership_mask(*mu0.space(), v);
  if (!in_v[cert.dominant_point]) throw Error(ErrorKind::InvalidArgument, "openness_probe: dominant point not in V");
  const NeighborhoodSpec nbhd(mu0, {v}, epsilon);

  ProbeReport report;
  report.kind = ProbeKind::Openness;
  report.subject = "retract_to_dirac";
  report.scheme = "eps=" + to_string(epsilon);
  bool witness_failed = false;
  for (PointId x : v) {
    try {
      const Measure w = openness_witness(mu0, x, v);
      if (!(retract_to_dirac(w) == dirac(mu0.space(), x)) || !weak_nbhd_contains(w, nbhd)) throw Error(ErrorKind::WitnessInvalid, "");
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::WitnessInvalid) throw;
      witness_failed = true;
      report.notes.push_back("no witness for delta_" + mu0.space()->name(x));
    }
  }

  std::size_t escapes = 0;
  for (const auto& mu : enumerate_pf(mu0.space(), opts.max_denominator)) {
    if (!weak_nbhd_contains(mu, nbhd)) continue;
    ++report.samples;
    const PointId dom = pf_certificate(mu)->dominant_point;
    if (in_v[dom]) continue;
    ++escapes;
    if (report.counterexamples.size() < opts.max_counterexamples)
      report.counterexamples.push_back({"image outside <V>", {{"mu0", mu0}, {"mu", mu}}, {}});
  }
  if (escapes > 0)
    report.notes.push_back(std::to_string(escapes) + " neighbourhood measures retract outside V");

  if (witness_failed || (escapes > 0 && epsilon <= Rational(1, 3)))
    report.verdict = Verdict::Fail;
  else if (escapes > 0)
    report.verdict = Verdict::Informational;
  else
    report.verdict = Verdict::Pass;
  return report;
}

/// Random decomposable measure: positive weights on a few random pairs.
inline PairDecomposition draw_pair_decomposition(Rng& rng, const SpacePtr& space, std::size_t max_pairs = 6) {
  const std::size_t n = space->size();
  std::vector<PairDecomposition::Pair> all;
  for (PointId a = 0; a < n; ++a)
    for (PointId b = a + 1; b < n; ++b) all.push_back({a, b});
  const auto count = static_cast<std::size_t>(draw_between(rng, 1, static_cast<long long>(std::min(max_pairs, all.size()))));
  const auto chosen = draw_points(rng, all.size(), count);
  const long long den = draw_between(rng, static_cast<long long>(count), 24);
  const auto parts = draw_positive_composition(rng, den, count);
  std::map<PairDecomposition::Pair, Rational> weights;
  for (std::size_t i = 0; i < count; ++i) weights[all[chosen[i]]] = Rational(parts[i], den);
  return PairDecomposition(space, std::move(weights));
}

/// Follows sequences inside {all masses <= 1/2} that converge in Wasserstein-1 and checks
/// that every limit stays inside (closedness of the pair-decomposable set).
inline ProbeReport closure_probe(const SpacePtr& space, std::size_t samples, std::uint64_t seed,
                                 std::size_t steps = 8) {
  const std::size_t n = space->size();
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "closure_probe: needs at least two points");
  if (samples == 0) throw Error(ErrorKind::InvalidArgument, "closure_probe: samples must be >= 1");
  ProbeReport report;
  report.kind = ProbeKind::Closure;
  report.subject = "pair_decompose";
  report.scheme = "convergent sequences";
  report.buckets.assign(steps, Bucket{Rational(0), Rational(0), 0});
  Rng rng(seed);

  struct Sequence {
    std::string label;
    std::vector<Measure> terms;
    Measure limit;
  };
  std::vector<Sequence> seqs;

  {
    const Measure c = draw_pair_decomposition(rng, space).recompose();
    seqs.push_back({"constant sequence", std::vector<Measure>(steps, c), c});
  }
  {
    // (1/2) delta_a + (1/2) delta_{y_k}, y_k eventually equal to y.
    const auto pts = draw_points(rng, n, std::min<std::size_t>(3, n));
    const PointId a = pts[0], y = pts[1], z = n >= 3 ? pts[2] : pts[1];
    Sequence s{"(1/2)d_a + (1/2)d_{y_k}, y_k -> y", {}, canonicalize(space, {{a, one_half()}, {y, one_half()}})};
    for (std::size_t k = 0; k < steps; ++k)
      s.terms.push_back(canonicalize(space, {{a, one_half()}, {k == 0 ? z : y, one_half()}}));
    seqs.push_back(std::move(s));
  }
  if (n >= 3) {
    Sequence s{"(1/2, 1/2 - 1/k, 1/k)", {}, canonicalize(space, {{0, one_half()}, {1, one_half()}})};
    for (std::size_t k = 0; k < steps; ++k) {
      const Rational inv(Integer(1), Integer(k + 3));
      s.terms.push_back(canonicalize(space, {{0, one_half()}, {1, one_half() - inv}, {2, inv}}));
    }
    seqs.push_back(std::move(s));
  }
  while (seqs.size() < samples + 3) {
    // w_k = (1 - 2^-k) w_inf + 2^-k w' in weight space; the limit may lose atoms.
    const auto w_inf = draw_pair_decomposition(rng, space);
    const auto w_far = draw_pair_decomposition(rng, space);
    Sequence s{"random weight sequence", {}, w_inf.recompose()};
    for (std::size_t k = 0; k < steps; ++k) {
      const Rational h = pow2_inverse(unsigned(k + 1));
      std::map<PairDecomposition::Pair, Rational> w;
      for (const auto& [p, x] : w_inf.weights()) w[p] += (1 - h) * x;
      for (const auto& [p, x] : w_far.weights()) w[p] += h * x;
      s.terms.push_back(PairDecomposition(space, std::move(w)).recompose());
    }
    seqs.push_back(std::move(s));
  }

  bool escaped = false;
  for (const auto& s : seqs) {
    std::optional<Rational> first, last;
    for (std::size_t k = 0; k < s.terms.size(); ++k) {
      if (!omega_half_membership(s.terms[k])) throw InvariantViolation("closure_probe: sequence term has a mass > 1/2");
      const Rational d = wasserstein1(s.terms[k], s.limit);
      auto& b = report.buckets[k];
      b.dist = std::max(b.dist, k == 0 ? Rational(1) : pow2_inverse(unsigned(k)));
      if (b.pairs == 0 || d > b.worst) b.worst = d;
      ++b.pairs;
      ++report.samples;
      if (!first) first = d;
      last = d;
    }
    if (*last > *first) report.notes.push_back("sequence does not approach its limit: " + s.label);
    bool inside = !s.limit.is_dirac() && omega_half_membership(s.limit);
    if (inside) {
      const auto dec = pair_decompose(s.limit);
      inside = std::holds_alternative<PairDecomposition>(dec) &&
               std::get<PairDecomposition>(dec).recompose() == s.limit;
    }
    if (!inside) {
      escaped = true;
      report.counterexamples.push_back({"escaping limit: " + s.label, {{"limit", s.limit}, {"last_term", s.terms.back()}}, {}});
    }
  }
  report.verdict = escaped ? Verdict::Fail : Verdict::Pass;
  return report;
}

}  // namespace pfm
