#pragma once

// Invariant suites behind `pfm verify`. Each suite is a list of named checks (exhaustive
// over a lattice of measures where feasible, seeded samples otherwise) plus, for the
// probes suite, the probe reports.

#include "pfm/enumerate.hpp"
#include "pfm/io.hpp"
#include "pfm/omega.hpp"
#include "pfm/pf.hpp"
#include "pfm/topology.hpp"
#include "pfm/transfer.hpp"
#include "pfm/transport.hpp"

#include <array>
#include <functional>

namespace pfm {

inline constexpr std::array<std::string_view, 6> kSuiteNames{"core", "pf", "omega", "transfer", "probes", "all"};

struct SuiteConfig {
  std::string suite = "all";
  SpacePtr space;
  std::size_t samples = 64;
  std::uint64_t seed = 0;
};

struct Check {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;
};

struct SuiteResult {
  SuiteConfig config;
  std::vector<Check> checks;
  std::vector<ProbeReport> reports;

  bool failed() const {
    for (const auto& c : checks)
      if (c.failures != 0) return true;
    for (const auto& r : reports)
      if (r.verdict == Verdict::Fail) return true;
    return false;
  }
};

/// Common-denominator bound used for exhaustive enumeration on a space of n points.
inline unsigned exhaustive_denominator(std::size_t n) {
  if (n <= 3) return 10;
  if (n == 4) return 8;
  if (n == 5) return 6;
  return 4;
}

namespace detail {

class CheckRecorder {
 public:
  explicit CheckRecorder(std::string name) { check_.name = std::move(name); }

  void expect(bool ok, const std::function<std::string()>& describe) {
    ++check_.cases;
    if (ok) return;
    if (check_.failures++ == 0) check_.first_failure = describe();
  }
  void expect(bool ok, const Measure& mu) {
    expect(ok, [&] { return io::to_json(mu).dump(); });
  }

  Check take() { return std::move(check_); }

 private:
  Check check_;
};

inline Rng check_rng(std::uint64_t seed, std::uint64_t salt) { return Rng(seed ^ (0x9e3779b97f4a7c15ULL * (salt + 1))); }

inline std::vector<Rational> unit_grid(unsigned steps) {
  std::vector<Rational> out;
  for (unsigned k = 0; k <= steps; ++k) out.emplace_back(Integer(k), Integer(steps));
  return out;
}

inline PointMap random_point_map(Rng& rng, const SpacePtr& space) {
  std::vector<PointId> table(space->size());
  for (auto& v : table) v = draw_index(rng, space->size());
  return PointMap(space, space, std::move(table));
}

/// All self-maps when there are at most 256 of them, otherwise `samples` random ones.
inline std::vector<PointMap> self_maps(Rng& rng, const SpacePtr& space, std::size_t samples) {
  const std::size_t n = space->size();
  std::size_t count = 1;
  for (std::size_t i = 0; i < n && count <= 256; ++i) count *= n;
  if (count <= 256) return enumerate_point_maps(space, space);
  std::vector<PointMap> out;
  for (std::size_t i = 0; i < samples; ++i) out.push_back(random_point_map(rng, space));
  return out;
}

/// Nearest-point retraction of U onto X, ties to the lower index.
inline EmbeddedSubspace nearest_point_embedding(const SpacePtr& space, const PointSet& x, const PointSet& u) {
  std::map<PointId, PointId> r;
  for (PointId p : u) {
    PointId best = x.front();
    for (PointId q : x)
      if (space->distance(p, q) < space->distance(p, best)) best = q;
    r[p] = best;
  }
  return EmbeddedSubspace(space, x, u, std::move(r));
}

inline std::vector<EmbeddedSubspace> suite_embeddings(Rng& rng, const SpacePtr& space, std::size_t samples) {
  const std::size_t n = space->size();
  std::vector<EmbeddedSubspace> all;
  std::size_t combos = 1;
  for (std::size_t i = 0; i < n; ++i) combos *= 3;
  if (combos <= 256) {
    for (const auto& u : enumerate_subsets(n))
      for (const auto& xs : enumerate_subsets(u.size())) {
        PointSet x;
        for (PointId i : xs) x.push_back(u[i]);
        all.push_back(nearest_point_embedding(space, x, u));
      }
    return all;
  }
  for (std::size_t s = 0; s < samples; ++s) {
    const auto u = draw_points(rng, n, static_cast<std::size_t>(draw_between(rng, 1, static_cast<long long>(n))));
    const auto xi = draw_points(rng, u.size(), static_cast<std::size_t>(draw_between(rng, 1, static_cast<long long>(u.size()))));
    PointSet x;
    for (PointId i : xi) x.push_back(u[i]);
    all.push_back(nearest_point_embedding(space, x, u));
  }
  return all;
}

inline void core_checks(const SuiteConfig& cfg, std::vector<Check>& out) {
  const auto& space = cfg.space;
  const auto lattice = enumerate_measures(space, exhaustive_denominator(space->size()));
  {
    CheckRecorder c("canonical_form");
    for (const auto& mu : lattice) {
      Rational total(0);
      bool ordered = true;
      for (std::size_t i = 0; i < mu.atoms().size(); ++i) {
        total += mu.atoms()[i].mass;
        if (mu.atoms()[i].mass <= 0 || (i > 0 && mu.atoms()[i - 1].point >= mu.atoms()[i].point)) ordered = false;
      }
      c.expect(ordered && total == 1 && canonicalize(space, std::vector<Atom>(mu.atoms().begin(), mu.atoms().end())) == mu, mu);
    }
    out.push_back(c.take());
  }
  {
    CheckRecorder c("pushforward_functorial");
    Rng rng = check_rng(cfg.seed, 1);
    const auto id = PointMap::identity(space);
    for (std::size_t s = 0; s < cfg.samples; ++s) {
      const auto f = random_point_map(rng, space);
      const auto g = random_point_map(rng, space);
      std::vector<PointId> gf(space->size());
      for (PointId p = 0; p < gf.size(); ++p) gf[p] = g(f(p));
      const PointMap composite(space, space, std::move(gf));
      const auto& mu = lattice[draw_index(rng, lattice.size())];
      c.expect(pushforward(pushforward(mu, f), g) == pushforward(mu, composite) && pushforward(mu, id) == mu, mu);
    }
    out.push_back(c.take());
  }
  {
    CheckRecorder c("wasserstein_metric");
    Rng rng = check_rng(cfg.seed, 2);
    for (std::size_t s = 0; s < cfg.samples; ++s) {
      const auto& a = lattice[draw_index(rng, lattice.size())];
      const auto& b = lattice[draw_index(rng, lattice.size())];
      const auto& m = lattice[draw_index(rng, lattice.size())];
      const Rational ab = wasserstein1(a, b);
      const bool ok = ab == wasserstein1(b, a) && (ab == 0) == (a == b) && ab >= 0 &&
                      ab <= wasserstein1(a, m) + wasserstein1(m, b) && wasserstein1(a, a) == 0;
      c.expect(ok, [&] { return io::json::array({io::to_json(a), io::to_json(b), io::to_json(m)}).dump(); });
    }
    out.push_back(c.take());
  }
  {
    CheckRecorder c("convex_combine_endpoints");
    Rng rng = check_rng(cfg.seed, 3);
    for (std::size_t s = 0; s < cfg.samples; ++s) {
      const auto& a = lattice[draw_index(rng, lattice.size())];
      const auto& b = lattice[draw_index(rng, lattice.size())];
      c.expect(convex_combine(Rational(0), a, b) == a && convex_combine(Rational(1), a, b) == b, a);
    }
    out.push_back(c.take());
  }
}

inline void pf_checks(const SuiteConfig& cfg, std::vector<Check>& out) {
  const auto& space = cfg.space;
  const auto lattice = enumerate_measures(space, exhaustive_denominator(space->size()));
  std::vector<Measure> members;
  for (const auto& mu : lattice)
    if (in_pf(mu)) members.push_back(mu);
  const auto grid = unit_grid(10);
  {
    CheckRecorder c("pf_threshold_direct");
    for (const auto& mu : lattice) {
      const std::size_t n = mu.support_size();
      bool direct = false;
      for (const auto& a : mu.atoms())
        if (a.mass * Integer(n + 1) >= Integer(n)) direct = true;
      c.expect(direct == in_pf(mu), mu);
    }
    out.push_back(c.take());
  }
  {
    CheckRecorder c("retract_to_dirac_fixes_diracs");
    for (PointId p = 0; p < space->size(); ++p) c.expect(retract_to_dirac(dirac(space, p)) == dirac(space, p), dirac(space, p));
    out.push_back(c.take());
  }
  {
    CheckRecorder c("retract_to_dirac_idempotent");
    for (const auto& mu : members) {
      const auto r = retract_to_dirac(mu);
      c.expect(r.is_dirac() && retract_to_dirac(r) == r, mu);
    }
    out.push_back(c.take());
  }
  {
    CheckRecorder c("homotopy_endpoints");
    for (const auto& mu : members) {
      const auto d = retract_to_dirac(mu);
      c.expect(fiber_homotopy(mu, Rational(1)) == mu && fiber_homotopy(mu, Rational(0)) == d &&
                   deformation_homotopy(mu, Rational(0)) == mu && deformation_homotopy(mu, Rational(1)) == d,
               mu);
    }
    for (PointId p = 0; p < space->size(); ++p)
      for (const auto& t : grid) c.expect(deformation_homotopy(dirac(space, p), t) == dirac(space, p), dirac(space, p));
    out.push_back(c.take());
  }
  {
    CheckRecorder c("fiber_stability");
    for (const auto& mu : members)
      for (const auto& t : grid) {
        if (t == 0) continue;
        c.expect(retract_to_dirac(fiber_homotopy(mu, t)) == retract_to_dirac(mu), mu);
      }
    out.push_back(c.take());
  }
  {
    CheckRecorder c("deformation_stays_in_pf");
    for (const auto& mu : members)
      for (const auto& t : grid) {
        const auto h = deformation_homotopy(mu, t);
        c.expect(in_pf(h) && retract_to_dirac(h) == retract_to_dirac(mu), mu);
      }
    out.push_back(c.take());
  }
  {
    CheckRecorder c("functor_map_preserves_pf");
    Rng rng = check_rng(cfg.seed, 4);
    for (const auto& f : self_maps(rng, space, cfg.samples))
      for (const auto& mu : members) {
        const auto img = functor_map(mu, f);
        c.expect(in_pf(img.measure) && img.certificate.dominant_point == f(pf_certificate(mu)->dominant_point), mu);
      }
    out.push_back(c.take());
  }
  {
    CheckRecorder c("homotopy_lift_endpoints");
    Rng rng = check_rng(cfg.seed, 5);
    for (std::size_t s = 0; s < cfg.samples && !members.empty(); ++s) {
      const auto f0 = random_point_map(rng, space);
      const auto f1 = random_point_map(rng, space);
      const SampledHomotopy h({{Rational(0), f0}, {Rational(1), f1}});
      const auto& mu = members[draw_index(rng, members.size())];
      c.expect(homotopy_lift(mu, h, Rational(0)) == functor_map(mu, f0).measure &&
                   homotopy_lift(mu, h, Rational(1)) == functor_map(mu, f1).measure,
               mu);
    }
    out.push_back(c.take());
  }
}

inline void omega_checks(const SuiteConfig& cfg, std::vector<Check>& out) {
  const auto& space = cfg.space;
  const auto lattice = enumerate_measures(space, exhaustive_denominator(space->size()));
  {
    CheckRecorder c("pair_decompose_criterion");
    for (const auto& mu : lattice) {
      if (mu.is_dirac()) continue;
      const auto res = pair_decompose(mu);
      const bool feasible = std::holds_alternative<PairDecomposition>(res);
      c.expect(feasible == omega_half_membership(mu) &&
                   (!feasible || std::get<PairDecomposition>(res).recompose() == mu),
               mu);
    }
    out.push_back(c.take());
  }
  {
    CheckRecorder fix("retract_to_pf_fixes_pf");
    CheckRecorder lands("retract_to_pf_lands_in_pf");
    CheckRecorder idem("retract_to_pf_idempotent");
    CheckRecorder dom("retract_to_pf_keeps_dominant_and_support");
    for (const auto& mu : lattice) {
      if (mu.heaviest().mass <= one_half()) continue;
      const auto r = retract_to_pf(mu);
      if (in_pf(mu)) fix.expect(r == mu, mu);
      lands.expect(in_pf(r), mu);
      idem.expect(retract_to_pf(r) == r, mu);
      bool same_support = r.support_size() == mu.support_size();
      for (const auto& a : mu.atoms()) same_support = same_support && r.in_support(a.point);
      dom.expect(same_support && r.heaviest().point == mu.heaviest().point, mu);
    }
    out.push_back(fix.take());
    out.push_back(lands.take());
    out.push_back(idem.take());
    out.push_back(dom.take());
  }
  {
    CheckRecorder c("half_neighborhoods_disjoint");
    for (const auto& mu : lattice) {
      std::size_t hits = 0;
      for (PointId p = 0; p < space->size(); ++p) hits += half_neighborhood_contains(mu, p) ? 1 : 0;
      c.expect(hits <= 1 && (hits == 1) == (mu.heaviest().mass > one_half()), mu);
    }
    out.push_back(c.take());
  }
}

inline void transfer_checks(const SuiteConfig& cfg, std::vector<Check>& out) {
  const auto& space = cfg.space;
  Rng rng = check_rng(cfg.seed, 6);
  const auto embeddings = suite_embeddings(rng, space, cfg.samples);
  const auto members = enumerate_pf(space, exhaustive_denominator(space->size()));
  CheckRecorder mfix("mass_transfer_fixes_supported_in_U");
  CheckRecorder midem("mass_transfer_idempotent");
  CheckRecorder mlands("mass_transfer_lands_in_pf_over_U");
  CheckRecorder tfix("transfer_retract_fixes_subspace");
  CheckRecorder tidem("transfer_retract_idempotent");
  CheckRecorder tlands("transfer_retract_lands_in_pf_over_subspace");
  for (const auto& emb : embeddings) {
    const auto in_u = membership_mask(*space, emb.neighborhood());
    for (const auto& nu : members) {
      if (mass_of_set(nu, emb.neighborhood()) <= one_half()) continue;
      const auto m = mass_transfer_into(nu, emb.neighborhood());
      bool in_u_only = true, supported = true;
      for (const auto& a : nu.atoms()) supported = supported && in_u[a.point];
      for (const auto& a : m.atoms()) in_u_only = in_u_only && in_u[a.point];
      if (supported) mfix.expect(m == nu, nu);
      midem.expect(mass_transfer_into(m, emb.neighborhood()) == m, nu);
      mlands.expect(in_pf(m) && in_u_only, nu);

      const auto t = transfer_retract(nu, emb);
      if (emb.supported_in_subspace(nu)) tfix.expect(t == nu, nu);
      tidem.expect(transfer_retract(t, emb) == t, nu);
      tlands.expect(in_pf(t) && emb.supported_in_subspace(t), nu);
    }
  }
  for (auto* c : {&mfix, &midem, &mlands, &tfix, &tidem, &tlands}) out.push_back(c->take());
}

inline ProbeReport merge_openness(std::vector<ProbeReport> parts) {
  ProbeReport merged;
  merged.kind = ProbeKind::Openness;
  merged.subject = "retract_to_dirac";
  merged.scheme = "sampled (mu0, V, eps<=1/3) configurations";
  for (auto& r : parts) {
    merged.samples += r.samples;
    if (r.verdict == Verdict::Fail) merged.verdict = Verdict::Fail;
    for (auto& ce : r.counterexamples)
      if (merged.counterexamples.size() < 8) merged.counterexamples.push_back(std::move(ce));
    for (auto& n : r.notes) merged.notes.push_back(std::move(n));
  }
  merged.notes.push_back(std::to_string(parts.size()) + " configurations probed");
  return merged;
}

inline void probe_reports(const SuiteConfig& cfg, std::vector<Check>& checks, std::vector<ProbeReport>& out) {
  const auto& space = cfg.space;
  if (space->size() < 2) {
    ProbeReport r;
    r.kind = ProbeKind::Continuity;
    r.subject = "all";
    r.notes.push_back("single-point space: every measure is Dirac and every probe is vacuous");
    out.push_back(std::move(r));
    return;
  }
  std::uint64_t salt = 100;
  for (auto map : {ProbeMap::RetractToDirac, ProbeMap::RetractToPf, ProbeMap::MassTransferInto})
    for (auto scheme : {Scheme::SupportPreserving, Scheme::SupportDegenerate})
      out.push_back(continuity_probe(map, space, cfg.samples, scheme, cfg.seed ^ (0x9e3779b97f4a7c15ULL * ++salt)));

  // Openness and the continuity core on sampled configurations with eps <= 1/3.
  Rng rng = check_rng(cfg.seed, 7);
  const unsigned den = std::min(exhaustive_denominator(space->size()), 8u);
  std::vector<Measure> centers;
  for (auto& mu : enumerate_pf(space, den))
    if (mu.support_size() >= 2) centers.push_back(std::move(mu));
  const std::array<Rational, 4> eps{Rational(1, 3), Rational(1, 4), Rational(1, 6), Rational(1, 12)};
  std::vector<ProbeReport> parts;
  CheckRecorder core("continuity_core_eps_one_third");
  const std::size_t configs = std::min<std::size_t>(cfg.samples, 32);
  for (std::size_t s = 0; s < configs && !centers.empty(); ++s) {
    const auto& mu0 = centers[draw_index(rng, centers.size())];
    const PointId dom = pf_certificate(mu0)->dominant_point;
    PointSet v{dom};
    for (PointId p = 0; p < space->size(); ++p)
      if (p != dom && draw_index(rng, 2) == 1) v.push_back(p);
    std::sort(v.begin(), v.end());
    const auto& e = eps[draw_index(rng, eps.size())];
    parts.push_back(openness_probe(mu0, v, e, {den, 8}));
    const NeighborhoodSpec nb(mu0, {v}, Rational(1, 3));
    const auto in_v = membership_mask(*space, v);
    for (const auto& mu : enumerate_pf(space, den))
      if (weak_nbhd_contains(mu, nb)) core.expect(in_v[pf_certificate(mu)->dominant_point] != 0, mu);
  }
  out.push_back(merge_openness(std::move(parts)));
  checks.push_back(core.take());
  out.push_back(closure_probe(space, cfg.samples, cfg.seed ^ (0x9e3779b97f4a7c15ULL * ++salt)));
}

}  // namespace detail

inline SuiteResult run_suite(const SuiteConfig& cfg) {
  if (std::find(kSuiteNames.begin(), kSuiteNames.end(), cfg.suite) == kSuiteNames.end())
    throw Error(ErrorKind::InvalidArgument, "unknown suite '" + cfg.suite + "'");
  if (cfg.samples == 0) throw Error(ErrorKind::InvalidArgument, "samples must be >= 1");
  if (!cfg.space) throw Error(ErrorKind::InvalidArgument, "no space");
  SuiteResult res{cfg, {}, {}};
  const bool all = cfg.suite == "all";
  if (all || cfg.suite == "core") detail::core_checks(cfg, res.checks);
  if (all || cfg.suite == "pf") detail::pf_checks(cfg, res.checks);
  if (all || cfg.suite == "omega") detail::omega_checks(cfg, res.checks);
  if (all || cfg.suite == "transfer") detail::transfer_checks(cfg, res.checks);
  if (all || cfg.suite == "probes") detail::probe_reports(cfg, res.checks, res.reports);
  return res;
}

namespace io {

inline json to_json(const Check& c) {
  json j{{"name", c.name}, {"cases", c.cases}, {"failures", c.failures}};
  if (c.failures != 0) j["first_failure"] = c.first_failure;
  return j;
}

inline json to_json(const SuiteResult& r) {
  json checks = json::array(), reports = json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  for (const auto& p : r.reports) reports.push_back(to_json(p));
  return {{"suite", r.config.suite},
          {"space_id", r.config.space->id()},
          {"samples", r.config.samples},
          {"seed", r.config.seed},
          {"checks", std::move(checks)},
          {"reports", std::move(reports)},
          {"status", r.failed() ? "fail" : "pass"}};
}

/// Probe rows followed by one row per check (kind "check", pairs = cases, worst = failures).
inline std::string to_csv(const SuiteResult& r) {
  std::string out = csv_header();
  for (const auto& p : r.reports) out += to_csv_rows(p);
  for (const auto& c : r.checks)
    out += "check," + c.name + ",,," + std::to_string(c.cases) + ",," + std::to_string(c.failures) + ",,," +
           (c.failures == 0 ? "pass" : "fail") + "\n";
  return out;
}

}  // namespace io

}  // namespace pfm
