#pragma once

// JSON wire formats. Rationals are always [numerator, denominator] integer pairs
// (integers too large for 64 bits are written as decimal strings), never floats.

#include "pfm/measure.hpp"
#include "pfm/omega.hpp"
#include "pfm/pf.hpp"
#include "pfm/topology.hpp"
#include "pfm/transfer.hpp"

#include <json.hpp>

#include <fstream>
#include <limits>
#include <sstream>

namespace pfm::io {

using json = nlohmann::json;

/// Malformed input document (as opposed to a domain error on well-formed input).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline json integer_to_json(const Integer& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return v.convert_to<std::int64_t>();
  return v.str();
}

inline Integer integer_from_json(const json& j) {
  if (j.is_number_integer()) return j.is_number_unsigned() ? Integer(j.get<std::uint64_t>()) : Integer(j.get<std::int64_t>());
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    try {
      const Rational r = parse_rational(s);
      if (denominator_of(r) == 1 && s.find('/') == std::string::npos) return numerator_of(r);
    } catch (const std::runtime_error&) {
    }
  }
  throw ParseError("expected an integer, got " + j.dump());
}

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::string string_from_json(const json& j) {
  if (!j.is_string()) throw ParseError("expected a string, got " + j.dump());
  return j.get<std::string>();
}

}  // namespace detail

inline json to_json(const Rational& r) {
  return json::array({detail::integer_to_json(numerator_of(r)), detail::integer_to_json(denominator_of(r))});
}

inline Rational rational_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("expected a [num, den] pair, got " + j.dump());
  const Integer num = detail::integer_from_json(j[0]);
  const Integer den = detail::integer_from_json(j[1]);
  if (den == 0) throw ParseError("zero denominator in " + j.dump());
  return Rational(num, den);
}

inline json to_json(const FiniteSpace& space) {
  json metric = json::array();
  for (const auto& row : space.metric()) {
    json r = json::array();
    for (const auto& d : row) r.push_back(to_json(d));
    metric.push_back(std::move(r));
  }
  return {{"id", space.id()}, {"points", space.points()}, {"metric", std::move(metric)}};
}

/// Accepts the metric as an n x n matrix of pairs or as a flat row-major list of n^2 pairs.
inline SpacePtr space_from_json(const json& j) {
  std::vector<std::string> points;
  for (const auto& p : detail::field(j, "points")) points.push_back(detail::string_from_json(p));
  const auto n = points.size();
  const json& m = detail::field(j, "metric");
  if (!m.is_array()) throw ParseError("metric must be an array");
  std::vector<std::vector<Rational>> metric(n, std::vector<Rational>(n));
  const bool flat = !m.empty() && m[0].is_array() && !m[0].empty() && !m[0][0].is_array();
  if (flat) {
    if (m.size() != n * n) throw ParseError("flat metric must have n^2 entries");
    for (std::size_t k = 0; k < n * n; ++k) metric[k / n][k % n] = rational_from_json(m[k]);
  } else {
    if (m.size() != n) throw ParseError("metric must have one row per point");
    for (std::size_t i = 0; i < n; ++i) {
      if (!m[i].is_array() || m[i].size() != n) throw ParseError("metric row " + std::to_string(i) + " has wrong length");
      for (std::size_t k = 0; k < n; ++k) metric[i][k] = rational_from_json(m[i][k]);
    }
  }
  const std::string id = j.contains("id") ? detail::string_from_json(j.at("id")) : std::string("X");
  return std::make_shared<const FiniteSpace>(std::move(points), std::move(metric), id);
}

inline json to_json(const Measure& mu) {
  json atoms = json::array();
  for (const auto& a : mu.atoms()) atoms.push_back({{"point", mu.space()->name(a.point)}, {"mass", to_json(a.mass)}});
  return {{"space_id", mu.space()->id()}, {"atoms", std::move(atoms)}};
}

/// Parses and canonicalizes; domain violations (mass sum, unknown point, ...) surface as pfm::Error.
inline Measure measure_from_json(const json& j, const SpacePtr& space) {
  if (j.contains("space_id") && detail::string_from_json(j.at("space_id")) != space->id())
    throw Error(ErrorKind::SpaceMismatch,
                "measure refers to space '" + j.at("space_id").get<std::string>() + "', not '" + space->id() + "'");
  std::vector<std::pair<std::string, Rational>> raw;
  const json& atoms = detail::field(j, "atoms");
  if (!atoms.is_array()) throw ParseError("atoms must be an array");
  for (const auto& a : atoms)
    raw.emplace_back(detail::string_from_json(detail::field(a, "point")), rational_from_json(detail::field(a, "mass")));
  return canonicalize(space, raw);
}

inline json to_json(const PfCertificate& c, const FiniteSpace& space) {
  return {{"n", c.support_size}, {"dominant", space.name(c.dominant_point)}, {"mass", to_json(c.dominant_mass)}};
}

inline json to_json(const PairDecomposition& d) {
  json pairs = json::array();
  for (const auto& [p, w] : d.weights())
    pairs.push_back({{"a", d.space()->name(p.first)}, {"b", d.space()->name(p.second)}, {"w", to_json(w)}});
  return {{"pairs", std::move(pairs)}};
}

inline PairDecomposition decomposition_from_json(const json& j, const SpacePtr& space) {
  std::map<PairDecomposition::Pair, Rational> weights;
  for (const auto& e : detail::field(j, "pairs")) {
    PointId a = space->index_of(detail::string_from_json(detail::field(e, "a")));
    PointId b = space->index_of(detail::string_from_json(detail::field(e, "b")));
    if (a > b) std::swap(a, b);
    const Rational w = rational_from_json(detail::field(e, "w"));
    if (w != 0) weights[{a, b}] += w;
  }
  return PairDecomposition(space, std::move(weights));
}

inline json point_names(const FiniteSpace& space, std::span<const PointId> set) {
  json out = json::array();
  for (PointId p : set) out.push_back(space.name(p));
  return out;
}

inline PointSet point_set_from_json(const json& j, const FiniteSpace& space) {
  if (!j.is_array()) throw ParseError("expected a list of point names");
  PointSet out;
  for (const auto& p : j) out.push_back(space.index_of(detail::string_from_json(p)));
  return out;
}

inline json to_json(const EmbeddedSubspace& e) {
  json retraction = json::object();
  for (const auto& [from, to] : e.retraction()) retraction[e.ambient()->name(from)] = e.ambient()->name(to);
  return {{"ambient", to_json(*e.ambient())},
          {"subspace", point_names(*e.ambient(), e.subspace())},
          {"U", point_names(*e.ambient(), e.neighborhood())},
          {"retraction", std::move(retraction)}};
}

inline EmbeddedSubspace embedding_from_json(const json& j) {
  SpacePtr ambient = space_from_json(detail::field(j, "ambient"));
  PointSet x = point_set_from_json(detail::field(j, "subspace"), *ambient);
  PointSet u = point_set_from_json(detail::field(j, "U"), *ambient);
  std::map<PointId, PointId> r;
  const json& table = detail::field(j, "retraction");
  if (!table.is_object()) throw ParseError("retraction must be an object {point: point}");
  for (const auto& [from, to] : table.items()) r[ambient->index_of(from)] = ambient->index_of(detail::string_from_json(to));
  return EmbeddedSubspace(std::move(ambient), std::move(x), std::move(u), std::move(r));
}

/// {"target": space (optional, defaults to the source), "table": {point: point}}.
inline PointMap point_map_from_json(const json& j, const SpacePtr& source) {
  SpacePtr target = j.contains("target") ? space_from_json(j.at("target")) : source;
  const json& table = detail::field(j, "table");
  if (!table.is_object()) throw ParseError("table must be an object {point: point}");
  std::vector<PointId> images(source->size());
  std::vector<char> seen(source->size(), 0);
  for (const auto& [from, to] : table.items()) {
    const PointId p = source->index_of(from);
    images[p] = target->index_of(detail::string_from_json(to));
    seen[p] = 1;
  }
  for (PointId p = 0; p < seen.size(); ++p)
    if (!seen[p]) throw Error(ErrorKind::InvalidPointMap, "no image for point " + source->name(p));
  return PointMap(source, std::move(target), std::move(images));
}

inline json to_json(const PointMap& f) {
  json table = json::object();
  for (PointId p = 0; p < f.table().size(); ++p) table[f.source()->name(p)] = f.target()->name(f(p));
  return {{"target", to_json(*f.target())}, {"table", std::move(table)}};
}

inline json to_json(const ProbeReport& r) {
  json buckets = json::array();
  for (const auto& b : r.buckets) {
    if (b.pairs == 0) continue;
    buckets.push_back({{"dist", to_json(b.dist)}, {"worst", to_json(b.worst)}, {"pairs", b.pairs}});
  }
  json ces = json::array();
  for (const auto& c : r.counterexamples) {
    json ms = json::array();
    for (const auto& [name, mu] : c.measures) ms.push_back({{"name", name}, {"measure", to_json(mu)}});
    ces.push_back({{"label", c.label}, {"measures", std::move(ms)}, {"gap", c.gap ? to_json(*c.gap) : json(nullptr)}});
  }
  return {{"kind", probe_kind_name(r.kind)},
          {"subject", r.subject},
          {"scheme", r.scheme},
          {"samples", r.samples},
          {"buckets", std::move(buckets)},
          {"gap", r.gap ? to_json(*r.gap) : json(nullptr)},
          {"counterexamples", std::move(ces)},
          {"verdict", verdict_name(r.verdict)},
          {"notes", r.notes}};
}

inline const char* csv_header() { return "kind,subject,scheme,bucket,pairs,dist,worst,dist_approx,worst_approx,verdict\n"; }

/// One row per populated bucket; reports without buckets get a single summary row.
inline std::string to_csv_rows(const ProbeReport& r) {
  std::ostringstream out;
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  bool any = false;
  for (std::size_t k = 0; k < r.buckets.size(); ++k) {
    const auto& b = r.buckets[k];
    if (b.pairs == 0) continue;
    any = true;
    out << probe_kind_name(r.kind) << ',' << quote(r.subject) << ',' << quote(r.scheme) << ',' << k << ',' << b.pairs
        << ',' << to_string(b.dist) << ',' << to_string(b.worst) << ',' << to_double(b.dist) << ','
        << to_double(b.worst) << ',' << verdict_name(r.verdict) << '\n';
  }
  if (!any)
    out << probe_kind_name(r.kind) << ',' << quote(r.subject) << ',' << quote(r.scheme) << ",," << r.samples
        << ",,,,," << verdict_name(r.verdict) << '\n';
  return out.str();
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

}  // namespace pfm::io
