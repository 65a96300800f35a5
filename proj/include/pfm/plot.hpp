#pragma once

// Barycentric plot data for 3- and 4-point spaces. Every row is
//   series,t,<mass at each point>,label
// with masses as exact "p/q" strings. Grid rows have series "grid" and an empty t.

#include "pfm/enumerate.hpp"
#include "pfm/omega.hpp"
#include "pfm/pf.hpp"

#include <sstream>

namespace pfm {

enum class PlotKind { PfRegion, OmegaHalfRegion, Fiber, HomotopyPath };

inline PlotKind parse_plot_kind(std::string_view name) {
  if (name == "pf-region") return PlotKind::PfRegion;
  if (name == "omega-half-region") return PlotKind::OmegaHalfRegion;
  if (name == "fiber") return PlotKind::Fiber;
  if (name == "homotopy-path") return PlotKind::HomotopyPath;
  throw Error(ErrorKind::InvalidArgument, "unknown plot kind '" + std::string(name) + "'");
}

namespace detail {

inline void plot_row(std::ostream& out, const std::string& series, const std::optional<Rational>& t, const Measure& mu,
                     std::string_view label) {
  out << series << ',';
  if (t) out << to_string(*t);
  for (const auto& m : mu.dense()) out << ',' << to_string(m);
  out << ',' << label << '\n';
}

inline std::vector<Measure> simplex_grid(const SpacePtr& space, unsigned grid) {
  std::vector<Measure> out;
  for_each_composition(grid, space->size(), [&](const std::vector<unsigned>& parts) {
    std::vector<Atom> raw;
    for (PointId p = 0; p < parts.size(); ++p)
      if (parts[p] != 0) raw.push_back({p, Rational(parts[p], grid)});
    out.push_back(canonicalize(space, std::move(raw)));
  });
  return out;
}

}  // namespace detail

/// `anchor` is the point whose fiber is drawn (fiber kind only).
inline std::string plot_data(PlotKind kind, const SpacePtr& space, unsigned grid, PointId anchor = 0) {
  if (space->size() != 3 && space->size() != 4)
    throw Error(ErrorKind::UnsupportedDimension,
                "plots need a 3- or 4-point space, got " + std::to_string(space->size()) + " points");
  if (grid < 2) throw Error(ErrorKind::ParameterOutOfRange, "grid must be >= 2");
  if (!space->contains(anchor)) throw Error(ErrorKind::UnknownPoint, "anchor point out of range");

  std::ostringstream out;
  out << "series,t";
  for (const auto& name : space->points()) out << ',' << name;
  out << ",label\n";

  const auto points = detail::simplex_grid(space, grid);
  std::vector<Rational> times;
  for (unsigned k = 0; k <= grid; ++k) times.emplace_back(Integer(k), Integer(grid));

  switch (kind) {
    case PlotKind::PfRegion:
      for (const auto& mu : points) detail::plot_row(out, "grid", {}, mu, in_pf(mu) ? "member" : "outside");
      break;
    case PlotKind::OmegaHalfRegion:
      for (const auto& mu : points)
        detail::plot_row(out, "grid", {}, mu, !mu.is_dirac() && omega_half_membership(mu) ? "member" : "outside");
      break;
    case PlotKind::Fiber: {
      auto label = [&](const Measure& mu) -> std::string_view {
        const auto c = pf_certificate(mu);
        if (!c) return "outside";
        return c->dominant_point == anchor ? "fiber" : "other-fiber";
      };
      std::size_t segment = 0;
      for (const auto& mu : points) {
        detail::plot_row(out, "grid", {}, mu, label(mu));
        if (label(mu) != "fiber" || mu.is_dirac()) continue;
        const std::string series = "segment-" + std::to_string(segment++);
        for (const auto& t : times) {
          const auto m = fiber_homotopy(mu, t);
          detail::plot_row(out, series, t, m, label(m));
        }
      }
      break;
    }
    case PlotKind::HomotopyPath: {
      std::size_t path = 0;
      for (const auto& mu : points) {
        if (!in_pf(mu) || mu.is_dirac()) continue;
        const std::string series = "path-" + std::to_string(path++);
        for (const auto& t : times) {
          const auto m = deformation_homotopy(mu, t);
          detail::plot_row(out, series, t, m, in_pf(m) ? "member" : "outside");
        }
      }
      break;
    }
  }
  return out.str();
}

}  // namespace pfm
