#pragma once

// Wasserstein-1 distance: the optimal transport cost between two measures under
// the ground metric, solved as an exact rational LP over the transport polytope
// of the two supports.

#include "pfm/measure.hpp"
#include "pfm/simplex.hpp"

#include <tuple>

namespace pfm {

struct Flow {
  PointId from;
  PointId to;
  Rational mass;
};

struct TransportPlan {
  Rational cost;
  std::vector<Flow> flows;  // positive entries of an optimal coupling
};

inline TransportPlan optimal_transport(const Measure& mu, const Measure& nu) {
  require_same_space(mu.space(), nu.space(), "wasserstein1: measures over different spaces");
  if (mu == nu) {
    TransportPlan plan{Rational(0), {}};
    for (const auto& a : mu.atoms()) plan.flows.push_back({a.point, a.point, a.mass});
    return plan;
  }
  const auto src = mu.atoms();
  const auto dst = nu.atoms();
  const std::size_t r = src.size(), c = dst.size();
  const auto& space = *mu.space();

  // Variable (i, j) -> column i * c + j; rows: r source marginals then c target marginals.
  lp::StandardForm<Rational> problem;
  problem.a.assign(r + c, std::vector<Rational>(r * c, Rational(0)));
  problem.b.resize(r + c);
  problem.c.resize(r * c);
  for (std::size_t i = 0; i < r; ++i) {
    problem.b[i] = src[i].mass;
    for (std::size_t j = 0; j < c; ++j) {
      problem.a[i][i * c + j] = 1;
      problem.a[r + j][i * c + j] = 1;
      problem.c[i * c + j] = space.distance(src[i].point, dst[j].point);
    }
  }
  for (std::size_t j = 0; j < c; ++j) problem.b[r + j] = dst[j].mass;

  auto sol = lp::solve(problem);
  if (sol.status != lp::Status::Optimal) throw InvariantViolation("transport LP not optimal");
  TransportPlan plan{sol.objective, {}};
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (sol.x[i * c + j] != 0) plan.flows.push_back({src[i].point, dst[j].point, sol.x[i * c + j]});
  return plan;
}

inline Rational wasserstein1(const Measure& mu, const Measure& nu) { return optimal_transport(mu, nu).cost; }

}  // namespace pfm
