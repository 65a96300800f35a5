#include "helpers.hpp"
#include "oracles.hpp"

#include "pfm/enumerate.hpp"
#include "pfm/simplex.hpp"
#include "pfm/transport.hpp"

#include <gtest/gtest.h>

using namespace testing_support;

TEST(Simplex, SmallProgram) {
  // min -x - y  s.t.  x + 2y + s1 = 4,  3x + y + s2 = 6
  lp::StandardForm<Rational> p{{{1, 2, 1, 0}, {3, 1, 0, 1}}, {4, 6}, {-1, -1, 0, 0}};
  const auto s = lp::solve(p);
  ASSERT_EQ(s.status, lp::Status::Optimal);
  EXPECT_EQ(s.objective, q("-14/5"));
  EXPECT_EQ(s.x[0], q("8/5"));
  EXPECT_EQ(s.x[1], q("6/5"));
}

TEST(Simplex, InfeasibleAndUnbounded) {
  lp::StandardForm<Rational> infeasible{{{1, 1}}, {-1}, {0, 0}};
  EXPECT_EQ(lp::solve(infeasible).status, lp::Status::Infeasible);
  lp::StandardForm<Rational> unbounded{{{1, -1}}, {1}, {0, -1}};
  EXPECT_EQ(lp::solve(unbounded).status, lp::Status::Unbounded);
}

TEST(Simplex, RedundantAndDegenerateRows) {
  // Row 3 = row 1 + row 2; the optimum sits at a degenerate vertex.
  lp::StandardForm<Rational> p{{{1, 1, 0}, {0, 1, 1}, {1, 2, 1}}, {1, 1, 2}, {1, 2, 1}};
  const auto s = lp::solve(p);
  ASSERT_EQ(s.status, lp::Status::Optimal);
  EXPECT_EQ(s.objective, 2);
}

TEST(Simplex, NegativeRightHandSide) {
  lp::StandardForm<Rational> p{{{-1, -1}}, {-3}, {2, 1}};
  const auto s = lp::solve(p);
  ASSERT_EQ(s.status, lp::Status::Optimal);
  EXPECT_EQ(s.objective, 3);
}

TEST(Wasserstein, Examples) {
  const auto x = letters(2);
  const auto mu = m(x, {{"a", "1/2"}, {"b", "1/2"}});
  EXPECT_EQ(wasserstein1(mu, mu), 0);
  EXPECT_EQ(wasserstein1(mu, dirac(x, 0)), q("1/2"));
  const auto l = line({0, 3, 7});
  EXPECT_EQ(wasserstein1(dirac(l, 0), dirac(l, 2)), 7);
  EXPECT_EQ(wasserstein1(dirac(l, 1), dirac(l, 2)), 4);
}

TEST(Wasserstein, OneParameterCouplingFamily) {
  // Two atoms against two atoms: couplings are x in [max(0, a1 - b2), min(a1, b1)].
  const auto l = line({0, 2});
  const auto mu = m(l, {{"a", "1/3"}, {"b", "2/3"}});
  const auto nu = m(l, {{"a", "3/4"}, {"b", "1/4"}});
  std::optional<Rational> best;
  for (int k = 0; k <= 12; ++k) {
    const Rational x00 = std::max(Rational(0), q("1/3") - q("1/4")) + Rational(k, 12) * (std::min(q("1/3"), q("3/4")) - std::max(Rational(0), q("1/3") - q("1/4")));
    const Rational x01 = q("1/3") - x00, x10 = q("3/4") - x00;
    const Rational cost = 2 * (x01 + x10);
    if (!best || cost < *best) best = cost;
  }
  EXPECT_EQ(wasserstein1(mu, nu), *best);
}

TEST(Wasserstein, PlanHasCorrectMarginals) {
  const auto l = line({0, 1, 4, 9});
  Rng rng(5);
  for (int i = 0; i < 40; ++i) {
    const auto mu = draw_majority_measure(rng, l, std::size_t{3});
    const auto nu = draw_pf_measure(rng, l, 1);
    const auto plan = optimal_transport(mu, nu);
    std::vector<Rational> out(4, Rational(0)), in(4, Rational(0));
    Rational cost(0);
    for (const auto& f : plan.flows) {
      EXPECT_GT(f.mass, 0);
      out[f.from] += f.mass;
      in[f.to] += f.mass;
      cost += f.mass * l->distance(f.from, f.to);
    }
    EXPECT_EQ(out, mu.dense());
    EXPECT_EQ(in, nu.dense());
    EXPECT_EQ(cost, plan.cost);
  }
}

TEST(Wasserstein, MatchesVertexEnumerationOnFourPoints) {
  const auto y = line({0, 1, 3, 7});
  const auto all = enumerate_measures(y, 4, 3);
  for (std::size_t i = 0; i < all.size(); i += 3)
    for (std::size_t j = 0; j < all.size(); j += 2) EXPECT_EQ(wasserstein1(all[i], all[j]), oracle::w1_by_vertex_enumeration(all[i], all[j]));
}

TEST(Wasserstein, MetricAxioms) {
  const auto y = line({0, 2, 5, 6});
  const auto all = enumerate_measures(y, 3);
  for (const auto& a : all)
    for (const auto& b : all) {
      const Rational ab = wasserstein1(a, b);
      EXPECT_EQ(ab, wasserstein1(b, a));
      EXPECT_EQ(ab == 0, a == b);
    }
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    const auto& a = all[draw_index(rng, all.size())];
    const auto& b = all[draw_index(rng, all.size())];
    const auto& c = all[draw_index(rng, all.size())];
    EXPECT_LE(wasserstein1(a, c), wasserstein1(a, b) + wasserstein1(b, c));
  }
}

TEST(Wasserstein, SpaceMismatch) {
  EXPECT_THROW(wasserstein1(dirac(letters(2), 0), dirac(line({0, 2}, "Y"), 0)), Error);
}
