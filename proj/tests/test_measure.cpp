#include "helpers.hpp"

#include "pfm/enumerate.hpp"

#include <gtest/gtest.h>

using namespace testing_support;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no pfm::Error thrown";
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Rational, ParsesIntegersAndFractions) {
  EXPECT_EQ(q("3/6"), Rational(1, 2));
  EXPECT_EQ(q("-2/4"), Rational(-1, 2));
  EXPECT_EQ(q("7"), Rational(7));
  EXPECT_EQ(to_string(q("6/4")), "3/2");
  EXPECT_THROW(q("1/0"), std::runtime_error);
  EXPECT_THROW(q("x"), std::runtime_error);
  EXPECT_THROW(q(""), std::runtime_error);
  EXPECT_EQ(pow2_inverse(5), Rational(1, 32));
}

TEST(FiniteSpace, RejectsBadMetrics) {
  using M = std::vector<std::vector<Rational>>;
  EXPECT_EQ(kind_of([] { FiniteSpace({}, M{}); }), ErrorKind::InvalidSpace);
  EXPECT_EQ(kind_of([] { FiniteSpace({"a", "a"}, M{{0, 1}, {1, 0}}); }), ErrorKind::InvalidSpace);
  EXPECT_EQ(kind_of([] { FiniteSpace({"a", "b"}, M{{0, 1}, {2, 0}}); }), ErrorKind::InvalidSpace);
  EXPECT_EQ(kind_of([] { FiniteSpace({"a", "b"}, M{{0, 0}, {0, 0}}); }), ErrorKind::InvalidSpace);
  EXPECT_EQ(kind_of([] { FiniteSpace({"a", "b"}, M{{1, 1}, {1, 0}}); }), ErrorKind::InvalidSpace);
  EXPECT_EQ(kind_of([] { FiniteSpace({"a", "b", "c"}, M{{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}); }), ErrorKind::InvalidSpace);
  EXPECT_NO_THROW(FiniteSpace({"a", "b", "c"}, M{{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}));
}

TEST(Canonicalize, MergesDuplicateAtoms) {
  const auto x = letters(2);
  const auto mu = m(x, {{"a", "1/2"}, {"a", "1/4"}, {"b", "1/4"}});
  ASSERT_EQ(mu.support_size(), 2u);
  EXPECT_EQ(mu.atoms()[0].point, at(x, "a"));
  EXPECT_EQ(mu.atoms()[0].mass, q("3/4"));
  EXPECT_EQ(mu.atoms()[1].mass, q("1/4"));
}

TEST(Canonicalize, DropsZeroAtoms) {
  const auto x = letters(2);
  const auto mu = m(x, {{"a", "1"}, {"b", "0"}});
  EXPECT_TRUE(mu.is_dirac());
  EXPECT_EQ(mu, dirac(x, at(x, "a")));
}

TEST(Canonicalize, SortsByPoint) {
  const auto x = letters(2);
  const auto mu = m(x, {{"b", "1/3"}, {"a", "2/3"}});
  EXPECT_EQ(mu.atoms()[0].point, at(x, "a"));
  EXPECT_EQ(mu.atoms()[0].mass, q("2/3"));
  EXPECT_EQ(mu.atoms()[1].point, at(x, "b"));
}

TEST(Canonicalize, Errors) {
  const auto x = letters(2);
  EXPECT_EQ(kind_of([&] { m(x, {{"a", "1/2"}, {"b", "1/3"}}); }), ErrorKind::MassSumViolation);
  EXPECT_EQ(kind_of([&] { m(x, {{"a", "1/2"}, {"z", "1/2"}}); }), ErrorKind::UnknownPoint);
  EXPECT_EQ(kind_of([&] { m(x, {{"a", "3/2"}, {"b", "-1/2"}}); }), ErrorKind::NegativeMass);
  EXPECT_EQ(kind_of([&] { canonicalize(x, std::vector<Atom>{{7, Rational(1)}}); }), ErrorKind::UnknownPoint);
  EXPECT_EQ(kind_of([&] { canonicalize(x, std::vector<Atom>{}); }), ErrorKind::MassSumViolation);
}

TEST(Canonicalize, StructuralEqualityIgnoresInputOrder) {
  const auto x = letters(3);
  EXPECT_EQ(m(x, {{"c", "1/6"}, {"a", "1/2"}, {"b", "1/3"}}), m(x, {{"a", "1/2"}, {"b", "1/6"}, {"b", "1/6"}, {"c", "1/6"}}));
  EXPECT_NE(m(x, {{"a", "1/2"}, {"b", "1/2"}}), m(x, {{"a", "1/2"}, {"c", "1/2"}}));
}

TEST(Canonicalize, IsIdempotentOnLattice) {
  const auto x = letters(3);
  for (const auto& mu : enumerate_measures(x, 8)) {
    std::vector<Atom> raw(mu.atoms().begin(), mu.atoms().end());
    EXPECT_EQ(canonicalize(x, raw), mu);
    Rational total(0);
    for (const auto& a : mu.atoms()) {
      EXPECT_GT(a.mass, 0);
      total += a.mass;
    }
    EXPECT_EQ(total, 1);
  }
}

TEST(ConvexCombine, Endpoints) {
  const auto x = letters(3);
  const auto mu = m(x, {{"a", "1/2"}, {"b", "1/2"}});
  const auto nu = m(x, {{"c", "1"}});
  EXPECT_EQ(convex_combine(Rational(0), mu, nu), mu);
  EXPECT_EQ(convex_combine(Rational(1), mu, nu), nu);
}

TEST(ConvexCombine, MidpointOfTwoDiracs) {
  const auto x = letters(2);
  EXPECT_EQ(convex_combine(q("1/2"), dirac(x, 0), dirac(x, 1)), m(x, {{"a", "1/2"}, {"b", "1/2"}}));
}

TEST(ConvexCombine, Errors) {
  const auto x = letters(2);
  const auto y = line({0, 2}, "Y");
  EXPECT_EQ(kind_of([&] { convex_combine(q("3/2"), dirac(x, 0), dirac(x, 1)); }), ErrorKind::ParameterOutOfRange);
  EXPECT_EQ(kind_of([&] { convex_combine(q("-1/2"), dirac(x, 0), dirac(x, 1)); }), ErrorKind::ParameterOutOfRange);
  EXPECT_EQ(kind_of([&] { convex_combine(q("1/2"), dirac(x, 0), dirac(y, 1)); }), ErrorKind::SpaceMismatch);
}

TEST(Pushforward, IdentityLeavesMeasureUnchanged) {
  const auto x = letters(3);
  for (const auto& mu : enumerate_measures(x, 6)) EXPECT_EQ(pushforward(mu, PointMap::identity(x)), mu);
}

TEST(Pushforward, CollapseToOnePoint) {
  const auto x = letters(3);
  const PointMap f(x, x, {2, 2, 2});
  EXPECT_EQ(pushforward(m(x, {{"a", "1/2"}, {"b", "1/2"}}), f), dirac(x, at(x, "c")));
}

TEST(Pushforward, RelabelsIntoAnotherSpaceAndPreservesSetMasses) {
  const auto x = letters(2);
  const auto y = FiniteSpace::discrete({"p", "q", "r"}, "Y");
  const PointMap f(x, y, {0, 1});
  const auto mu = m(x, {{"a", "2/3"}, {"b", "1/3"}});
  const auto image = pushforward(mu, f);
  EXPECT_EQ(image, m(y, {{"p", "2/3"}, {"q", "1/3"}}));
  for (const auto& set : enumerate_subsets(3, true)) EXPECT_EQ(mass_of_set(image, set), mass_of_set(mu, f.preimage(set)));
}

TEST(Pushforward, SpaceMismatch) {
  const auto x = letters(2);
  const auto y = line({0, 2}, "Y");
  EXPECT_EQ(kind_of([&] { pushforward(dirac(y, 0), PointMap::identity(x)); }), ErrorKind::SpaceMismatch);
}

TEST(PointMap, RejectsImagesOutsideTarget) {
  const auto x = letters(2);
  EXPECT_EQ(kind_of([&] { PointMap(x, x, {0, 5}); }), ErrorKind::InvalidPointMap);
  EXPECT_EQ(kind_of([&] { PointMap(x, x, {0}); }), ErrorKind::InvalidPointMap);
}

TEST(MassOfSet, Examples) {
  const auto x = letters(3);
  const auto mu = m(x, {{"a", "3/4"}, {"b", "1/4"}});
  EXPECT_EQ(mass_of_set(mu, PointSet{0, 1, 2}), 1);
  EXPECT_EQ(mass_of_set(mu, PointSet{}), 0);
  EXPECT_EQ(mass_of_set(mu, PointSet{at(x, "b")}), q("1/4"));
  EXPECT_EQ(kind_of([&] { mass_of_set(mu, PointSet{9}); }), ErrorKind::UnknownPoint);
}

TEST(MassOfSet, IsAdditiveOverDisjointSets) {
  const auto x = letters(4);
  const auto subsets = enumerate_subsets(4, true);
  for (const auto& mu : enumerate_measures(x, 4))
    for (const auto& s : subsets) {
      PointSet rest;
      for (PointId p = 0; p < 4; ++p)
        if (std::find(s.begin(), s.end(), p) == s.end()) rest.push_back(p);
      EXPECT_EQ(mass_of_set(mu, s) + mass_of_set(mu, rest), 1);
    }
}

TEST(Enumerate, CountsLatticeMeasuresOnTwoPoints) {
  // On two points a measure is determined by its mass at a: the Farey fractions of order d.
  const auto x = letters(2);
  std::set<Rational> fractions;
  for (long long den = 1; den <= 6; ++den)
    for (long long num = 0; num <= den; ++num) fractions.insert(Rational(num, den));
  EXPECT_EQ(enumerate_measures(x, 6).size(), fractions.size());
}

TEST(Enumerate, PointMapsCount) {
  EXPECT_EQ(enumerate_point_maps(letters(3), letters(2, "Y")).size(), 8u);
  EXPECT_EQ(enumerate_point_maps(letters(1), letters(4, "Y")).size(), 4u);
}

TEST(Enumerate, RandomDrawsAreReproducible) {
  const auto x = letters(4);
  Rng a(42), b(42);
  for (int i = 0; i < 50; ++i) {
    const auto mu = draw_pf_measure(a, x, 1, 1);
    EXPECT_EQ(mu, draw_pf_measure(b, x, 1, 1));
  }
}
