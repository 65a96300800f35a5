#include "helpers.hpp"
#include "oracles.hpp"

#include "pfm/enumerate.hpp"
#include "pfm/pf.hpp"

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

std::vector<Rational> grid(unsigned steps) {
  std::vector<Rational> out;
  for (unsigned k = 0; k <= steps; ++k) out.emplace_back(Integer(k), Integer(steps));
  return out;
}

}  // namespace

TEST(PfMembership, DiracIsMember) {
  const auto x = letters(3);
  const auto c = pf_certificate(dirac(x, 1));
  ASSERT_TRUE(c);
  EXPECT_EQ(c->support_size, 1u);
  EXPECT_EQ(c->dominant_point, 1u);
  EXPECT_EQ(c->dominant_mass, 1);
}

TEST(PfMembership, TwoAtomsAboveThreshold) {
  const auto x = letters(3);
  const auto c = pf_certificate(m(x, {{"a", "7/10"}, {"b", "3/10"}}));
  ASSERT_TRUE(c);
  EXPECT_EQ(c->support_size, 2u);
  EXPECT_EQ(c->dominant_point, at(x, "a"));
  EXPECT_EQ(c->dominant_mass, q("7/10"));
}

TEST(PfMembership, ThreeAtomsBelowThreshold) {
  const auto x = letters(3);
  const auto r = pf_membership(m(x, {{"a", "7/10"}, {"b", "2/10"}, {"c", "1/10"}}));
  ASSERT_TRUE(std::holds_alternative<NotMember>(r));
  EXPECT_EQ(std::get<NotMember>(r).max_mass, q("7/10"));
  EXPECT_EQ(std::get<NotMember>(r).threshold, q("3/4"));
}

TEST(PfMembership, ThresholdIsInclusive) {
  const auto x = letters(4);
  EXPECT_TRUE(in_pf(m(x, {{"a", "2/3"}, {"b", "1/3"}})));
  EXPECT_TRUE(in_pf(m(x, {{"a", "3/4"}, {"b", "1/8"}, {"c", "1/8"}})));
  EXPECT_TRUE(in_pf(m(x, {{"a", "4/5"}, {"b", "1/10"}, {"c", "1/20"}, {"d", "1/20"}})));
  EXPECT_FALSE(in_pf(m(x, {{"a", "1/2"}, {"b", "1/2"}})));
}

TEST(PfMembership, AgreesWithCrossMultiplication) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (const auto& mu : enumerate_measures(letters(n), 9)) EXPECT_EQ(in_pf(mu), oracle::pf_member(mu));
}

TEST(RetractToDirac, Examples) {
  const auto x = letters(3);
  EXPECT_EQ(retract_to_dirac(dirac(x, 2)), dirac(x, 2));
  EXPECT_EQ(retract_to_dirac(m(x, {{"a", "3/4"}, {"b", "1/4"}})), dirac(x, at(x, "a")));
  EXPECT_EQ(kind_of([&] { retract_to_dirac(m(x, {{"a", "1/2"}, {"b", "1/2"}})); }), ErrorKind::NotInPf);
}

TEST(RetractToDirac, FixesDiracsAndIsIdempotent) {
  const auto x = letters(4);
  for (PointId p = 0; p < 4; ++p) EXPECT_EQ(retract_to_dirac(dirac(x, p)), dirac(x, p));
  for (const auto& mu : enumerate_pf(x, 8)) {
    const auto r = retract_to_dirac(mu);
    EXPECT_TRUE(r.is_dirac());
    EXPECT_EQ(retract_to_dirac(r), r);
  }
}

TEST(FiberHomotopy, Example) {
  const auto x = letters(2);
  EXPECT_EQ(fiber_homotopy(m(x, {{"a", "3/4"}, {"b", "1/4"}}), q("1/2")), m(x, {{"a", "7/8"}, {"b", "1/8"}}));
}

TEST(FiberHomotopy, EndpointsAndFiberStability) {
  const auto x = letters(3);
  for (const auto& mu : enumerate_pf(x, 8)) {
    EXPECT_EQ(fiber_homotopy(mu, Rational(1)), mu);
    EXPECT_EQ(fiber_homotopy(mu, Rational(0)), retract_to_dirac(mu));
    for (const auto& t : grid(12)) {
      const auto h = fiber_homotopy(mu, t);
      EXPECT_TRUE(in_pf(h));
      if (t > 0) EXPECT_EQ(retract_to_dirac(h), retract_to_dirac(mu));
    }
  }
}

TEST(FiberHomotopy, Errors) {
  const auto x = letters(2);
  EXPECT_EQ(kind_of([&] { fiber_homotopy(m(x, {{"a", "1/2"}, {"b", "1/2"}}), q("1/2")); }), ErrorKind::NotInPf);
  EXPECT_EQ(kind_of([&] { fiber_homotopy(dirac(x, 0), q("2")); }), ErrorKind::ParameterOutOfRange);
}

TEST(DeformationHomotopy, Examples) {
  const auto x = letters(2);
  const auto mu = m(x, {{"a", "3/4"}, {"b", "1/4"}});
  EXPECT_EQ(deformation_homotopy(mu, Rational(1)), dirac(x, at(x, "a")));
  EXPECT_EQ(deformation_homotopy(mu, q("1/3")), m(x, {{"a", "5/6"}, {"b", "1/6"}}));
  for (const auto& t : grid(20)) EXPECT_EQ(deformation_homotopy(dirac(x, 1), t), dirac(x, 1));
}

TEST(DeformationHomotopy, AgreesWithConvexCombinationFormula) {
  const auto x = letters(3);
  for (const auto& mu : enumerate_pf(x, 6))
    for (const auto& t : grid(7)) {
      const auto h = deformation_homotopy(mu, t);
      const PointId dom = pf_certificate(mu)->dominant_point;
      for (PointId p = 0; p < 3; ++p) {
        const Rational expected = (1 - t) * mu.mass_at(p) + (p == dom ? t : Rational(0));
        EXPECT_EQ(h.mass_at(p), expected);
      }
      EXPECT_EQ(retract_to_dirac(h), retract_to_dirac(mu));
    }
}

TEST(DeformationHomotopy, Errors) {
  const auto x = letters(2);
  EXPECT_EQ(kind_of([&] { deformation_homotopy(m(x, {{"a", "1/2"}, {"b", "1/2"}}), q("1/2")); }), ErrorKind::NotInPf);
  EXPECT_EQ(kind_of([&] { deformation_homotopy(dirac(x, 0), q("-1/3")); }), ErrorKind::ParameterOutOfRange);
}

TEST(FunctorMap, IdentityKeepsCertificate) {
  const auto x = letters(3);
  for (const auto& mu : enumerate_pf(x, 6)) {
    const auto img = functor_map(mu, PointMap::identity(x));
    EXPECT_EQ(img.measure, mu);
    EXPECT_EQ(img.certificate, *pf_certificate(mu));
  }
}

TEST(FunctorMap, CollapseToDirac) {
  const auto x = letters(3);
  const auto img = functor_map(m(x, {{"a", "3/4"}, {"b", "1/4"}}), PointMap(x, x, {2, 2, 2}));
  EXPECT_EQ(img.measure, dirac(x, 2));
  EXPECT_EQ(img.certificate.support_size, 1u);
}

TEST(FunctorMap, MergingTwoLightAtoms) {
  const auto x = letters(3);
  const auto y = FiniteSpace::discrete({"a'", "b'"}, "Y");
  const auto mu = m(x, {{"a", "3/4"}, {"b", "1/8"}, {"c", "1/8"}});
  ASSERT_TRUE(in_pf(mu));
  const auto img = functor_map(mu, PointMap(x, y, {0, 1, 1}));
  EXPECT_EQ(img.measure, m(y, {{"a'", "3/4"}, {"b'", "1/4"}}));
  EXPECT_TRUE(oracle::pf_member(img.measure));
  EXPECT_EQ(img.certificate.dominant_point, 0u);
}

TEST(FunctorMap, PreservesMembershipForAllMaps) {
  for (std::size_t s = 1; s <= 3; ++s)
    for (std::size_t t = 1; t <= 3; ++t) {
      const auto src = letters(s), tgt = letters(t, "Y");
      const auto members = enumerate_pf(src, 6);
      for (const auto& f : enumerate_point_maps(src, tgt))
        for (const auto& mu : members) {
          const auto img = functor_map(mu, f);
          EXPECT_TRUE(oracle::pf_member(img.measure));
          EXPECT_EQ(img.certificate.dominant_point, f(pf_certificate(mu)->dominant_point));
        }
    }
}

TEST(FunctorMap, Errors) {
  const auto x = letters(2);
  const auto y = line({0, 2}, "Y");
  EXPECT_EQ(kind_of([&] { functor_map(m(x, {{"a", "1/2"}, {"b", "1/2"}}), PointMap::identity(x)); }), ErrorKind::NotInPf);
  EXPECT_EQ(kind_of([&] { functor_map(dirac(y, 0), PointMap::identity(x)); }), ErrorKind::SpaceMismatch);
}

TEST(HomotopyLift, EndpointsAndConstantFamily) {
  const auto x = letters(3);
  const PointMap h0(x, x, {0, 1, 2}), half(x, x, {0, 0, 2}), h1(x, x, {1, 1, 1});
  const SampledHomotopy h({{Rational(0), h0}, {q("1/2"), half}, {Rational(1), h1}});
  const auto c = SampledHomotopy::constant(half);
  for (const auto& mu : enumerate_pf(x, 6)) {
    EXPECT_EQ(homotopy_lift(mu, h, Rational(0)), functor_map(mu, h0).measure);
    EXPECT_EQ(homotopy_lift(mu, h, Rational(1)), functor_map(mu, h1).measure);
    EXPECT_EQ(homotopy_lift(mu, h, q("1/2")), functor_map(mu, half).measure);
    EXPECT_EQ(homotopy_lift(mu, c, q("0")), functor_map(mu, half).measure);
    EXPECT_EQ(homotopy_lift(mu, c, q("1")), functor_map(mu, half).measure);
  }
}

TEST(HomotopyLift, Errors) {
  const auto x = letters(2);
  const auto h = SampledHomotopy::constant(PointMap::identity(x));
  EXPECT_EQ(kind_of([&] { homotopy_lift(dirac(x, 0), h, q("1/3")); }), ErrorKind::ParameterOutOfRange);
  EXPECT_EQ(kind_of([&] { homotopy_lift(dirac(x, 0), h, q("3/2")); }), ErrorKind::ParameterOutOfRange);
  EXPECT_EQ(kind_of([&] { SampledHomotopy({{Rational(0), PointMap::identity(x)}}); }), ErrorKind::InvalidArgument);
}
