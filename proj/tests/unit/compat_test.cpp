#include <gtest/gtest.h>

#include <ecluster/json_codec.hpp>

#include "../support/oracles.hpp"

using namespace ecluster;

namespace {

Interval I(const char* s) { return parseInterval(s); }

}  // namespace

TEST(GVector, Examples) {
  GVector g = gVector(I("(0,2)"));
  EXPECT_EQ(g.top, DoubledPoint(2, Side::Minus));
  EXPECT_EQ(g.bottom, DoubledPoint(0, Side::Plus));
  GVector p = gVector(Interval::projective(5));
  EXPECT_EQ(p.top, DoubledPoint(5, Side::Plus));
  EXPECT_EQ(p.bottom, DoubledPoint::negInf());
  GVector s = gVector(Interval::singleton(1));
  EXPECT_EQ(s.top, DoubledPoint(1, Side::Plus));
  EXPECT_EQ(s.bottom, DoubledPoint(1, Side::Minus));
  EXPECT_LT(s.bottom, s.top);
}

TEST(HomProj, Examples) {
  EXPECT_TRUE(homProjNonzero(DoubledPoint(2, Side::Minus), DoubledPoint(1, Side::Plus)));
  EXPECT_FALSE(homProjNonzero(DoubledPoint(1, Side::Minus), DoubledPoint(1, Side::Plus)));
  EXPECT_TRUE(homProjNonzero(DoubledPoint(1, Side::Minus), DoubledPoint(1, Side::Minus)));
}

TEST(EulerPairing, Examples) {
  GVector g = gVector(I("(0,2)")), h = gVector(I("(1,3)"));
  // Expanding the four comparisons puts the -1 on the (0,2) class first.
  EXPECT_EQ(eulerPairing(g, h), -1);
  EXPECT_EQ(eulerPairing(h, g), 1);
  EXPECT_EQ(eulerPairing(g, g), 1);
  GVector k = gVector(I("(2,4)"));
  EXPECT_EQ(eulerPairing(g, k), 0);
  EXPECT_EQ(eulerPairing(k, g), 0);
}

TEST(EulerPairing, MatchesResolutionOracle) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20000; ++t) {
    auto [a, b] = oracle::randomPair(rng);
    // The pairing counts Hom from the second argument's projectives.
    ASSERT_EQ(eulerPairing(gVector(a), gVector(b)), oracle::euler(b, a)) << notation(a) << ' ' << notation(b);
  }
}

TEST(Compatibility, SpecExamples) {
  EXPECT_FALSE(eCompatibleEuler(I("(0,2)"), I("(1,3)")));
  EXPECT_FALSE(eCompatibleGeometric(I("(0,2]"), I("(2,4)")));
  EXPECT_TRUE(eCompatibleGeometric(I("M_{1}"), I("(0,2)")));
  EXPECT_FALSE(eCompatibleGeometric(I("M_{1}"), I("(0,1)")));
  EXPECT_TRUE(eCompatibleGeometric(I("(0,2)"), I("(2,4)")));
  for (long a = -3; a <= 3; ++a)
    for (long b = -3; b <= 3; ++b) {
      EXPECT_TRUE(eCompatibleEuler(Interval::projective(a), Interval::projective(b)));
      EXPECT_TRUE(eCompatibleEuler(Interval::projectiveOpen(a), Interval::projective(b)));
    }
}

TEST(Compatibility, SelfCompatible) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 2000; ++t) {
    Interval v = oracle::randomInterval(rng);
    EXPECT_TRUE(eCompatibleEuler(v, v));
    EXPECT_TRUE(eCompatibleGeometric(v, v));
  }
}

TEST(Compatibility, BothRulesMatchExtOracle) {
  std::mt19937_64 rng(7);
  int incompatible = 0;
  for (int t = 0; t < 50000; ++t) {
    auto [a, b] = oracle::randomPair(rng);
    bool o = oracle::compatible(a, b);
    ASSERT_EQ(eCompatibleEuler(a, b), o) << notation(a) << ' ' << notation(b);
    ASSERT_EQ(eCompatibleGeometric(a, b), o) << notation(a) << ' ' << notation(b);
    ASSERT_EQ(eCompatibleGeometric(a, b), eCompatibleGeometric(b, a));
    incompatible += !o;
  }
  EXPECT_GT(incompatible, 1000);
}

TEST(Compatibility, ExhaustiveOnSmallGrid) {
  std::vector<Interval> all;
  std::vector<DoubledPoint> pts{DoubledPoint::negInf(), DoubledPoint::posInf()};
  for (long x = 0; x <= 3; ++x)
    for (Side s : {Side::Minus, Side::Plus}) pts.push_back(DoubledPoint(x, s));
  for (const auto& l : pts)
    for (const auto& r : pts)
      if (auto v = Interval::tryMake(l, r)) all.push_back(*v);
  for (const auto& a : all)
    for (const auto& b : all) {
      ASSERT_EQ(eCompatibleEuler(a, b), oracle::compatible(a, b)) << notation(a) << ' ' << notation(b);
      ASSERT_EQ(eCompatibleGeometric(a, b), oracle::compatible(a, b)) << notation(a) << ' ' << notation(b);
    }
}

TEST(ExtDirection, Examples) {
  EXPECT_EQ(extDirection(I("(0,2)"), I("(1,3)")), ExtDirection::VSub);
  EXPECT_EQ(extDirection(I("(1,3)"), I("(0,2)")), ExtDirection::WSub);
  EXPECT_EQ(extDirection(I("(0,2]"), I("(2,4)")), ExtDirection::VSub);
  EXPECT_EQ(extDirection(I("M_{1}"), I("(0,2)")), ExtDirection::None);
}

TEST(ExtDirection, MatchesExtOracle) {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 20000; ++t) {
    auto [a, b] = oracle::randomPair(rng);
    ExtDirection d = extDirection(a, b);
    // Ext^1(b, a) != 0 means a sits as the subobject of an extension of b.
    EXPECT_EQ(d == ExtDirection::VSub, oracle::extDim(b, a) == 1) << notation(a) << ' ' << notation(b);
    EXPECT_EQ(d == ExtDirection::WSub, oracle::extDim(a, b) == 1) << notation(a) << ' ' << notation(b);
  }
}

TEST(ExchangeMiddle, Examples) {
  auto m = exchangeMiddle(I("(0,2)"), I("(1,3)")).middle;
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0], I("(0,3)"));
  EXPECT_EQ(m[1], I("(1,2)"));
  EXPECT_EQ(exchangeMiddle(I("(0,2]"), I("(2,4)")).middle, std::vector<Interval>{I("(0,4)")});
  EXPECT_EQ(exchangeMiddle(Interval::projectiveOpen(1), Interval::singleton(1)).middle,
            std::vector<Interval>{Interval::projective(1)});
  EXPECT_THROW(exchangeMiddle(I("(1,3)"), I("(0,2)")), NotAnExtension);
}

TEST(ExchangeMiddle, PointwiseDimensions) {
  std::mt19937_64 rng(23);
  int checked = 0;
  while (checked < 2000) {
    auto [a, b] = oracle::randomPair(rng);
    if (extDirection(a, b) != ExtDirection::VSub) continue;
    auto w = exchangeMiddle(a, b);
    std::vector<Interval> all{a, b};
    all.insert(all.end(), w.middle.begin(), w.middle.end());
    auto xs = oracle::samplePoints(all, rng, 100);
    ASSERT_TRUE(oracle::sesDimensionsAgree(a, b, w.middle, xs)) << notation(a) << ' ' << notation(b);
    // Non-split: the middle term is not sub + quotient.
    EXPECT_FALSE(w.middle.size() == 2 && ((w.middle[0] == a && w.middle[1] == b) || (w.middle[0] == b && w.middle[1] == a)));
    for (const auto& m : w.middle) {
      EXPECT_EQ(oracle::homDim(a, m), 1) << "sub maps into " << notation(m);
      EXPECT_EQ(oracle::homDim(m, b), 1) << notation(m) << " maps onto the quotient";
    }
    ++checked;
  }
}

TEST(Degenerate, Examples) {
  EXPECT_TRUE(isDegenerate(Interval::singleton(3)));
  EXPECT_TRUE(isDegenerate(Interval::projectiveInf()));
  EXPECT_FALSE(isDegenerate(I("(0,2)")));
  EXPECT_FALSE(isDegenerate(I("(-inf,2)")));
}
