#include <gtest/gtest.h>

#include <set>

#include <ecluster/mutation.hpp>
#include <ecluster/polygon.hpp>

#include "../support/oracles.hpp"

using namespace ecluster;

namespace {

// Catalan numbers by the recurrence, independent of the enumerator.
long catalan(long k) {
  std::vector<long> c(k + 1, 0);
  c[0] = 1;
  for (long n = 1; n <= k; ++n)
    for (long i = 0; i < n; ++i) c[n] += c[i] * c[n - 1 - i];
  return c[k];
}

// Crossing by sampling: chords of a circle through vertex angles intersect in
// the interior iff exactly one endpoint of one chord lies strictly inside the
// arc cut off by the other.
bool crossByArcs(const Diagonal& a, const Diagonal& b) {
  auto inside = [&](long v) { return a.i < v && v < a.j; };
  std::set<long> ends{a.i, a.j, b.i, b.j};
  if (ends.size() < 4) return false;
  return inside(b.i) != inside(b.j);
}

}  // namespace

TEST(Polygon, CrossingExamples) {
  EXPECT_TRUE(diagonalsCross({1, 3}, {2, 4}));
  EXPECT_FALSE(diagonalsCross({1, 3}, {1, 4}));
  EXPECT_FALSE(diagonalsCross({1, 3}, {3, 5}));
  for (long n = 1; n <= 6; ++n)
    for (const auto& a : allDiagonals(n))
      for (const auto& b : allDiagonals(n)) EXPECT_EQ(diagonalsCross(a, b), crossByArcs(a, b));
}

TEST(Polygon, FlipExamples) {
  auto t = makeTriangulation(2, {{1, 3}, {1, 4}});
  EXPECT_EQ(flip(t, {1, 3}).second, (Diagonal{2, 4}));
  EXPECT_EQ(flip(t, {1, 4}).second, (Diagonal{3, 5}));
  for (const auto& d : t.diagonals) {
    auto [u, e] = flip(t, d);
    EXPECT_EQ(flip(u, e).first, t);
  }
  EXPECT_THROW(flip(t, {2, 4}), DomainError);
}

TEST(Polygon, EnumerationCountsAreCatalan) {
  for (long n = 1; n <= 8; ++n) {
    auto ts = enumerateTriangulations(n);
    EXPECT_EQ(static_cast<long>(ts.size()), catalan(n + 1)) << n;
    std::set<Triangulation> distinct(ts.begin(), ts.end());
    EXPECT_EQ(distinct.size(), ts.size());
  }
  EXPECT_EQ(enumerateTriangulations(2).size(), 5u);
  EXPECT_EQ(enumerateTriangulations(3).size(), 14u);
  EXPECT_EQ(enumerateTriangulations(4).size(), 42u);
}

TEST(Polygon, FlipGraph) {
  for (long n = 1; n <= 5; ++n) {
    auto g = flipGraph(n);
    EXPECT_TRUE(g.connected());
    EXPECT_TRUE(g.regular(n));
  }
}

TEST(Polygon, Validation) {
  EXPECT_THROW(makeTriangulation(2, {{1, 3}, {2, 4}}), DomainError);
  EXPECT_THROW(makeTriangulation(2, {{1, 3}}), DomainError);
  EXPECT_THROW(makeTriangulation(2, {{1, 5}, {1, 3}}), DomainError);
  EXPECT_THROW(parseDiagonal("1_3"), ParseError);
  EXPECT_EQ(parseDiagonal(" 4-2 "), (Diagonal{2, 4}));
}

TEST(Polygon, EmbedExamples) {
  Ladder L = defaultLadder();
  EXPECT_EQ(embedDiagonal(L, {1, 3}), Interval::open(Rational(2, 3), Rational(8, 9)));
  EXPECT_EQ(embedDiagonal(L, {2, 4}), Interval::open(Rational(4, 5), Rational(16, 17)));
  auto T = embedTriangulation(L, makeTriangulation(2, {{1, 3}, {1, 4}}));
  EXPECT_TRUE(member(T, Interval::open(Rational(2, 3), Rational(8, 9))));
  EXPECT_TRUE(member(T, Interval::open(Rational(2, 3), Rational(16, 17))));
  EXPECT_FALSE(member(T, Interval::open(Rational(4, 5), Rational(16, 17))));
}

TEST(Polygon, CrossingMatchesImageIncompatibility) {
  Ladder L = defaultLadder();
  for (long n = 1; n <= 10; ++n)
    for (const auto& a : allDiagonals(n))
      for (const auto& b : allDiagonals(n))
        ASSERT_EQ(diagonalsCross(a, b), !oracle::compatible(embedDiagonal(L, a), embedDiagonal(L, b)));
}

TEST(Polygon, EmbeddedClustersAreMaximal) {
  Ladder L = defaultLadder();
  for (long n = 1; n <= 3; ++n)
    for (const auto& t : enumerateTriangulations(n)) {
      auto rep = verifyWindow(embedTriangulation(L, t), {-1, 2}, 6000, 3);
      EXPECT_TRUE(rep.failures.empty()) << t.str() << ' ' << toJson(rep).dump();
    }
}

TEST(Polygon, MutationSquare) {
  Ladder L = defaultLadder();
  auto pentagon = embedTriangulation(L, makeTriangulation(2, {{1, 3}, {1, 4}}));
  EXPECT_EQ(mutate(pentagon, embedDiagonal(L, {1, 3})).added, embedDiagonal(L, {2, 4}));
  for (long n = 1; n <= 4; ++n) {
    auto pts = polygonCriticalPoints(L, n);
    for (const auto& t : enumerateTriangulations(n))
      for (const auto& d : t.diagonals) {
        auto [u, e] = flip(t, d);
        auto r = mutate(embedTriangulation(L, t), embedDiagonal(L, d));
        EXPECT_EQ(r.added, embedDiagonal(L, e));
        EXPECT_TRUE(membershipDiff(r.newCluster, embedTriangulation(L, u), pts).empty()) << t.str() << " at " << d.str();
      }
  }
}

TEST(Polygon, JsonRoundTrip) {
  auto t = fanTriangulation(4);
  EXPECT_EQ(triangulationFromJson(toJson(t)), t);
  EXPECT_EQ(t.str(), "1-3,1-4,1-5,1-6");
}
