// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <iostream>
#include <set>
#include <string>
#include <thread>

#include <ecluster/ar_space.hpp>
#include <ecluster/infinity_gon.hpp>
#include <ecluster/mutation.hpp>
#include <ecluster/polygon.hpp>

#include "../support/oracles.hpp"

using namespace ecluster;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

double seconds(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Mutations executed anywhere in this binary, and ambiguous exchanges seen.
long mutations = 0, ambiguous = 0;

std::optional<MutationResult> tracked(const ClusterDescription& T, const Interval& v) {
  ++mutations;
  try {
    return mutate(T, v);
  } catch (const AmbiguousExchange&) {
    ++ambiguous;
    return std::nullopt;
  }
}

// Runs f over the items on all hardware threads, collecting per-item results.
template <class T, class F>
std::vector<std::invoke_result_t<F, const T&>> parallelMap(const std::vector<T>& items, F f) {
  using R = std::invoke_result_t<F, const T&>;
  std::vector<R> out(items.size());
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w)
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < items.size(); i += workers) out[i] = f(items[i]);
    }));
  for (auto& j : jobs) j.get();
  return out;
}

Outcome oracleEquivalence() {
  auto t0 = Clock::now();
  Outcome o;
  std::mt19937_64 rng(101);
  std::set<std::pair<int, int>> closures;
  long disagree = 0, infinite = 0;
  const long pairs = 200000;
  for (long t = 0; t < pairs; ++t) {
    auto [a, b] = oracle::randomPair(rng);
    closures.insert({closurePosition(a), closurePosition(b)});
    infinite += !a.left().value.finite() || !a.right().value.finite();
    disagree += eCompatibleEuler(a, b) != eCompatibleGeometric(a, b);
  }
  double s = seconds(t0);
  o.require(closures.size() == 16, "closure combinations covered: " + std::to_string(closures.size()));
  o.require(infinite > 0, "no infinite endpoints drawn");
  o.require(disagree == 0, std::to_string(disagree) + " disagreements");
  o.require(s < 10, "took " + std::to_string(s) + " s");
  o.detail = o.pass ? std::to_string(pairs) + " pairs, 16 closure combinations, 0 disagreements, " +
                          std::to_string(s).substr(0, 4) + " s"
                    : o.detail;
  return o;
}

Outcome sesSoundness() {
  Outcome o;
  std::mt19937_64 rng(202);
  long checked = 0, failures = 0;
  std::size_t minSamples = 1 << 30;
  while (checked < 10000) {
    auto [a, b] = oracle::randomPair(rng);
    if (eCompatible(a, b)) continue;
    ExtDirection d = extDirection(a, b);
    const Interval &sub = d == ExtDirection::VSub ? a : b, &quot = d == ExtDirection::VSub ? b : a;
    auto w = exchangeMiddle(sub, quot);
    std::vector<Interval> all{sub, quot};
    all.insert(all.end(), w.middle.begin(), w.middle.end());
    auto xs = oracle::samplePoints(all, rng, 100);
    minSamples = std::min(minSamples, xs.size());
    bool ok = oracle::sesDimensionsAgree(sub, quot, w.middle, xs);
    // The sequence must also be non-split: the middle differs from sub + quot.
    ok = ok && !(w.middle.size() == 2 && ((w.middle[0] == sub && w.middle[1] == quot) ||
                                          (w.middle[0] == quot && w.middle[1] == sub)));
    failures += !ok;
    ++checked;
  }
  o.require(failures == 0, std::to_string(failures) + " failing sequences");
  o.require(minSamples >= 100, "only " + std::to_string(minSamples) + " sample points");
  if (o.pass) o.detail = "10000 incompatible pairs, >= " + std::to_string(minSamples) + " points each, 0 failures";
  return o;
}

Outcome projectiveCluster() {
  Outcome o;
  auto P = buildProjectiveCluster();
  auto rep = verifyWindow(P, {-8, 8}, 30000, 7);
  o.require(rep.failures.empty(), "verifyWindow found " + std::to_string(rep.failures.size()) + " failures");
  o.require(rep.checked >= 10000, "only " + std::to_string(rep.checked) + " intervals checked");
  for (const Rational& b : {Rational(-3), frac(-1, 2), Rational(0), frac(1, 3), Rational(1), frac(22, 7)}) {
    auto r = tracked(P, Interval::projectiveOpen(b));
    o.require(r.has_value(), "P_{b)} mutation ambiguous");
    if (!r) continue;
    o.require(r->added == Interval::singleton(b), "replacement of P_{" + b.get_str() + ")} is " + notation(r->added));
    o.require(r->middle == std::vector<Interval>{Interval::projective(b)}, "middle at " + b.get_str());
    auto back = tracked(r->newCluster, r->added);
    o.require(back && back->added == Interval::projectiveOpen(b), "mutating back at " + b.get_str());
    for (const auto& v : {Interval::projective(b), Interval::projectiveInf()}) {
      bool refused = false;
      ++mutations;
      try {
        mutate(P, v);
      } catch (const NotMutable&) {
        refused = true;
      }
      o.require(refused, notation(v) + " was mutated");
    }
  }
  if (o.pass)
    o.detail = std::to_string(rep.checked) + " intervals checked, 0 failures; P_{b)} -> M_{b} with middle [P_b]; P_b, P_{+inf} not mutable";
  return o;
}

struct FlipCheck {
  long flips = 0, bad = 0, ambiguous = 0, verifyFailures = 0;
};

Outcome anEmbedding() {
  auto t0 = Clock::now();
  Outcome o;
  Ladder L = defaultLadder();
  for (long n = 1; n <= 10; ++n) {
    auto ds = allDiagonals(n);
    for (const auto& a : ds)
      for (const auto& b : ds)
        if (diagonalsCross(a, b) != !oracle::compatible(embedDiagonal(L, a), embedDiagonal(L, b)))
          o.require(false, "crossing mismatch " + a.str() + " " + b.str());
  }
  const long expected[] = {0, 2, 5, 14, 42, 132, 429};
  std::vector<std::pair<long, Triangulation>> work;
  for (long n = 1; n <= 6; ++n) {
    auto ts = enumerateTriangulations(n);
    o.require(static_cast<long>(ts.size()) == expected[n], "enumeration count at n=" + std::to_string(n));
    o.require(static_cast<long>(flipGraph(n).nodes.size()) == expected[n], "flip graph size at n=" + std::to_string(n));
    for (const auto& t : ts) work.push_back({n, t});
  }
  auto results = parallelMap(work, [&](const std::pair<long, Triangulation>& item) {
    FlipCheck c;
    auto [n, t] = item;
    auto E = embedTriangulation(L, t);
    c.verifyFailures = verifyWindow(E, {-1, 2}, 1500, 11).failures.size();
    auto pts = polygonCriticalPoints(L, n);
    for (const auto& d : t.diagonals) {
      ++c.flips;
      auto [u, e] = flip(t, d);
      try {
        auto r = mutate(E, embedDiagonal(L, d));
        bool ok = r.added == embedDiagonal(L, e) && membershipDiff(r.newCluster, embedTriangulation(L, u), pts).empty();
        auto back = mutate(r.newCluster, r.added);
        ++c.flips;
        ok = ok && back.added == embedDiagonal(L, d) && membershipDiff(back.newCluster, E, pts).empty();
        c.bad += !ok;
      } catch (const AmbiguousExchange&) {
        ++c.ambiguous;
      }
    }
    return c;
  });
  FlipCheck total;
  for (const auto& c : results) {
    total.flips += c.flips;
    total.bad += c.bad;
    total.ambiguous += c.ambiguous;
    total.verifyFailures += c.verifyFailures;
  }
  mutations += total.flips;
  ambiguous += total.ambiguous;
  double s = seconds(t0);
  o.require(total.verifyFailures == 0, std::to_string(total.verifyFailures) + " verifyWindow failures");
  o.require(total.bad == 0, std::to_string(total.bad) + " flips where the square does not commute");
  o.require(s < 120, "took " + std::to_string(s) + " s");
  if (o.pass)
    o.detail = std::to_string(work.size()) + " triangulations, " + std::to_string(total.flips) +
               " mutations (flips and back), counts 5/14/42 match, " + std::to_string(s).substr(0, 5) + " s";
  return o;
}

Outcome infinityGon() {
  Outcome o;
  Ladder L = defaultLadder();
  ArcSetDescription A;
  A.leftTails.push_back({0, -2});
  A.rightTails.push_back({1, 3});
  auto with = embedArcSet(L, A), without = embedArcSet(L, A, false);
  std::vector<Rational> vals{L.lowerLimit(), L.upperLimit()};
  for (long i = -6; i <= 8; ++i) vals.push_back(L.value(i));
  auto diff = membershipDiff(with, without, doubledPoints(vals));
  std::set<Interval> got(diff.begin(), diff.end());
  std::set<Interval> want{Interval::open(L.lowerLimit(), L.value(0)), Interval::open(L.lowerLimit(), L.value(1)),
                          Interval::open(L.value(1), L.upperLimit())};
  o.require(got == want, "fountain extras differ from the three expected modules");
  o.require(verifyWindow(with, {-1, 2}, 20000, 3).failures.empty(), "the fountain cluster is not maximal");
  o.require(!verifyWindow(without, {-1, 2}, 20000, 3).failures.empty(), "no compatible non-member without extras");

  std::mt19937_64 rng(606);
  long implications = 0, fountains = 0;
  for (int t = 0; t < 1000; ++t) {
    ArcSetDescription D;
    if (t % 2) {
      D = zigZag(4 + t % 9, rng);
    } else {
      std::uniform_int_distribution<long> pick(-4, 4), gap(0, 5);
      long m = pick(rng);
      D = fountainCluster(m, m + gap(rng), rng);
    }
    auto rep = fountainReport(D);
    fountains += rep.kind == FountainReport::Kind::Fountain;
    // A finite description stands for its cluster only strictly inside the
    // span of its arcs; tails make the whole tested range meaningful.
    long lo = -20, hi = 20;
    if (D.leftTails.empty() && D.rightTails.empty()) {
      lo = D.finite.begin()->i + 1;
      hi = lo;
      for (const auto& a : D.finite) hi = std::max(hi, a.j - 1);
    }
    for (long l = lo; l <= hi; ++l)
      if (noSkipCheck(D, l)) {
        ++implications;
        o.require(rep.kind == FountainReport::Kind::Fountain, "no-skip vertex in a non-fountain at t=" + std::to_string(t));
      }
  }
  o.require(implications > 0 && fountains == 500, "generator did not produce the expected mix");
  if (o.pass)
    o.detail = "three extras exact; removing them leaves a compatible non-member; " + std::to_string(implications) +
               " no-skip vertices over 1000 descriptions all in fountains";
  return o;
}

Outcome cpiBridge() {
  Outcome o;
  std::mt19937_64 rng(707);
  auto object = [&](long den) {
    std::uniform_int_distribution<long> px(0, 2 * den), py(-den + 1, den - 1);
    while (true) {
      CPiObject u{frac(px(rng), den), frac(py(rng), den)};
      if (inFundamentalDomain(u)) return u;
    }
  };
  long disagree = 0;
  for (int t = 0; t < 100000; ++t) {
    CPiObject u = object(12), v = object(12);
    bool e = !eCompatible(fMapSymbolic(u), fMapSymbolic(v));
    disagree += nrIncompatible(u, v) != e || nrIncompatibleDirect(u, v) != e;
  }
  o.require(disagree == 0, std::to_string(disagree) + " disagreements between the three incompatibility tests");

  long regress = 0;
  for (int t = 0; t < 2000; ++t) {
    CPiObject u = object(24);
    std::uniform_int_distribution<long> py(1, 47);
    CPiObject w{u.y + 1, u.y + frac(py(rng), 48)};
    if (!inFundamentalDomain(w)) continue;
    Interval a = fMapSymbolic(u), b = fMapSymbolic(w);
    Interval aClosed(a.left(), {a.right().value, Side::Plus});
    regress += nrIncompatible(u, w) || !eCompatible(a, b) || eCompatible(aClosed, b);
  }
  o.require(regress == 0, "adjacency regression failed");

  double worst = 0;
  for (int t = 0; t < 10000; ++t) {
    CPiObject u = object(997);
    auto n = fMap(u);
    auto v = fInverse(n.a, n.b);
    worst = std::max({worst, std::abs(v.x - u.x.get_d()), std::abs(v.y - u.y.get_d())});
  }
  o.require(worst < 1e-9, "round-trip error " + std::to_string(worst));

  auto T = buildTER(NROracle::verticalLine(0));
  std::vector<Rational> vals{-5, -2, -1, frac(-1, 3), 0, frac(1, 2), 1, frac(5, 3), 4};
  o.require(membershipDiff(T, buildProjectiveCluster(), doubledPoints(vals)).empty(), "vertical line image is not P");
  o.require(verifyWindow(T, {-4, 4}, 10000, 5).failures.empty(), "vertical line image is not maximal");
  if (o.pass) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1e", worst);
    o.detail = std::string("100000 pairs agree three ways; adjacency regression holds; round trip ") + buf +
               "; vertical line gives P";
  }
  return o;
}

Outcome derivedClassifier() {
  Outcome o;
  auto a = classifyDerived(QuiverSpec::straight());
  auto b = classifyDerived(QuiverSpec::halfBounded(QuiverSpec::Side::Right, {0, 1, 2}));
  auto c = classifyDerived(QuiverSpec::unboundedBoth());
  o.require(a != b && b != c && a != c, "canonical specs share a class");
  std::mt19937_64 rng(808);
  std::uniform_int_distribution<int> kind(0, 2), len(0, 4), coin(0, 1);
  std::vector<QuiverSpec> specs;
  for (int t = 0; t < 100; ++t) {
    std::vector<Rational> pts;
    for (int k = 0, e = len(rng); k < e; ++k) pts.push_back(k);
    int which = kind(rng);
    specs.push_back(which == 0   ? QuiverSpec::finite(pts, coin(rng))
                    : which == 1 ? QuiverSpec::halfBounded(coin(rng) ? QuiverSpec::Side::Left : QuiverSpec::Side::Right, pts)
                                 : QuiverSpec::unboundedBoth());
  }
  for (const auto& p : specs) {
    o.require(derivedEquivalent(p, p), "not reflexive");
    for (const auto& q : specs) {
      o.require(derivedEquivalent(p, q) == derivedEquivalent(q, p), "not symmetric");
      for (const auto& r : specs)
        if (derivedEquivalent(p, q) && derivedEquivalent(q, r)) o.require(derivedEquivalent(p, r), "not transitive");
    }
  }
  if (o.pass) o.detail = "three canonical specs, three classes; equivalence relation on 100 specs";
  return o;
}

Outcome gammaConsistency() {
  Outcome o;
  std::mt19937_64 rng(909);
  long degenerate = 0;
  for (int t = 0; t < 5000; ++t) {
    Interval v = oracle::randomInterval(rng);
    ARPoint p0 = gammaB(v);
    for (long n = -3; n <= 3; ++n) {
      ARPoint p = gammaB(v, n), q = gammaB(v, n + 1);
      o.require(std::abs(q.alpha - (p.alpha + kPi)) < 1e-9 && std::abs(q.beta + p.beta) < 1e-12,
                "shift rule fails at " + notation(v));
      o.require(std::abs(p.alpha - (p0.alpha + n * kPi)) < 1e-9, "alpha drift at " + notation(v));
    }
    bool flagged = isDegenerate(v);
    degenerate += flagged;
    o.require(flagged == (std::abs(std::abs(p0.beta) - kPi / 2) < 1e-12), "degeneracy mismatch at " + notation(v));
  }
  o.require(degenerate > 0, "no degenerate samples drawn");
  if (o.pass) o.detail = "5000 intervals, shifts -3..3, " + std::to_string(degenerate) + " degenerate samples agree";
  return o;
}

// Extra mutations beyond the polygon flips: T_inf ladder pieces, arcs and
// random projective clusters, each mutated and mutated back.
Outcome mutationUniqueness() {
  Outcome o;
  Ladder L = defaultLadder();
  long restored = 0, tried = 0;
  auto roundTrip = [&](const ClusterDescription& T, const Interval& v, const std::vector<DoubledPoint>& pts) {
    auto r = tracked(T, v);
    if (!r) return;
    auto back = tracked(r->newCluster, r->added);
    ++tried;
    if (back && back->added == v && membershipDiff(back->newCluster, T, pts).empty()) ++restored;
  };
  auto Tinf = buildTInfinity(L);
  std::vector<Rational> vals{L.lowerLimit(), L.upperLimit(), -1, 2};
  for (long i = -4; i <= 6; ++i) vals.push_back(L.value(i));
  for (long i = -3; i <= 4; ++i) {
    Rational a = L.value(i), b = L.value(i + 1), mid = (a + b) / 2;
    vals.push_back(mid);
    roundTrip(Tinf, Interval::open(a, mid), doubledPoints(vals));
  }
  std::mt19937_64 rng(303);
  for (int t = 0; t < 30; ++t) {
    std::uniform_int_distribution<long> pick(-2, 2), gap(2, 4);
    long m = pick(rng);
    auto A = fountainCluster(m, m + gap(rng), rng);
    auto T = embedArcSet(L, A);
    std::vector<Rational> av{L.lowerLimit(), L.upperLimit()};
    for (long i = m - 8; i <= m + 12; ++i) av.push_back(L.value(i));
    for (const auto& a : A.finite)
      if (isMutable(T, embedArc(L, a))) roundTrip(T, embedArc(L, a), doubledPoints(av));
  }
  o.require(ambiguous == 0, std::to_string(ambiguous) + " ambiguous exchanges");
  o.require(mutations >= 1000, "only " + std::to_string(mutations) + " mutations executed");
  o.require(restored == tried, std::to_string(tried - restored) + " of " + std::to_string(tried) + " round trips not restored");
  if (o.pass)
    o.detail = std::to_string(mutations) + " mutations, 0 ambiguous; " + std::to_string(tried) +
               " extra round trips restored (polygon round trips counted under 5)";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  // Criterion 3 tallies mutations from the others, so it runs last.
  std::vector<Criterion> order{{1, "oracle equivalence", oracleEquivalence},
                               {2, "SES soundness", sesSoundness},
                               {4, "projective cluster", projectiveCluster},
                               {5, "A_n embedding", anEmbedding},
                               {6, "A_inf embedding", infinityGon},
                               {7, "C_pi bridge", cpiBridge},
                               {8, "derived classifier", derivedClassifier},
                               {9, "Gamma consistency", gammaConsistency},
                               {3, "mutation uniqueness", mutationUniqueness}};
  std::map<int, std::pair<std::string, Outcome>> results;
  for (const auto& c : order) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    results[c.id] = {c.name, o};
  }
  int failed = 0;
  for (const auto& [id, r] : results) {
    std::cout << (r.second.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << r.first << "): " << r.second.detail
              << '\n';
    failed += !r.second.pass;
  }
  return failed;
}
