#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "family.hpp"

namespace ecluster {

// An intensional E-compatible set: the union of its families, edited by a
// finite diff (elements added outright, family elements removed).
struct ClusterDescription {
  Ladder ladder;
  std::vector<FamilyPtr> families;
  std::vector<Interval> added;
  std::vector<Interval> removed;
  std::string name;
};

inline bool sortedContains(const std::vector<Interval>& v, const Interval& m) {
  return std::binary_search(v.begin(), v.end(), m);
}

inline void sortedInsert(std::vector<Interval>& v, const Interval& m) {
  auto it = std::lower_bound(v.begin(), v.end(), m);
  if (it == v.end() || *it != m) v.insert(it, m);
}

inline void sortedErase(std::vector<Interval>& v, const Interval& m) {
  auto it = std::lower_bound(v.begin(), v.end(), m);
  if (it != v.end() && *it == m) v.erase(it);
}

inline bool familiesContain(const ClusterDescription& T, const Interval& m) {
  for (const auto& f : T.families)
    if (f->contains(m)) return true;
  return false;
}

inline bool member(const ClusterDescription& T, const Interval& m) {
  if (sortedContains(T.added, m)) return true;
  return !sortedContains(T.removed, m) && familiesContain(T, m);
}

// Elements treated as absent on top of T.removed (sorted).
using Exclusions = std::vector<Interval>;

inline bool excluded(const ClusterDescription& T, const Exclusions& extra, const Interval& w) {
  return sortedContains(T.removed, w) || sortedContains(extra, w);
}

// Some element of T (minus `extra`) that is E-incompatible with m.
inline std::optional<Interval> incompatibleWitness(const ClusterDescription& T, const Interval& m,
                                                   const Exclusions& extra = {}) {
  for (const auto& w : T.added)
    if (!sortedContains(extra, w) && !eCompatible(m, w)) return w;

  std::optional<Interval> found;
  Visitor take = [&](const Interval& w) {
    if (excluded(T, extra, w)) return false;
    if (eCompatible(m, w))
      throw std::logic_error("witness query returned compatible " + notation(w) + " for " + notation(m));
    found = w;
    return true;
  };
  const DoubledPoint &l = m.left(), &r = m.right();
  // Adjacent elements first, then crossing ones.
  for (const auto& f : T.families) {
    if (f->visitAt(End::Right, l, PointRange::all(), take)) return found;
    if (f->visitAt(End::Left, r, PointRange::all(), take)) return found;
  }
  for (const auto& f : T.families) {
    if (f->visitStraddling(l, PointRange::all(), PointRange::between(l, r), take)) return found;
    if (f->visitStraddling(r, PointRange::between(l, r), PointRange::all(), take)) return found;
  }
  return std::nullopt;
}

// Extreme of the free endpoint over elements of T (minus `extra`) whose
// `end` endpoint is p and whose other endpoint lies in r.
inline Extreme extremeAt(const ClusterDescription& T, End end, const DoubledPoint& p, const PointRange& r, Dir d,
                         const Exclusions& extra = {}) {
  Extreme acc;
  for (const auto& f : T.families) {
    PointRange range = r;
    for (;;) {
      Extreme e = f->extremeAt(end, p, range, d);
      if (!e.any || !e.attained) {
        absorb(acc, e, d);
        break;
      }
      auto w = withEnd(end, p, e.bound);
      if (!w || !excluded(T, extra, *w)) {
        absorb(acc, e, d);
        break;
      }
      if (d == Dir::Min)
        range.lo = e.bound, range.loIncl = false;
      else
        range.hi = e.bound, range.hiIncl = false;
    }
  }
  for (const auto& w : T.added)
    if (endpoint(w, end) == p && r.contains(endpoint(w, other(end))) && !sortedContains(extra, w))
      absorb(acc, Extreme::at(endpoint(w, other(end))), d);
  return acc;
}

// ----------------------------------------------------------------------------
// Named constructions.

inline Ladder defaultLadder() { return Ladder(0, 1); }

inline ClusterDescription buildProjectiveCluster() {
  ClusterDescription T;
  T.name = "projectives";
  T.families.push_back(std::make_shared<AllProjectivesFamily>());
  return T;
}

// Pieces outside the ladder: integer rungs, plus filler rungs when a limit
// is not an integer.
inline void addOuterRungs(const Ladder& L, std::vector<FamilyPtr>& out) {
  Integer lo = floorOf(L.lowerLimit()), hi = ceilOf(L.upperLimit());
  auto ints = RungSystem::integerRungs(lo, hi);
  out.push_back(std::make_shared<DyadicFamily>(ints));
  out.push_back(std::make_shared<SingletonFamily>(ints));
  if (Rational(lo) != L.lowerLimit()) {
    auto rs = RungSystem::single(Rational(lo), L.lowerLimit());
    out.push_back(std::make_shared<DyadicFamily>(rs));
    out.push_back(std::make_shared<SingletonFamily>(rs));
  }
  if (Rational(hi) != L.upperLimit()) {
    auto rs = RungSystem::single(L.upperLimit(), Rational(hi));
    out.push_back(std::make_shared<DyadicFamily>(rs));
    out.push_back(std::make_shared<SingletonFamily>(rs));
  }
  out.push_back(std::make_shared<IntegerProjectivesFamily>(lo, hi));
}

inline ClusterDescription buildTInfinity(const Ladder& L = defaultLadder()) {
  ClusterDescription T;
  T.name = "t-infinity";
  T.ladder = L;
  auto rungs = RungSystem::ladderRungs(L);
  T.families.push_back(std::make_shared<DyadicFamily>(rungs));
  T.families.push_back(std::make_shared<SingletonFamily>(rungs));
  addOuterRungs(L, T.families);
  T.families.push_back(std::make_shared<FiniteFamily>(std::vector<Interval>{
      Interval::open(L.lowerLimit(), L.upperLimit()), Interval::projectiveInf()}));
  return T;
}

inline ClusterDescription buildTn(const Ladder& L, long n) {
  if (n < 1) throw DomainError("T_n needs n >= 1");
  ClusterDescription T = buildTInfinity(L);
  T.name = "t-n";
  Rational a1 = L.value(1);
  T.families.push_back(std::make_shared<FanFamily>(FanSide::Left, a1, L, std::nullopt, -1L));
  T.families.push_back(std::make_shared<FanFamily>(FanSide::Right, a1, L, n + 3, std::nullopt));
  T.families.push_back(std::make_shared<FiniteFamily>(
      std::vector<Interval>{Interval::open(L.lowerLimit(), a1), Interval::open(a1, L.upperLimit())}));
  return T;
}

// ----------------------------------------------------------------------------
// Critical points and window verification.

inline std::vector<Rational> criticalValues(const ClusterDescription& T, const Window& w) {
  std::vector<Rational> v{w.lo, w.hi, T.ladder.lowerLimit(), T.ladder.upperLimit()};
  for (long i = -12; i <= 12; ++i) v.push_back(T.ladder.value(i));
  for (Integer k = ceilOf(w.lo); k <= floorOf(w.hi) && v.size() < 400; ++k) v.push_back(Rational(k));
  for (const auto& f : T.families) f->criticalValues(w, v);
  for (const auto* list : {&T.added, &T.removed})
    for (const auto& m : *list)
      for (const auto* p : {&m.left(), &m.right()})
        if (p->value.finite()) v.push_back(p->value.value());
  std::vector<Rational> in;
  for (auto& q : v)
    if (w.lo <= q && q <= w.hi) in.push_back(q);
  std::sort(in.begin(), in.end());
  in.erase(std::unique(in.begin(), in.end()), in.end());
  // Non-dyadic thirds between neighbours catch generic interior points.
  std::size_t n = in.size();
  for (std::size_t k = 0; k + 1 < n && k < 2000; ++k) in.push_back(in[k] + (in[k + 1] - in[k]) / 3);
  std::sort(in.begin(), in.end());
  in.erase(std::unique(in.begin(), in.end()), in.end());
  return in;
}

inline std::vector<DoubledPoint> doubledPoints(const std::vector<Rational>& values) {
  std::vector<DoubledPoint> pts{DoubledPoint::negInf()};
  for (const auto& q : values) {
    pts.push_back(DoubledPoint::minus(q));
    pts.push_back(DoubledPoint::plus(q));
  }
  pts.push_back(DoubledPoint::posInf());
  return pts;
}

// Structural points checked exhaustively regardless of the sampling budget.
inline std::vector<Rational> coarseValues(const ClusterDescription& T, const Window& w) {
  std::vector<Rational> v{w.lo, w.hi, T.ladder.lowerLimit(), T.ladder.upperLimit()};
  for (long i = -6; i <= 6; ++i) v.push_back(T.ladder.value(i));
  for (Integer k = ceilOf(w.lo); k <= floorOf(w.hi) && v.size() < 60; ++k) v.push_back(Rational(k));
  for (const auto* list : {&T.added, &T.removed})
    for (const auto& m : *list)
      for (const auto* p : {&m.left(), &m.right()})
        if (p->value.finite()) v.push_back(p->value.value());
  std::vector<Rational> in;
  for (auto& q : v)
    if (w.lo <= q && q <= w.hi) in.push_back(q);
  std::sort(in.begin(), in.end());
  in.erase(std::unique(in.begin(), in.end()), in.end());
  return in;
}

struct VerifyReport {
  long checked = 0;
  long members = 0;
  long witnessed = 0;
  std::vector<Interval> failures;  // compatible non-members found
};

inline VerifyReport verifyWindow(const ClusterDescription& T, const Window& w, long budget, std::uint64_t seed,
                                 std::size_t maxFailures = 50) {
  if (budget <= 0) throw DomainError("budget must be positive");
  VerifyReport rep;
  std::set<Interval> seen;
  auto check = [&](const Interval& m) {
    if (!seen.insert(m).second) return;
    ++rep.checked;
    if (member(T, m)) {
      ++rep.members;
    } else if (incompatibleWitness(T, m)) {
      ++rep.witnessed;
    } else if (rep.failures.size() < maxFailures) {
      rep.failures.push_back(m);
    }
  };

  for (const auto* list : {&T.added, &T.removed}) std::for_each(list->begin(), list->end(), check);
  for (const auto& f : T.families)
    if (auto fin = std::dynamic_pointer_cast<const FiniteFamily>(f)) std::for_each(fin->items().begin(), fin->items().end(), check);

  auto coarse = doubledPoints(coarseValues(T, w));
  for (std::size_t i = 0; i < coarse.size(); ++i)
    for (std::size_t j = i + 1; j < coarse.size(); ++j)
      if (auto m = Interval::tryMake(coarse[i], coarse[j])) check(*m);

  auto pts = doubledPoints(criticalValues(T, w));
  std::size_t n = pts.size();
  if (n * (n - 1) / 2 <= static_cast<std::size_t>(budget)) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (auto m = Interval::tryMake(pts[i], pts[j])) check(*m);
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    long drawn = 0;
    while (drawn < budget) {
      std::size_t i = pick(rng), j = pick(rng);
      if (i == j) continue;
      if (i > j) std::swap(i, j);
      ++drawn;
      if (auto m = Interval::tryMake(pts[i], pts[j])) check(*m);
    }
  }
  return rep;
}

// Random elements drawn from every family (and the diff), for spot checks.
inline std::vector<Interval> sampleMembers(const ClusterDescription& T, const Window& w, int perFamily,
                                           std::mt19937_64& rng) {
  std::vector<Interval> out;
  for (const auto& f : T.families) f->sample(rng, w, perFamily, out);
  std::vector<Interval> kept;
  for (const auto& m : out)
    if (!sortedContains(T.removed, m)) kept.push_back(m);
  kept.insert(kept.end(), T.added.begin(), T.added.end());
  return kept;
}

// Intervals over the point set on which membership differs.
inline std::vector<Interval> membershipDiff(const ClusterDescription& A, const ClusterDescription& B,
                                            std::vector<DoubledPoint> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<Interval> diff;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (auto m = Interval::tryMake(pts[i], pts[j]); m && member(A, *m) != member(B, *m)) diff.push_back(*m);
  for (const auto* T : {&A, &B})
    for (const auto* list : {&T->added, &T->removed})
      for (const auto& m : *list)
        if (member(A, m) != member(B, m)) diff.push_back(m);
  return diff;
}

// ----------------------------------------------------------------------------

inline Json toJson(const ClusterDescription& T) {
  Json fams = Json::array(), add = Json::array(), rem = Json::array();
  for (const auto& f : T.families) fams.push_back(f->toJson());
  for (const auto& m : T.added) add.push_back(notation(m));
  for (const auto& m : T.removed) rem.push_back(notation(m));
  return Json{{"schemaVersion", kSchemaVersion},
              {"name", T.name},
              {"ladder", {{"lower", T.ladder.lowerLimit().get_str()}, {"upper", T.ladder.upperLimit().get_str()}}},
              {"families", fams},
              {"added", add},
              {"removed", rem}};
}

inline ClusterDescription clusterFromJson(const Json& j) {
  if (!j.is_object() || !j.contains("families")) throw ParseError("cluster description needs families");
  ClusterDescription T;
  T.name = j.value("name", "");
  if (j.contains("ladder"))
    T.ladder = Ladder(rationalFromJson(j["ladder"].at("lower")), rationalFromJson(j["ladder"].at("upper")));
  for (const auto& f : j["families"]) T.families.push_back(familyFromJson(f));
  if (j.contains("added"))
    for (const auto& m : j["added"]) sortedInsert(T.added, intervalFromJson(m));
  if (j.contains("removed"))
    for (const auto& m : j["removed"]) sortedInsert(T.removed, intervalFromJson(m));
  return T;
}

inline Json toJson(const VerifyReport& r) {
  Json f = Json::array();
  for (const auto& m : r.failures) f.push_back(notation(m));
  return Json{{"schemaVersion", kSchemaVersion},
              {"checked", r.checked},
              {"members", r.members},
              {"witnessed", r.witnessed},
              {"failures", f}};
}

}  // namespace ecluster
