#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cluster.hpp"

namespace ecluster {

struct Arc {
  long i = 0, j = 0;

  friend auto operator<=>(const Arc&, const Arc&) = default;
  std::string str() const { return std::to_string(i) + "-" + std::to_string(j); }
};

inline bool isArc(const Arc& a) { return a.i < a.j && a.j - a.i >= 2; }

inline bool arcsCross(const Arc& a, const Arc& b) {
  return (a.i < b.i && b.i < a.j && a.j < b.j) || (b.i < a.i && a.i < b.j && b.j < a.j);
}

// A finite set of arcs plus tails: a left tail (m, i0) is {i-m : i <= i0},
// a right tail (n, j0) is {n-j : j >= j0}.
struct ArcSetDescription {
  std::set<Arc> finite;
  std::vector<std::pair<long, long>> leftTails;
  std::vector<std::pair<long, long>> rightTails;

  bool hasArc(const Arc& a) const {
    if (finite.count(a)) return true;
    for (auto [m, i0] : leftTails)
      if (a.j == m && a.i <= i0) return true;
    for (auto [n, j0] : rightTails)
      if (a.i == n && a.j >= j0) return true;
    return false;
  }

  // Arcs and the boundary edges k-(k+1).
  bool joined(long x, long y) const {
    if (x > y) std::swap(x, y);
    return y - x == 1 || (y - x >= 2 && hasArc({x, y}));
  }
};

struct FountainReport {
  enum class Kind { LocallyFinite, Fountain } kind = Kind::LocallyFinite;
  long m = 0, n = 0;
};

inline void validate(const ArcSetDescription& A) {
  for (const auto& a : A.finite)
    if (!isArc(a)) throw MalformedDescription("not an arc: " + a.str());
  for (auto it = A.finite.begin(); it != A.finite.end(); ++it)
    for (auto jt = std::next(it); jt != A.finite.end(); ++jt)
      if (arcsCross(*it, *jt)) throw MalformedDescription(it->str() + " crosses " + jt->str());
  for (auto [m, i0] : A.leftTails) {
    if (i0 > m - 2) throw MalformedDescription("left tail at " + std::to_string(m) + " starts too close");
    for (const auto& a : A.finite)
      if ((a.i < m && m < a.j) || (a.j < m && a.i + 1 <= std::min(a.j - 1, i0)))
        throw MalformedDescription(a.str() + " crosses the left tail at " + std::to_string(m));
  }
  for (auto [n, j0] : A.rightTails) {
    if (j0 < n + 2) throw MalformedDescription("right tail at " + std::to_string(n) + " starts too close");
    for (const auto& a : A.finite)
      if ((a.i < n && n < a.j) || (a.i > n && std::max(a.i + 1, j0) <= a.j - 1))
        throw MalformedDescription(a.str() + " crosses the right tail at " + std::to_string(n));
  }
}

inline FountainReport fountainReport(const ArcSetDescription& A) {
  std::set<long> lefts, rights;
  for (auto [m, i0] : A.leftTails) lefts.insert(m);
  for (auto [n, j0] : A.rightTails) rights.insert(n);
  if (lefts.size() > 1) throw MalformedDescription("left-fountains at two distinct vertices");
  if (rights.size() > 1) throw MalformedDescription("right-fountains at two distinct vertices");
  if (lefts.empty() != rights.empty())
    throw MalformedDescription("a left-fountain needs a matching right-fountain");
  if (lefts.empty()) return {};
  long m = *lefts.begin(), n = *rights.begin();
  if (m > n) throw MalformedDescription("left-fountain must not lie right of the right-fountain");
  return {FountainReport::Kind::Fountain, m, n};
}

// Whether no described arc passes over vertex l.
inline bool noSkipCheck(const ArcSetDescription& A, long l) {
  for (const auto& a : A.finite)
    if (!(a.i >= l || a.j <= l)) return false;
  for (auto [m, i0] : A.leftTails)
    if (m > l) return false;
  for (auto [n, j0] : A.rightTails)
    if (n < l) return false;
  return true;
}

// The finite arcs of A plus the tail arcs with both ends in [lo, hi].
inline std::vector<Arc> materialize(const ArcSetDescription& A, long lo, long hi) {
  std::vector<Arc> out(A.finite.begin(), A.finite.end());
  for (auto [m, i0] : A.leftTails)
    for (long i = lo; i <= std::min(i0, m - 2); ++i)
      if (m <= hi) out.push_back({i, m});
  for (auto [n, j0] : A.rightTails)
    for (long j = std::max(j0, n + 2); j <= hi; ++j)
      if (n >= lo) out.push_back({n, j});
  return out;
}

// Arcs inside [-B, B] that are missing from A yet cross nothing in it; empty
// when A is maximal on the window.
inline std::vector<Arc> compatibleNonMembers(const ArcSetDescription& A, long B = 12) {
  std::vector<Arc> known = materialize(A, -3 * B, 3 * B), out;
  for (long i = -B; i <= B; ++i)
    for (long j = i + 2; j <= B; ++j) {
      Arc c{i, j};
      if (A.hasArc(c)) continue;
      if (std::none_of(known.begin(), known.end(), [&](const Arc& a) { return arcsCross(a, c); })) out.push_back(c);
    }
  return out;
}

inline Interval embedArc(const Ladder& L, const Arc& a) { return Interval::open(L.value(a.i), L.value(a.j)); }

inline ClusterDescription embedArcSet(const Ladder& L, const ArcSetDescription& A, bool fountainExtras = true) {
  validate(A);
  FountainReport rep = fountainReport(A);
  ClusterDescription T = buildTInfinity(L);
  T.name = "infinity-gon";
  std::vector<Interval> items;
  for (const auto& a : A.finite) items.push_back(embedArc(L, a));
  for (auto [m, i0] : A.leftTails)
    T.families.push_back(std::make_shared<FanFamily>(FanSide::Left, L.value(m), L, std::nullopt, i0));
  for (auto [n, j0] : A.rightTails)
    T.families.push_back(std::make_shared<FanFamily>(FanSide::Right, L.value(n), L, j0, std::nullopt));
  if (rep.kind == FountainReport::Kind::Fountain && fountainExtras) {
    items.push_back(Interval::open(L.lowerLimit(), L.value(rep.m)));
    items.push_back(Interval::open(L.lowerLimit(), L.value(rep.n)));
    items.push_back(Interval::open(L.value(rep.n), L.upperLimit()));
  }
  T.families.push_back(std::make_shared<FiniteFamily>(std::move(items)));
  return T;
}

// Flip a finite arc inside its quadrilateral; `reach` bounds the search for
// the outer vertex.
inline std::pair<ArcSetDescription, Arc> mutateArc(const ArcSetDescription& A, const Arc& a, long reach = 64) {
  validate(A);
  if (!A.finite.count(a)) {
    if (A.hasArc(a)) throw DomainError("mutation at tail arcs is not supported: " + a.str());
    throw DomainError(a.str() + " is not in the arc set");
  }
  std::vector<long> inside, outside;
  for (long k = a.i + 1; k < a.j; ++k)
    if (A.joined(a.i, k) && A.joined(k, a.j)) inside.push_back(k);
  long lo = a.i - reach, hi = a.j + reach;
  for (const auto& b : A.finite) lo = std::min(lo, b.i - reach), hi = std::max(hi, b.j + reach);
  for (long k = lo; k <= hi; ++k)
    if ((k < a.i || k > a.j) && A.joined(a.i, k) && A.joined(a.j, k)) outside.push_back(k);
  if (inside.size() != 1 || outside.size() != 1)
    throw NotMutable(a.str() + " has no flip: the arc set is not locally a triangulation around it");
  Arc b{std::min(inside[0], outside[0]), std::max(inside[0], outside[0])};
  ArcSetDescription out = A;
  out.finite.erase(a);
  out.finite.insert(b);
  return {out, b};
}

// Random triangulation of the polygon on vertices a..b (edge a-b included).
inline void randomTriangulation(long a, long b, std::mt19937_64& rng, std::set<Arc>& out) {
  if (b - a < 2) return;
  std::uniform_int_distribution<long> pick(a + 1, b - 1);
  long k = pick(rng);
  if (k - a >= 2) out.insert({a, k});
  if (b - k >= 2) out.insert({k, b});
  randomTriangulation(a, k, rng, out);
  randomTriangulation(k, b, rng, out);
}

// Left fountain at m, right fountain at n, m-n and a triangulation between.
inline ArcSetDescription fountainCluster(long m, long n, std::mt19937_64& rng) {
  if (m > n) throw DomainError("fountain cluster needs m <= n");
  ArcSetDescription A;
  if (n - m >= 2) A.finite.insert({m, n});
  randomTriangulation(m, n, rng, A.finite);
  A.leftTails.push_back({m, m - 2});
  A.rightTails.push_back({n, n + 2});
  return A;
}

// A window of a locally finite cluster: nested arcs from 0-2 growing one
// vertex at a time on a random side.
inline ArcSetDescription zigZag(long steps, std::mt19937_64& rng) {
  ArcSetDescription A;
  Arc cur{0, 2};
  A.finite.insert(cur);
  std::bernoulli_distribution left(0.5);
  for (long s = 0; s < steps; ++s) {
    cur = left(rng) ? Arc{cur.i - 1, cur.j} : Arc{cur.i, cur.j + 1};
    A.finite.insert(cur);
  }
  return A;
}

inline Arc parseArc(const Json& j) {
  if (j.is_array() && j.size() == 2) return {j[0].get<long>(), j[1].get<long>()};
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    auto dash = s.find('-', 1);
    if (dash == std::string::npos) throw ParseError("arc must look like i-j: " + s);
    try {
      return {std::stol(s.substr(0, dash)), std::stol(s.substr(dash + 1))};
    } catch (const std::logic_error&) {
      throw ParseError("bad arc: " + s);
    }
  }
  throw ParseError("arc must be [i,j] or \"i-j\"");
}

inline ArcSetDescription arcSetFromJson(const Json& j) {
  ArcSetDescription A;
  if (!j.is_object()) throw ParseError("arc set must be an object");
  if (j.contains("finite"))
    for (const auto& a : j["finite"]) A.finite.insert(parseArc(a));
  auto pairs = [&](const char* key, std::vector<std::pair<long, long>>& out) {
    if (!j.contains(key)) return;
    for (const auto& p : j[key]) {
      if (!p.is_array() || p.size() != 2) throw ParseError(std::string(key) + " entries are [vertex, start]");
      out.push_back({p[0].get<long>(), p[1].get<long>()});
    }
  };
  pairs("leftTails", A.leftTails);
  pairs("rightTails", A.rightTails);
  return A;
}

inline Json toJson(const ArcSetDescription& A) {
  Json fin = Json::array(), lt = Json::array(), rt = Json::array();
  for (const auto& a : A.finite) fin.push_back({a.i, a.j});
  for (auto [m, i0] : A.leftTails) lt.push_back({m, i0});
  for (auto [n, j0] : A.rightTails) rt.push_back({n, j0});
  return Json{{"schemaVersion", kSchemaVersion}, {"finite", fin}, {"leftTails", lt}, {"rightTails", rt}};
}

inline Json toJson(const FountainReport& r) {
  if (r.kind == FountainReport::Kind::LocallyFinite) return Json{{"kind", "locally-finite"}};
  return Json{{"kind", "fountain"}, {"m", r.m}, {"n", r.n}};
}

}  // namespace ecluster
