#pragma once

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "cluster.hpp"

namespace ecluster {

// Vertices of the (n+3)-gon are labelled 1..n+3 counterclockwise.
struct Diagonal {
  long i = 0, j = 0;

  friend auto operator<=>(const Diagonal&, const Diagonal&) = default;
  std::string str() const { return std::to_string(i) + "-" + std::to_string(j); }
};

inline bool isDiagonal(long n, const Diagonal& d) {
  return 1 <= d.i && d.i < d.j && d.j <= n + 3 && d.j - d.i >= 2 && !(d.i == 1 && d.j == n + 3);
}

inline bool diagonalsCross(const Diagonal& a, const Diagonal& b) {
  return (a.i < b.i && b.i < a.j && a.j < b.j) || (b.i < a.i && a.i < b.j && b.j < a.j);
}

struct Triangulation {
  long n = 0;
  std::vector<Diagonal> diagonals;  // sorted

  friend bool operator==(const Triangulation&, const Triangulation&) = default;
  friend auto operator<=>(const Triangulation&, const Triangulation&) = default;

  bool contains(const Diagonal& d) const { return std::binary_search(diagonals.begin(), diagonals.end(), d); }

  std::string str() const {
    std::string s;
    for (const auto& d : diagonals) s += (s.empty() ? "" : ",") + d.str();
    return s;
  }
};

inline std::vector<Diagonal> allDiagonals(long n) {
  std::vector<Diagonal> out;
  for (long i = 1; i <= n + 3; ++i)
    for (long j = i + 2; j <= n + 3; ++j)
      if (isDiagonal(n, {i, j})) out.push_back({i, j});
  return out;
}

inline void validate(const Triangulation& t) {
  if (t.n < 1) throw DomainError("polygon needs n >= 1");
  if (static_cast<long>(t.diagonals.size()) != t.n)
    throw DomainError("a triangulation of the " + std::to_string(t.n + 3) + "-gon has " + std::to_string(t.n) +
                      " diagonals");
  for (std::size_t a = 0; a < t.diagonals.size(); ++a) {
    if (!isDiagonal(t.n, t.diagonals[a])) throw DomainError("not a diagonal: " + t.diagonals[a].str());
    for (std::size_t b = a + 1; b < t.diagonals.size(); ++b)
      if (diagonalsCross(t.diagonals[a], t.diagonals[b]))
        throw DomainError(t.diagonals[a].str() + " crosses " + t.diagonals[b].str());
  }
}

inline Triangulation makeTriangulation(long n, std::vector<Diagonal> ds) {
  std::sort(ds.begin(), ds.end());
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
  Triangulation t{n, std::move(ds)};
  validate(t);
  return t;
}

inline Triangulation fanTriangulation(long n) {
  std::vector<Diagonal> ds;
  for (long k = 3; k <= n + 2; ++k) ds.push_back({1, k});
  return makeTriangulation(n, ds);
}

inline Diagonal parseDiagonal(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  auto dash = s.find_first_of("-");
  if (dash == std::string::npos || dash == 0) throw ParseError("diagonal must look like i-j: " + text);
  try {
    std::size_t used = 0;
    long i = std::stol(s.substr(0, dash)), j = std::stol(s.substr(dash + 1), &used);
    if (used != s.size() - dash - 1) throw ParseError("bad diagonal: " + text);
    return {std::min(i, j), std::max(i, j)};
  } catch (const std::logic_error&) {
    throw ParseError("bad diagonal: " + text);
  }
}

inline std::vector<Diagonal> parseDiagonalList(const std::string& text) {
  std::vector<Diagonal> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parseDiagonal(item));
  return out;
}

// All triangulations of the polygon on vertices a..b (with edge a-b).
inline void triangulationsOf(long a, long b, std::vector<std::vector<Diagonal>>& out) {
  if (b - a < 2) {
    out.push_back({});
    return;
  }
  for (long k = a + 1; k < b; ++k) {
    std::vector<std::vector<Diagonal>> left, right;
    triangulationsOf(a, k, left);
    triangulationsOf(k, b, right);
    for (const auto& l : left)
      for (const auto& r : right) {
        std::vector<Diagonal> ds = l;
        ds.insert(ds.end(), r.begin(), r.end());
        if (k - a >= 2) ds.push_back({a, k});
        if (b - k >= 2) ds.push_back({k, b});
        out.push_back(std::move(ds));
      }
  }
}

inline std::vector<Triangulation> enumerateTriangulations(long n) {
  if (n < 1 || n > 12) throw DomainError("enumeration supports 1 <= n <= 12");
  std::vector<std::vector<Diagonal>> raw;
  triangulationsOf(1, n + 3, raw);
  std::vector<Triangulation> out;
  for (auto& ds : raw) out.push_back(makeTriangulation(n, std::move(ds)));
  std::sort(out.begin(), out.end());
  return out;
}

// The unique other diagonal completing T minus d, found by brute force.
inline Diagonal flipPartner(const Triangulation& t, const Diagonal& d) {
  if (!t.contains(d)) throw DomainError(d.str() + " is not in the triangulation");
  std::vector<Diagonal> found;
  for (const auto& e : allDiagonals(t.n)) {
    if (e == d || t.contains(e)) continue;
    bool ok = true;
    for (const auto& f : t.diagonals)
      if (f != d && diagonalsCross(e, f)) ok = false;
    if (ok) found.push_back(e);
  }
  if (found.size() != 1) throw AmbiguousExchange("flip of " + d.str() + " is not unique");
  return found.front();
}

inline std::pair<Triangulation, Diagonal> flip(const Triangulation& t, const Diagonal& d) {
  Diagonal e = flipPartner(t, d);
  std::vector<Diagonal> ds;
  for (const auto& f : t.diagonals)
    if (f != d) ds.push_back(f);
  ds.push_back(e);
  return {makeTriangulation(t.n, ds), e};
}

struct FlipGraph {
  std::vector<Triangulation> nodes;
  std::vector<std::vector<std::size_t>> adjacency;

  bool connected() const {
    if (nodes.empty()) return true;
    std::vector<bool> seen(nodes.size());
    std::queue<std::size_t> q;
    q.push(0);
    seen[0] = true;
    std::size_t count = 1;
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      for (auto v : adjacency[u])
        if (!seen[v]) seen[v] = true, ++count, q.push(v);
    }
    return count == nodes.size();
  }

  bool regular(std::size_t degree) const {
    return std::all_of(adjacency.begin(), adjacency.end(), [&](const auto& a) { return a.size() == degree; });
  }
};

inline FlipGraph flipGraph(long n) {
  if (n > 10) throw DomainError("flipGraph supports n <= 10");
  FlipGraph g;
  g.nodes = enumerateTriangulations(n);
  std::map<Triangulation, std::size_t> index;
  for (std::size_t k = 0; k < g.nodes.size(); ++k) index[g.nodes[k]] = k;
  g.adjacency.resize(g.nodes.size());
  for (std::size_t k = 0; k < g.nodes.size(); ++k)
    for (const auto& d : g.nodes[k].diagonals) g.adjacency[k].push_back(index.at(flip(g.nodes[k], d).first));
  return g;
}

// M_{i-j} := M_(a_i, a_j).
inline Interval embedDiagonal(const Ladder& L, const Diagonal& d) { return Interval::open(L.value(d.i), L.value(d.j)); }

inline ClusterDescription embedTriangulation(const Ladder& L, const Triangulation& t) {
  ClusterDescription T = buildTn(L, t.n);
  T.name = "polygon";
  std::vector<Interval> images;
  for (const auto& d : t.diagonals) images.push_back(embedDiagonal(L, d));
  T.families.push_back(std::make_shared<FiniteFamily>(std::move(images)));
  return T;
}

// Ladder points around the polygon, both limits and the infinities: the
// points on which two embedded clusters are compared.
inline std::vector<DoubledPoint> polygonCriticalPoints(const Ladder& L, long n) {
  std::vector<Rational> v{L.lowerLimit(), L.upperLimit()};
  for (long i = -2; i <= n + 5; ++i) v.push_back(L.value(i));
  return doubledPoints(v);
}

inline Json toJson(const Triangulation& t) {
  Json ds = Json::array();
  for (const auto& d : t.diagonals) ds.push_back(d.str());
  return Json{{"schemaVersion", kSchemaVersion}, {"n", t.n}, {"diagonals", ds}};
}

inline Triangulation triangulationFromJson(const Json& j) {
  std::vector<Diagonal> ds;
  for (const auto& d : j.at("diagonals")) ds.push_back(parseDiagonal(jsonText(d, "diagonal")));
  return makeTriangulation(j.at("n").get<long>(), ds);
}

}  // namespace ecluster
