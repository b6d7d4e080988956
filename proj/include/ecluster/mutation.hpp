#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "cluster.hpp"

namespace ecluster {

struct MutationResult {
  Interval removed;
  Interval added;
  std::vector<Interval> middle;
  bool removedIsSub = true;  // direction of the exchange extension
  ClusterDescription newCluster;
};

// Every valid interval over the local point set of V that is E-incompatible with V.
inline std::vector<Interval> candidateReplacements(const ClusterDescription& T, const Interval& V) {
  if (!member(T, V)) throw DomainError(notation(V) + " is not in the cluster");
  const Exclusions self{V};
  const DoubledPoint &l = V.left(), &r = V.right();
  std::vector<DoubledPoint> pts{l, r, l.flipped(), r.flipped(), DoubledPoint::negInf(), DoubledPoint::posInf()};
  for (const Extreme& e : {extremeAt(T, End::Left, l, PointRange::above(r), Dir::Min, self),
                           extremeAt(T, End::Right, r, PointRange::between(l, r), Dir::Min, self),
                           extremeAt(T, End::Right, r, PointRange::below(l), Dir::Max, self),
                           extremeAt(T, End::Left, l, PointRange::between(l, r), Dir::Max, self)})
    if (e.any && e.attained) pts.push_back(e.bound);
  std::vector<DoubledPoint> valid;
  for (const auto& p : pts)
    if (p.valid()) valid.push_back(p);
  std::sort(valid.begin(), valid.end());
  valid.erase(std::unique(valid.begin(), valid.end()), valid.end());

  std::vector<Interval> out;
  for (std::size_t i = 0; i < valid.size(); ++i)
    for (std::size_t j = i + 1; j < valid.size(); ++j)
      if (auto w = Interval::tryMake(valid[i], valid[j]); w && *w != V && !eCompatible(V, *w)) out.push_back(*w);
  return out;
}

inline MutationResult mutate(const ClusterDescription& T, const Interval& V) {
  std::vector<Interval> survivors;
  const Exclusions self{V};
  for (const auto& w : candidateReplacements(T, V))
    if (!incompatibleWitness(T, w, self)) survivors.push_back(w);
  if (survivors.empty()) throw NotMutable(notation(V) + " is not E-mutable");
  if (survivors.size() > 1) {
    std::string list;
    for (const auto& w : survivors) list += " " + notation(w);
    throw AmbiguousExchange("several replacements for " + notation(V) + ":" + list);
  }

  MutationResult res{V, survivors.front(), {}, true, T};
  const Interval& W = res.added;
  ExtDirection dir = extDirection(V, W);
  res.removedIsSub = dir == ExtDirection::VSub;
  res.middle = res.removedIsSub ? exchangeMiddle(V, W).middle : exchangeMiddle(W, V).middle;

  ClusterDescription& N = res.newCluster;
  if (sortedContains(N.removed, W)) sortedErase(N.removed, W);
  if (!familiesContain(N, W) || sortedContains(N.removed, W)) sortedInsert(N.added, W);
  if (sortedContains(N.added, V))
    sortedErase(N.added, V);
  if (familiesContain(N, V)) sortedInsert(N.removed, V);
  return res;
}

inline bool isMutable(const ClusterDescription& T, const Interval& V) {
  try {
    mutate(T, V);
    return true;
  } catch (const NotMutable&) {
    return false;
  }
}

inline Json toJson(const MutationResult& r, bool withCluster = true) {
  Json mid = Json::array();
  for (const auto& m : r.middle) mid.push_back(notation(m));
  Json j{{"schemaVersion", kSchemaVersion},
         {"removed", notation(r.removed)},
         {"added", notation(r.added)},
         {"middle", mid},
         {"sub", notation(r.removedIsSub ? r.removed : r.added)},
         {"quotient", notation(r.removedIsSub ? r.added : r.removed)}};
  if (withCluster) j["newCluster"] = toJson(r.newCluster);
  return j;
}

}  // namespace ecluster
