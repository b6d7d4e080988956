#pragma once

#include <vector>

#include "error.hpp"
#include "ordered_line.hpp"

namespace ecluster {

// [P_top] - [P_bottom], where P_p is the projective with support (-inf, p)
// in the doubled line.
struct GVector {
  DoubledPoint top;
  DoubledPoint bottom;
};

// Straight orientation: the minimal presentation of M_(l,r) is P_l -> P_r.
inline GVector gVector(const Interval& v) { return {v.right(), v.left()}; }

inline bool homProjNonzero(const DoubledPoint& p, const DoubledPoint& q) { return q <= p; }

inline int eulerPairing(const GVector& g, const GVector& h) {
  auto hom = [](const DoubledPoint& p, const DoubledPoint& q) { return homProjNonzero(p, q) ? 1 : 0; };
  return hom(g.top, h.top) - hom(g.top, h.bottom) - hom(g.bottom, h.top) + hom(g.bottom, h.bottom);
}

inline bool eCompatibleEuler(const Interval& v, const Interval& w) {
  GVector g = gVector(v), h = gVector(w);
  return eulerPairing(g, h) >= 0 && eulerPairing(h, g) >= 0;
}

inline bool crosses(const Interval& v, const Interval& w) {
  return v.left() < w.left() && w.left() < v.right() && v.right() < w.right();
}

inline bool eCompatibleGeometric(const Interval& v, const Interval& w) {
  if (crosses(v, w) || crosses(w, v)) return false;
  return !(v.right() == w.left() || w.right() == v.left());
}

inline bool eCompatible(const Interval& v, const Interval& w) { return eCompatibleGeometric(v, w); }

enum class ExtDirection { None, VSub, WSub };

inline ExtDirection extDirection(const Interval& v, const Interval& w) {
  if (crosses(v, w) || v.right() == w.left()) return ExtDirection::VSub;
  if (crosses(w, v) || w.right() == v.left()) return ExtDirection::WSub;
  return ExtDirection::None;
}

struct ExtWitness {
  Interval sub;
  Interval quotient;
  std::vector<Interval> middle;
};

inline ExtWitness exchangeMiddle(const Interval& sub, const Interval& quot) {
  if (extDirection(sub, quot) != ExtDirection::VSub)
    throw NotAnExtension("no extension with " + notation(sub) + " as subobject of " + notation(quot));
  ExtWitness w{sub, quot, {}};
  w.middle.emplace_back(sub.left(), quot.right());
  if (crosses(sub, quot)) w.middle.emplace_back(quot.left(), sub.right());
  return w;
}

// Degenerate objects sit on the boundary of the AR strip.
inline bool isDegenerate(const Interval& v) {
  return v.isSingleton() || (v.left().value.isNegInf() && v.right().value.isPosInf());
}

}  // namespace ecluster
