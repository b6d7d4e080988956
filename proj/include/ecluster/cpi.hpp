#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cluster.hpp"

namespace ecluster {

// M(x, y) in the strip |y - x| < 1 (coordinates in units of pi).
struct CPiObject {
  Rational x, y;

  friend bool operator==(const CPiObject& a, const CPiObject& b) { return a.x == b.x && a.y == b.y; }
  std::string str() const { return "M(" + x.get_str() + "," + y.get_str() + ")"; }
};

inline bool inStrip(const CPiObject& u) { return abs(Rational(u.y - u.x)) < 1; }

// Fundamental domain: x >= 0, y < 1.
inline bool inFundamentalDomain(const CPiObject& u) { return inStrip(u) && u.x >= 0 && u.y < 1; }

inline CPiObject shift(const CPiObject& u, long n = 1) {
  CPiObject v = u;
  for (long k = 0; k < n; ++k) v = {v.y + 1, v.x + 1};
  for (long k = 0; k > n; --k) v = {v.y - 1, v.x - 1};
  return v;
}

inline CPiObject reduce(const CPiObject& u) {
  if (!inStrip(u)) throw DomainError(u.str() + " lies outside the strip");
  long base = -2 * (toLong(floorOf(u.x)) / 2) - 4;
  for (long n = base; n <= base + 8; ++n)
    if (CPiObject v = shift(u, n); inFundamentalDomain(v)) return v;
  throw DomainError("no representative of " + u.str() + " in the fundamental domain");
}

inline void requireDomain(const CPiObject& u) {
  if (!inFundamentalDomain(u)) throw DomainError(u.str() + " is not in the fundamental domain");
}

// Hom support in D_r: x1 <= x2 < y1 + r and y1 <= y2 < x1 + r.
inline bool dpiHomNonzero(const CPiObject& X, const CPiObject& Y, const Rational& r = 1) {
  return X.x <= Y.x && Y.x < X.y + r && X.y <= Y.y && Y.y < X.x + r;
}

inline bool nrIncompatible(const CPiObject& u, const CPiObject& v) {
  auto one = [](const CPiObject& p, const CPiObject& q) { return p.x < q.x && q.x < p.y + 1 && p.y < q.y; };
  return one(u, v) || one(v, u);
}

// Rectangle search: some shift of one object sits strictly up-right of the
// other inside its Hom support.
inline bool nrIncompatibleDirect(const CPiObject& u, const CPiObject& v, long reach = 2) {
  for (long n = -reach; n <= reach; ++n)
    for (const auto& [A, B] : {std::pair{u, v}, std::pair{v, u}}) {
      CPiObject S = shift(B, n);
      if (A.x < S.x && A.y < S.y && dpiHomNonzero(A, S, 1)) return true;
    }
  return false;
}

// Order-preserving charts (-1,1) <-> R used for exact endpoints.
inline Rational psi(const Rational& u) { return u / (1 - abs(u)); }
inline Rational chi(const Rational& t) { return t / (1 + abs(t)); }

// f(x, y) = M_(a, b) with a = tan((x-1) pi/2), b = tan(y pi/2), realised
// exactly through the chart psi, which has the same order type.
inline Interval fMapSymbolic(const CPiObject& u) {
  requireDomain(u);
  ExtRational a = u.x == 0 ? ExtRational::negInf() : ExtRational(psi(u.x - 1));
  return Interval::open(a, psi(u.y));
}

inline CPiObject fInverseSymbolic(const Interval& m) {
  if (!m.isOpen() || !m.right().value.finite())
    throw DomainError(notation(m) + " is not the image of an object of C_pi");
  Rational x = m.left().value.isNegInf() ? Rational(0) : Rational(1 + chi(m.left().value.value()));
  return {x, chi(m.right().value.value())};
}

inline double toDouble(const Rational& q) { return q.get_d(); }

struct NumericInterval {
  double a, b;  // a may be -infinity
};

inline NumericInterval fMap(const CPiObject& u) {
  requireDomain(u);
  const double pi = std::numbers::pi;
  double a = u.x == 0 ? -std::numeric_limits<double>::infinity() : std::tan((toDouble(u.x) - 1) * pi / 2);
  return {a, std::tan(toDouble(u.y) * pi / 2)};
}

struct NumericCPi {
  double x, y;
};

inline NumericCPi fInverse(double a, double b) {
  if (!(a < b) || std::isinf(b) || std::isnan(a) || std::isnan(b))
    throw DomainError("fInverse needs -inf <= a < b < +inf");
  const double pi = std::numbers::pi;
  double alpha = std::atan(b) + std::atan(a) + pi / 2;
  double beta = std::atan(b) - std::atan(a) - pi / 2;
  return {(alpha - beta) / pi, (alpha + beta) / pi};
}

// ----------------------------------------------------------------------------
// N_R-cluster oracles and the embedding T_{E_R}.

struct NROracle {
  enum class Kind { Finite, VerticalLine, Preimage } kind = Kind::Finite;
  std::vector<CPiObject> objects;
  Rational x0 = 0;
  ClusterDescription source;

  static NROracle finite(std::vector<CPiObject> objs) {
    NROracle o;
    o.objects = std::move(objs);
    for (const auto& u : o.objects) requireDomain(u);
    return o;
  }
  static NROracle verticalLine(Rational x0) {
    if (x0 < 0 || x0 >= 2) throw DomainError("vertical line needs 0 <= x0 < 2");
    NROracle o;
    o.kind = Kind::VerticalLine;
    o.x0 = std::move(x0);
    return o;
  }
  // The objects whose images are the open members of an (undiffed) description.
  static NROracle preimage(ClusterDescription T) {
    if (!T.added.empty() || !T.removed.empty())
      throw UnsupportedOracle("preimage oracles need a description without a diff");
    NROracle o;
    o.kind = Kind::Preimage;
    o.source = std::move(T);
    return o;
  }
};

struct ImageSet {
  Ladder ladder;
  std::vector<FamilyPtr> families;  // open intervals with finite right end only
};

inline ImageSet images(const NROracle& o) {
  ImageSet s;
  switch (o.kind) {
    case NROracle::Kind::Finite: {
      std::vector<Interval> items;
      for (const auto& u : o.objects) items.push_back(fMapSymbolic(u));
      s.families.push_back(std::make_shared<FiniteFamily>(std::move(items)));
      break;
    }
    case NROracle::Kind::VerticalLine: {
      ExtRational a0 = o.x0 == 0 ? ExtRational::negInf() : ExtRational(psi(o.x0 - 1));
      s.families.push_back(std::make_shared<SweepFamily>(DoubledPoint(a0, Side::Plus), End::Right, Side::Minus,
                                                         ValueRange{a0, false, ExtRational::posInf(), false}));
      break;
    }
    case NROracle::Kind::Preimage: {
      s.ladder = o.source.ladder;
      for (const auto& f : o.source.families) {
        if (auto fin = std::dynamic_pointer_cast<const FiniteFamily>(f)) {
          std::vector<Interval> items;
          for (const auto& m : fin->items())
            if (m.isOpen() && m.right().value.finite()) items.push_back(m);
          if (!items.empty()) s.families.push_back(std::make_shared<FiniteFamily>(std::move(items)));
        } else if (std::dynamic_pointer_cast<const DyadicFamily>(f) || std::dynamic_pointer_cast<const FanFamily>(f) ||
                   std::dynamic_pointer_cast<const IntegerProjectivesFamily>(f)) {
          s.families.push_back(f);
        } else if (std::dynamic_pointer_cast<const SingletonFamily>(f) ||
                   std::dynamic_pointer_cast<const ComplementSingletonsFamily>(f)) {
          continue;
        } else {
          throw UnsupportedOracle("no preimage for family kind " + f->kind());
        }
      }
      break;
    }
  }
  return s;
}

inline bool oracleContains(const NROracle& o, const CPiObject& u) {
  Interval m = fMapSymbolic(u);
  for (const auto& f : images(o).families)
    if (f->contains(m)) return true;
  return false;
}

namespace detail {

inline bool anyAt(const std::vector<FamilyPtr>& fs, End end, const DoubledPoint& p, const PointRange& r) {
  auto hit = [](const Interval&) { return true; };
  for (const auto& f : fs)
    if (f->visitAt(end, p, r, hit)) return true;
  return false;
}

inline bool satisfactoryA(const std::vector<FamilyPtr>& fs, const ExtRational& a, const ExtRational& b) {
  if (a.isNegInf()) return true;
  return anyAt(fs, End::Right, {a, Side::Minus}, PointRange::all()) ||
         anyAt(fs, End::Left, {a, Side::Plus}, PointRange::above({b, Side::Minus}));
}

inline bool satisfactoryB(const std::vector<FamilyPtr>& fs, const ExtRational& a, const ExtRational& b) {
  return anyAt(fs, End::Left, {b, Side::Plus}, PointRange::all()) ||
         anyAt(fs, End::Right, {b, Side::Minus}, PointRange::below({a, Side::Plus}));
}

}  // namespace detail

// tau(a, b) for a single image M_(a, b).
inline std::vector<Interval> tauOf(const std::vector<FamilyPtr>& fs, const Interval& m) {
  const ExtRational &a = m.left().value, &b = m.right().value;
  bool sa = detail::satisfactoryA(fs, a, b), sb = detail::satisfactoryB(fs, a, b);
  if (sa && sb) return {};
  if (sa) return {Interval(m.left(), {b, Side::Plus})};
  if (sb) return {Interval({a, Side::Minus}, m.right())};
  return {Interval({a, Side::Minus}, {b, Side::Plus}), Interval({a, Side::Minus}, m.right())};
}

struct TauReport {
  std::vector<Interval> finite;
  std::vector<FamilyPtr> families;
  std::optional<Interval> injective;  // I_(b when the open projectives have a maximum
};

inline TauReport computeTau(const ImageSet& img) {
  const auto& fs = img.families;
  TauReport out;
  std::optional<Interval> pmax;
  Extreme top = Extreme::none();
  for (const auto& f : fs) absorb(top, f->extremeAt(End::Left, DoubledPoint::negInf(), PointRange::all(), Dir::Max), Dir::Max);
  if (top.any && top.attained && top.bound.value.finite()) {
    pmax = Interval(DoubledPoint::negInf(), top.bound);
    out.injective = Interval({top.bound.value, Side::Plus}, DoubledPoint::posInf());
  }
  auto addTau = [&](const Interval& m) {
    if (pmax && m == *pmax) return;
    for (auto& t : tauOf(fs, m)) out.finite.push_back(t);
  };
  auto hasLadderRungs = [&](const Ladder& L) {
    for (const auto& f : fs)
      if (auto d = std::dynamic_pointer_cast<const DyadicFamily>(f))
        if (d->rungs().kind() == RungSystem::Kind::Ladder && d->rungs().ladder() == L) return true;
    return false;
  };
  auto hasIntegerRungs = [&](const IntegerRays& r) {
    for (const auto& f : fs)
      if (auto d = std::dynamic_pointer_cast<const DyadicFamily>(f))
        if (d->rungs().kind() == RungSystem::Kind::Integer && d->rungs().rays().lower == r.lower &&
            d->rungs().rays().upper == r.upper)
          return true;
    return false;
  };

  for (const auto& f : fs) {
    if (auto fin = std::dynamic_pointer_cast<const FiniteFamily>(f)) {
      for (const auto& m : fin->items()) addTau(m);
    } else if (auto d = std::dynamic_pointer_cast<const DyadicFamily>(f)) {
      // Inner pieces are covered by their neighbours and parents; only whole
      // rungs missing a neighbouring rung need a look.
      const auto& rs = d->rungs();
      switch (rs.kind()) {
        case RungSystem::Kind::Ladder: break;
        case RungSystem::Kind::Integer: {
          const auto& rays = rs.rays();
          addTau(Interval::open(Rational(rays.lower - 1), Rational(rays.lower)));
          addTau(Interval::open(Rational(rays.upper), Rational(rays.upper + 1)));
          break;
        }
        case RungSystem::Kind::Single: {
          addTau(Interval::open(rs.lo(), rs.hi()));
          break;
        }
      }
    } else if (auto fan = std::dynamic_pointer_cast<const FanFamily>(f)) {
      if (!hasLadderRungs(fan->ladder())) throw UnsupportedOracle("fan images need the ladder rungs alongside");
      const auto& ix = fan->indices();
      if (ix.empty) continue;
      bool left = fan->side() == FanSide::Left;
      std::optional<long> extreme = left ? ix.lo : ix.hi;
      if (!extreme) continue;
      Interval m = left ? Interval::open(fan->ladder().value(*extreme), fan->apex())
                        : Interval::open(fan->apex(), fan->ladder().value(*extreme));
      addTau(m);
    } else if (auto ip = std::dynamic_pointer_cast<const IntegerProjectivesFamily>(f)) {
      if (!hasIntegerRungs(ip->rays())) throw UnsupportedOracle("integer projectives need the integer rungs alongside");
      addTau(Interval::projectiveOpen(Rational(ip->rays().lower)));
    } else if (auto sw = std::dynamic_pointer_cast<const SweepFamily>(f)) {
      if (sw->varEnd() != End::Right || sw->varSide() != Side::Minus || sw->fixed().side != Side::Plus)
        throw UnsupportedOracle("only sweeps of open intervals with a fixed left end are supported");
      std::vector<std::shared_ptr<const FiniteFamily>> others;
      for (const auto& g : fs) {
        if (g == f) continue;
        auto gf = std::dynamic_pointer_cast<const FiniteFamily>(g);
        if (!gf) throw UnsupportedOracle("sweeps combine with finite image sets only");
        others.push_back(gf);
      }
      const ExtRational& a0 = sw->fixed().value;
      const ValueRange& vr = sw->values();
      bool constA = a0.isNegInf() || detail::anyAt(fs, End::Right, {a0, Side::Minus}, PointRange::all());
      Extreme sup = Extreme::none();
      for (const auto& g : fs) absorb(sup, g->extremeAt(End::Left, sw->fixed(), PointRange::all(), Dir::Max), Dir::Max);
      // Split the sweep at values where the b-side might be satisfied and at
      // the threshold above which the a-side stops being satisfied.
      std::set<ExtRational> cuts;
      for (const auto& g : others)
        for (const auto& m : g->items()) {
          cuts.insert(m.left().value);
          if (m.left() < sw->fixed()) cuts.insert(m.right().value);
        }
      if (sup.any) cuts.insert(sup.bound.value);
      std::vector<ExtRational> pts;
      for (const auto& c : cuts)
        if (vr.contains(c) || (c > vr.lo && c < vr.hi)) pts.push_back(c);
      for (const auto& c : pts)
        if (vr.contains(c)) addTau(Interval(sw->fixed(), {c, Side::Minus}));
      std::vector<ValueRange> pieces;
      ExtRational lo = vr.lo;
      bool loIncl = vr.loIncl;
      for (const auto& c : pts) {
        pieces.push_back({lo, loIncl, c, false});
        lo = c;
        loIncl = false;
      }
      pieces.push_back({lo, loIncl, vr.hi, vr.hiIncl});
      for (const auto& piece : pieces) {
        if (piece.empty()) continue;
        ValueStream s(piece);
        ExtRational rep = *s.next();
        bool sa = constA || (sup.any && DoubledPoint(rep, Side::Minus) < sup.bound);
        if (sa) {
          out.families.push_back(std::make_shared<SweepFamily>(sw->fixed(), End::Right, Side::Plus, piece));
        } else {
          DoubledPoint closed(a0, Side::Minus);
          out.families.push_back(std::make_shared<SweepFamily>(closed, End::Right, Side::Plus, piece));
          out.families.push_back(std::make_shared<SweepFamily>(closed, End::Right, Side::Minus, piece));
        }
      }
    } else {
      throw UnsupportedOracle("no tau rule for image family kind " + f->kind());
    }
  }
  return out;
}

inline ClusterDescription buildTER(const NROracle& o) {
  ImageSet img = images(o);
  TauReport tau = computeTau(img);
  ClusterDescription T;
  T.name = "t-e-r";
  T.ladder = img.ladder;
  T.families = img.families;
  T.families.push_back(std::make_shared<ComplementSingletonsFamily>(img.families));
  for (const auto& f : tau.families) T.families.push_back(f);
  std::vector<Interval> extra = tau.finite;
  extra.push_back(Interval::projectiveInf());
  if (tau.injective) extra.push_back(*tau.injective);
  T.families.push_back(std::make_shared<FiniteFamily>(std::move(extra)));
  return T;
}

inline Json toJson(const CPiObject& u) { return Json{{"x", u.x.get_str()}, {"y", u.y.get_str()}}; }

inline CPiObject cpiFromJson(const Json& j) {
  if (!j.is_object() || !j.contains("x") || !j.contains("y")) throw ParseError("C_pi object needs x and y");
  return {rationalFromJson(j["x"]), rationalFromJson(j["y"])};
}

inline NROracle oracleFromJson(const Json& j) {
  std::string kind = j.contains("kind") ? jsonText(j["kind"], "kind") : "finite";
  if (kind == "finite") {
    std::vector<CPiObject> objs;
    for (const auto& u : j.at("objects")) objs.push_back(cpiFromJson(u));
    return NROracle::finite(std::move(objs));
  }
  if (kind == "vertical-line") return NROracle::verticalLine(rationalFromJson(j.at("x0")));
  if (kind == "preimage") return NROracle::preimage(clusterFromJson(j.at("cluster")));
  throw ParseError("unknown oracle kind: " + kind);
}

}  // namespace ecluster
