#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "compat.hpp"
#include "json_codec.hpp"

namespace ecluster {

// A range of doubled points with open or closed ends.
struct PointRange {
  DoubledPoint lo = DoubledPoint::negInf();
  bool loIncl = true;
  DoubledPoint hi = DoubledPoint::posInf();
  bool hiIncl = true;

  static PointRange all() { return {}; }
  static PointRange at(const DoubledPoint& p) { return {p, true, p, true}; }
  static PointRange above(const DoubledPoint& p) { return {p, false, DoubledPoint::posInf(), true}; }
  static PointRange below(const DoubledPoint& p) { return {DoubledPoint::negInf(), true, p, false}; }
  static PointRange between(const DoubledPoint& a, const DoubledPoint& b) { return {a, false, b, false}; }

  bool contains(const DoubledPoint& p) const {
    int a = compare(p, lo), b = compare(p, hi);
    return (a > 0 || (a == 0 && loIncl)) && (b < 0 || (b == 0 && hiIncl));
  }

  PointRange intersect(const PointRange& o) const {
    PointRange r = *this;
    int c = compare(o.lo, lo);
    if (c > 0 || (c == 0 && !o.loIncl)) r.lo = o.lo, r.loIncl = o.loIncl;
    c = compare(o.hi, hi);
    if (c < 0 || (c == 0 && !o.hiIncl)) r.hi = o.hi, r.hiIncl = o.hiIncl;
    return r;
  }
};

struct ValueRange {
  ExtRational lo = ExtRational::negInf();
  bool loIncl = true;
  ExtRational hi = ExtRational::posInf();
  bool hiIncl = true;

  bool empty() const {
    int c = compare(lo, hi);
    return c > 0 || (c == 0 && !(loIncl && hiIncl));
  }
  bool contains(const ExtRational& v) const {
    int a = compare(v, lo), b = compare(v, hi);
    return (a > 0 || (a == 0 && loIncl)) && (b < 0 || (b == 0 && hiIncl));
  }
  ValueRange intersect(const ValueRange& o) const {
    ValueRange r = *this;
    int c = compare(o.lo, lo);
    if (c > 0 || (c == 0 && !o.loIncl)) r.lo = o.lo, r.loIncl = o.loIncl;
    c = compare(o.hi, hi);
    if (c < 0 || (c == 0 && !o.hiIncl)) r.hi = o.hi, r.hiIncl = o.hiIncl;
    return r;
  }
};

// Values v such that the doubled point (v, s) is valid and lies in r.
inline ValueRange valuesWithSide(const PointRange& r, Side s) {
  ValueRange v;
  v.lo = r.lo.value;
  v.loIncl = r.loIncl ? s >= r.lo.side : s > r.lo.side;
  v.hi = r.hi.value;
  v.hiIncl = r.hiIncl ? s <= r.hi.side : s < r.hi.side;
  if (s == Side::Minus && v.lo.isNegInf()) v.loIncl = false;
  if (s == Side::Plus && v.hi.isPosInf()) v.hiIncl = false;
  return v;
}

// Lazily lists distinct values of a range: included ends first, then
// interior values marching toward the lower end (or outward when unbounded).
class ValueStream {
 public:
  explicit ValueStream(ValueRange r) : r_(std::move(r)), empty_(r_.empty()) {}

  std::optional<ExtRational> next() {
    if (empty_) return std::nullopt;
    while (phase_ < 2) {
      int ph = phase_++;
      if (ph == 0 && r_.loIncl) return r_.lo;
      if (ph == 1 && r_.hiIncl && r_.hi != r_.lo) return r_.hi;
    }
    if (!(r_.lo < r_.hi)) return std::nullopt;
    long k = k_++;
    if (r_.lo.finite() && r_.hi.finite())
      return ExtRational(r_.lo.value() + (r_.hi.value() - r_.lo.value()) * pow2(-(k + 1)));
    if (r_.hi.finite()) return ExtRational(r_.hi.value() - pow2(k));
    if (r_.lo.finite()) return ExtRational(r_.lo.value() + pow2(k));
    if (k == 0) return ExtRational(0L);
    Rational m = pow2((k - 1) / 2);
    return ExtRational(k % 2 ? m : Rational(-m));
  }

 private:
  ValueRange r_;
  bool empty_;
  int phase_ = 0;
  long k_ = 0;
};

// Doubled points of a range, alternating between the two sides.
class PointStream {
 public:
  explicit PointStream(const PointRange& r)
      : minus_(valuesWithSide(r, Side::Minus)), plus_(valuesWithSide(r, Side::Plus)) {}

  std::optional<DoubledPoint> next() {
    for (int tries = 0; tries < 2; ++tries) {
      bool useMinus = turn_++ % 2 == 0;
      auto v = useMinus ? minus_.next() : plus_.next();
      if (v) return DoubledPoint(*v, useMinus ? Side::Minus : Side::Plus);
    }
    return std::nullopt;
  }

 private:
  ValueStream minus_, plus_;
  long turn_ = 0;
};

enum class Dir { Min, Max };
enum class End { Left, Right };

inline End other(End e) { return e == End::Left ? End::Right : End::Left; }

// Infimum or supremum of a set of doubled points, and whether it is attained.
struct Extreme {
  bool any = false;
  DoubledPoint bound;
  bool attained = false;

  static Extreme none() { return {}; }
  static Extreme at(const DoubledPoint& p) { return {true, p, true}; }
  static Extreme limit(const DoubledPoint& p) { return {true, p, false}; }
};

inline void absorb(Extreme& acc, const Extreme& e, Dir d) {
  if (!e.any) return;
  if (!acc.any) {
    acc = e;
    return;
  }
  int c = compare(e.bound, acc.bound);
  if (d == Dir::Min ? c < 0 : c > 0)
    acc = e;
  else if (c == 0)
    acc.attained = acc.attained || e.attained;
}

inline Extreme extremeOfValues(const ValueRange& v, Side s, Dir d) {
  if (v.empty()) return Extreme::none();
  if (d == Dir::Min)
    return v.loIncl ? Extreme::at({v.lo, s}) : Extreme::limit({v.lo, Side::Plus});
  return v.hiIncl ? Extreme::at({v.hi, s}) : Extreme::limit({v.hi, Side::Minus});
}

inline Extreme extremeOfPoints(const PointRange& r, Dir d) {
  Extreme e;
  absorb(e, extremeOfValues(valuesWithSide(r, Side::Minus), Side::Minus, d), d);
  absorb(e, extremeOfValues(valuesWithSide(r, Side::Plus), Side::Plus, d), d);
  return e;
}

// Interval with endpoint p at `end` and the other endpoint q.
inline std::optional<Interval> withEnd(End end, const DoubledPoint& p, const DoubledPoint& q) {
  return end == End::Left ? Interval::tryMake(p, q) : Interval::tryMake(q, p);
}

inline const DoubledPoint& endpoint(const Interval& v, End e) { return e == End::Left ? v.left() : v.right(); }

// Visitors return true to stop the enumeration.
using Visitor = std::function<bool(const Interval&)>;

struct Window {
  Rational lo, hi;
};

class Family {
 public:
  virtual ~Family() = default;

  virtual std::string kind() const = 0;
  virtual bool contains(const Interval& m) const = 0;

  // Members whose `end` endpoint equals p and whose other endpoint lies in r.
  virtual bool visitAt(End end, const DoubledPoint& p, const PointRange& r, const Visitor& f) const = 0;

  // Members with left < p < right, left in l and right in r.
  virtual bool visitStraddling(const DoubledPoint& p, const PointRange& l, const PointRange& r,
                               const Visitor& f) const = 0;

  // Extreme of the free endpoint over members whose `end` endpoint is p.
  virtual Extreme extremeAt(End end, const DoubledPoint& p, const PointRange& r, Dir d) const = 0;

  virtual void criticalValues(const Window&, std::vector<Rational>&) const {}
  virtual void sample(std::mt19937_64&, const Window&, int, std::vector<Interval>&) const {}

  virtual Json toJson() const = 0;
};

using FamilyPtr = std::shared_ptr<const Family>;

inline Rational randomBetween(std::mt19937_64& rng, const Rational& a, const Rational& b, long den = 997) {
  std::uniform_int_distribution<long> pick(1, den - 1);
  return a + (b - a) * frac(pick(rng), den);
}

// ----------------------------------------------------------------------------

class FiniteFamily : public Family {
 public:
  explicit FiniteFamily(std::vector<Interval> items) : items_(std::move(items)) {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
  }

  const std::vector<Interval>& items() const { return items_; }

  std::string kind() const override { return "finite"; }

  bool contains(const Interval& m) const override { return std::binary_search(items_.begin(), items_.end(), m); }

  bool visitAt(End end, const DoubledPoint& p, const PointRange& r, const Visitor& f) const override {
    for (const auto& v : items_)
      if (endpoint(v, end) == p && r.contains(endpoint(v, other(end))) && f(v)) return true;
    return false;
  }

  bool visitStraddling(const DoubledPoint& p, const PointRange& l, const PointRange& r,
                       const Visitor& f) const override {
    for (const auto& v : items_)
      if (v.left() < p && p < v.right() && l.contains(v.left()) && r.contains(v.right()) && f(v)) return true;
    return false;
  }

  Extreme extremeAt(End end, const DoubledPoint& p, const PointRange& r, Dir d) const override {
    Extreme e;
    for (const auto& v : items_)
      if (endpoint(v, end) == p && r.contains(endpoint(v, other(end))))
        absorb(e, Extreme::at(endpoint(v, other(end))), d);
    return e;
  }

  void criticalValues(const Window& w, std::vector<Rational>& out) const override {
    for (const auto& v : items_)
      for (const auto* p : {&v.left(), &v.right()})
        if (p->value.finite() && w.lo <= p->value.value() && p->value.value() <= w.hi) out.push_back(p->value.value());
  }

  void sample(std::mt19937_64& rng, const Window&, int count, std::vector<Interval>& out) const override {
    if (items_.empty()) return;
    std::uniform_int_distribution<size_t> pick(0, items_.size() - 1);
    for (int k = 0; k < count; ++k) out.push_back(items_[pick(rng)]);
  }

  Json toJson() const override {
    Json arr = Json::array();
    for (const auto& v : items_) arr.push_back(notation(v));
    return Json{{"kind", kind()}, {"items", arr}};
  }

 private:
  std::vector<Interval> items_;
};

// {P_p : p > (-inf,+)}, which includes P_{+inf}.
class AllProjectivesFamily : public Family {
 public:
  std::string kind() const override { return "all-projectives"; }

  bool contains(const Interval& m) const override { return m.left() == DoubledPoint::negInf(); }

  bool visitAt(End end, const DoubledPoint& p, const PointRange& r, const Visitor& f) const override {
    const DoubledPoint base = DoubledPoint::negInf();
    if (end == End::Right) {
      auto v = Interval::tryMake(base, p);
      return v && r.contains(base) && f(*v);
    }
    if (p != base) return false;
    return streamRights(r.intersect(PointRange::above(base)), f);
  }

  bool visitStraddling(const DoubledPoint& p, const PointRange& l, const PointRange& r,
                       const Visitor& f) const override {
    const DoubledPoint base = DoubledPoint::negInf();
    if (!(base < p) || !l.contains(base)) return false;
    return streamRights(r.intersect(PointRange::above(p)), f);
  }

  Extreme extremeAt(End end, const DoubledPoint& p, const PointRange& r, Dir d) const override {
    const DoubledPoint base = DoubledPoint::negInf();
    if (end == End::Right) return base < p && r.contains(base) ? Extreme::at(base) : Extreme::none();
    if (p != base) return Extreme::none();
    return extremeOfPoints(r.intersect(PointRange::above(base)), d);
  }

  void sample(std::mt19937_64& rng, const Window& w, int count, std::vector<Interval>& out) const override {
    std::uniform_int_distribution<int> kind(0, 4);
    for (int k = 0; k < count; ++k) {
      Rational x = randomBetween(rng, w.lo, w.hi);
      switch (kind(rng)) {
        case 0: out.push_back(Interval::projectiveInf()); break;
        case 1: case 2: out.push_back(Interval::projective(x)); break;
        default: out.push_back(Interval::projectiveOpen(x));
      }
    }
  }

  Json toJson() const override { return Json{{"kind", kind()}}; }

 private:
  static bool streamRights(const PointRange& r, const Visitor& f) {
    PointStream s(r);
    while (auto q = s.next())
      if (auto v = Interval::tryMake(DoubledPoint::negInf(), *q); v && f(*v)) return true;
    return false;
  }
};

// Integers i <= lower or i >= upper, listed lazily inside a value range.
struct IntegerRays {
  Integer lower, upper;

  bool allowed(const Integer& i) const { return i <= lower || i >= upper; }

  // Inclusive integer bounds of a value range; nullopt means unbounded.
  static std::pair<std::optional<Integer>, std::optional<Integer>> bounds(const ValueRange& v) {
    std::optional<Integer> a, b;
    if (v.lo.isPosInf() || v.hi.isNegInf()) return {Integer(1), Integer(0)};
    if (v.lo.finite()) {
      Integer c = ceilOf(v.lo.value());
      if (!v.loIncl && Rational(c) == v.lo.value()) c += 1;
      a = c;
    }
    if (v.hi.finite()) {
      Integer c = floorOf(v.hi.value());
      if (!v.hiIncl && Rational(c) == v.hi.value()) c -= 1;
      b = c;
    }
    return {a, b};
  }

  bool visit(const ValueRange& v, const std::function<bool(const Integer&)>& f) const {
    if (v.empty()) return false;
    auto [a, b] = bounds(v);
    Integer top = b ? std::min(*b, lower) : lower;
    for (Integer i = top; !a || i >= *a; --i)
      if (f(i)) return true;
    Integer bottom = a ? std::max(*a, upper) : upper;
    for (Integer i = bottom; !b || i <= *b; ++i)
      if (f(i)) return true;
    return false;
  }

  Extreme extreme(const ValueRange& v, Side s, Dir d) const {
    if (v.empty()) return Extreme::none();
    auto [a, b] = bounds(v);
    Integer loTop = b ? std::min(*b, lower) : lower;
    bool lowNonEmpty = !a || *a <= loTop;
    Integer hiBottom = a ? std::max(*a, upper) : upper;
    bool highNonEmpty = !b || hiBottom <= *b;
    if (!lowNonEmpty && !highNonEmpty) return Extreme::none();
    if (d == Dir::Min) {
      if (lowNonEmpty) return a ? Extreme::at({Rational(*a), s}) : Extreme::limit(DoubledPoint::negInf());
      return Extreme::at({Rational(hiBottom), s});
    }
    if (highNonEmpty) return b ? Extreme::at({Rational(*b), s}) : Extreme::limit(DoubledPoint::posInf());
    return Extreme::at({Rational(loTop), s});
  }
};

// Open projectives P_{i)} at integers i <= lower or i >= upper.
class IntegerProjectivesFamily : public Family {
 public:
  IntegerProjectivesFamily(Integer lower, Integer upper) : rays_{std::move(lower), std::move(upper)} {}

  std::string kind() const override { return "integer-projectives"; }

  bool contains(const Interval& m) const override {
    const auto& r = m.right();
    return m.left() == DoubledPoint::negInf() && r.side == Side::Minus && r.value.finite() &&
           isInteger(r.value.value()) && rays_.allowed(r.value.value().get_num());
  }

  bool visitAt(End end, const DoubledPoint& p, const PointRange& r, const Visitor& f) const override {
    const DoubledPoint base = DoubledPoint::negInf();
    if (end == End::Right) {
      if (!r.contains(base)) return false;
      auto v = Interval::tryMake(base, p);
      return v && contains(*v) && f(*v);
    }
    if (p != base) return false;
    return visitRights(r, f);
  }

  bool visitStraddling(const DoubledPoint& p, const PointRange& l, const PointRange& r,
                       const Visitor& f) const override {
    if (!(DoubledPoint::negInf() < p) || !l.contains(DoubledPoint::negInf())) return false;
    return visitRights(r.intersect(PointRange::above(p)), f);
  }

  Extreme extremeAt(End end, const DoubledPoint& p, const PointRange& r, Dir d) const override {
    const DoubledPoint base = DoubledPoint::negInf();
    if (end == End::Right) {
      auto v = Interval::tryMake(base, p);
      return v && contains(*v) && r.contains(base) ? Extreme::at(base) : Extreme::none();
    }
    if (p != base) return Extreme::none();
    return rays_.extreme(valuesWithSide(r, Side::Minus), Side::Minus, d);
  }

  void criticalValues(const Window& w, std::vector<Rational>& out) const override {
    rays_.visit(ValueRange{w.lo, true, w.hi, true}, [&](const Integer& i) {
      out.push_back(Rational(i));
      return out.size() > 100000;
    });
  }

  void sample(std::mt19937_64& rng, const Window& w, int count, std::vector<Interval>& out) const override {
    std::vector<Rational> pts;
    criticalValues(w, pts);
    if (pts.empty()) return;
    std::uniform_int_distribution<size_t> pick(0, pts.size() - 1);
    for (int k = 0; k < count; ++k) out.push_back(Interval::projectiveOpen(pts[pick(rng)]));
  }

  Json toJson() const override {
    return Json{{"kind", kind()}, {"lower", rays_.lower.get_str()}, {"upper", rays_.upper.get_str()}};
  }

  const IntegerRays& rays() const { return rays_; }

 private:
  bool visitRights(const PointRange& r, const Visitor& f) const {
    return rays_.visit(valuesWithSide(r, Side::Minus),
                       [&](const Integer& i) { return f(Interval::projectiveOpen(Rational(i))); });
  }

  IntegerRays rays_;
};

// ----------------------------------------------------------------------------
// Rungs: the intervals carved into dyadic pieces.

struct Rung {
  Rational lo, hi;
  Rational width() const { return hi - lo; }
};

class RungSystem {
 public:
  enum class Kind { Single, Ladder, Integer };

  static RungSystem single(Rational lo, Rational hi) {
    if (!(lo < hi)) throw DomainError("rung requires lo < hi");
    RungSystem s;
    s.kind_ = Kind::Single;
    s.lo_ = std::move(lo);
    s.hi_ = std::move(hi);
    return s;
  }
  static RungSystem ladderRungs(const Ladder& l) {
    RungSystem s;
    s.kind_ = Kind::Ladder;
    s.ladder_ = l;
    return s;
  }
  // Rungs (i, i+1) with i+1 <= lower or i >= upper.
  static RungSystem integerRungs(Integer lower, Integer upper) {
    RungSystem s;
    s.kind_ = Kind::Integer;
    s.rays_ = {std::move(lower), std::move(upper)};
    return s;
  }

  Kind kind() const { return kind_; }
  const Ladder& ladder() const { return ladder_; }
  const IntegerRays& rays() const { return rays_; }
  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }

  // The rung with lo <= v < hi.
  std::optional<Rung> containing(const Rational& v) const {
    switch (kind_) {
      case Kind::Single:
        if (lo_ <= v && v < hi_) return Rung{lo_, hi_};
        return std::nullopt;
      case Kind::Ladder: {
        auto i = ladder_.locate(v);
        if (!i) return std::nullopt;
        return Rung{ladder_.value(*i), ladder_.value(*i + 1)};
      }
      default: return integerRung(floorOf(v));
    }
  }

  // The rung with lo < v <= hi.
  std::optional<Rung> endingAt(const Rational& v) const {
    switch (kind_) {
      case Kind::Single:
        if (lo_ < v && v <= hi_) return Rung{lo_, hi_};
        return std::nullopt;
      case Kind::Ladder: {
        if (auto k = ladder_.indexOf(v)) return Rung{ladder_.value(*k - 1), v};
        return containing(v);
      }
      default: return integerRung(ceilOf(v) - 1);
    }
  }

  // Rungs meeting [w.lo, w.hi], at most cap of them, nearest the middle first.
  std::vector<Rung> rungsMeeting(const Window& w, std::size_t cap) const {
    std::vector<Rung> out;
    switch (kind_) {
      case Kind::Single:
        if (lo_ <= w.hi && w.lo <= hi_) out.push_back({lo_, hi_});
        break;
      case Kind::Ladder: {
        long depth = static_cast<long>(cap / 2) + 1;
        auto first = ladder_.locate(w.lo);
        auto last = ladder_.locate(w.hi);
        long a = first ? *first : (w.lo <= ladder_.lowerLimit() ? -depth : depth + 1);
        long b = last ? *last : (w.hi >= ladder_.upperLimit() ? depth : -depth - 1);
        for (long i = std::max(a, -depth); i <= std::min(b, depth); ++i)
          out.push_back({ladder_.value(i), ladder_.value(i + 1)});
        break;
      }
      default: {
        Integer a = floorOf(w.lo) - 1, b = ceilOf(w.hi);
        for (Integer i = a; i <= b && out.size() < cap; ++i)
          if (auto r = integerRung(i)) out.push_back(*r);
      }
    }
    if (out.size() > cap) out.resize(cap);
    return out;
  }

  Json toJson() const {
    switch (kind_) {
      case Kind::Single: return Json{{"type", "single"}, {"lo", lo_.get_str()}, {"hi", hi_.get_str()}};
      case Kind::Ladder:
        return Json{{"type", "ladder"},
                    {"lower", ladder_.lowerLimit().get_str()},
                    {"upper", ladder_.upperLimit().get_str()}};
      default:
        return Json{{"type", "integer"}, {"lower", rays_.lower.get_str()}, {"upper", rays_.upper.get_str()}};
    }
  }

  static RungSystem fromJson(const Json& j) {
    std::string t = jsonText(j.at("type"), "rung type");
    if (t == "single") return single(rationalFromJson(j.at("lo")), rationalFromJson(j.at("hi")));
    if (t == "ladder") return ladderRungs(Ladder(rationalFromJson(j.at("lower")), rationalFromJson(j.at("upper"))));
    if (t == "integer")
      return integerRungs(Integer(jsonText(j.at("lower"), "lower")), Integer(jsonText(j.at("upper"), "upper")));
    throw ParseError("unknown rung system: " + t);
  }

 private:
  std::optional<Rung> integerRung(const Integer& i) const {
    if (i + 1 <= rays_.lower || i >= rays_.upper) return Rung{Rational(i), Rational(i + 1)};
    return std::nullopt;
  }

  Kind kind_ = Kind::Single;
  Rational lo_ = 0, hi_ = 1;
  Ladder ladder_;
  IntegerRays rays_{Integer(0), Integer(1)};
};

// Level past which points within w/2^l of v sit on a fixed side of every bound.
inline long stableLevel(const Rational& v, const Rational& w, const ValueRange& a, const ValueRange& b) {
  long s = 0;
  for (const auto* e : {&a.lo, &a.hi, &b.lo, &b.hi}) {
    if (!e->finite() || e->value() == v) continue;
    Rational gap = e->value() - v;
    if (gap < 0) gap = -gap;
    s = std::max(s, floorLog2(w / gap) + 2);
  }
  return s;
}

inline long levelOf(const Rational& t) { return t == 0 ? 0 : dyadicLevel(t); }

// All open dyadic pieces (lo + j w/2^l, lo + (j+1) w/2^l) of every rung.
class DyadicFamily : public Family {
 public:
  explicit DyadicFamily(RungSystem rungs) : rungs_(std::move(rungs)) {}

  const RungSystem& rungs() const { return rungs_; }

  std::string kind() const override { return "dyadic"; }

  bool contains(const Interval& m) const override {
    if (m.left().side != Side::Plus || m.right().side != Side::Minus) return false;
    if (!m.left().value.finite() || !m.right().value.finite()) return false;
    const Rational& x = m.left().value.value();
    auto rung = rungs_.containing(x);
    if (!rung) return false;
    Rational len = (m.right().value.value() - x) / rung->width();
    if (len.get_num() != 1) return false;
    long l = dyadicLevel(len);
    if (l < 0) return false;
    long d = levelOf((x - rung->lo) / rung->width());
    return d >= 0 && d <= l;
  }

  bool visitAt(End end, const DoubledPoint& p, const PointRange& r, const Visitor& f) const override {
    Side mine = end == End::Left ? Side::Plus : Side::Minus;
    if (p.side != mine || !p.value.finite()) return false;
    const Rational& x = p.value.value();
    auto rung = end == End::Left ? rungs_.containing(x) : rungs_.endingAt(x);
    if (!rung) return false;
    Rational w = rung->width();
    long d = levelOf((x - rung->lo) / w);
    if (d < 0) return false;
    ValueRange vr = valuesWithSide(r, flip(mine));
    long s = stableLevel(x, w, vr, vr);
    int sign = end == End::Left ? 1 : -1;
    for (long l = d;; ++l) {
      Rational y = x + sign * w * pow2(-l);
      bool ok = vr.contains(y);
      if (ok) {
        Interval v = end == End::Left ? Interval::open(x, y) : Interval::open(y, x);
        if (f(v)) return true;
      }
      if (l > s && !ok) return false;
    }
  }

  bool visitStraddling(const DoubledPoint& p, const PointRange& l, const PointRange& r,
                       const Visitor& f) const override {
    if (!p.value.finite()) return false;
    const Rational& v = p.value.value();
    auto rung = rungs_.containing(v);
    if (!rung || rung->lo == v) return false;
    Rational w = rung->width();
    Rational t = (v - rung->lo) / w;
    long d = dyadicLevel(t);
    ValueRange lv = valuesWithSide(l, Side::Plus), rv = valuesWithSide(r, Side::Minus);
    long s = stableLevel(v, w, lv, rv);
    for (long k = 0; d < 0 || k < d; ++k) {
      Rational step = w * pow2(-k);
      Rational x = rung->lo + Rational(floorOf(t / pow2(-k))) * step;
      Rational y = x + step;
      bool ok = lv.contains(x) && rv.contains(y);
      if (ok && f(Interval::open(x, y))) return true;
      if (k > s && !ok) return false;
    }
    return false;
  }

  Extreme extremeAt(End end, const DoubledPoint& p, const PointRange& r, Dir d) const override {
    Side mine = end == End::Left ? Side::Plus : Side::Minus;
    if (p.side != mine || !p.value.finite()) return Extreme::none();
    const Rational& x = p.value.value();
    auto rung = end == End::Left ? rungs_.containing(x) : rungs_.endingAt(x);
    if (!rung) return Extreme::none();
    Rational w = rung->width();
    long lv = levelOf((x - rung->lo) / w);
    if (lv < 0) return Extreme::none();
    ValueRange vr = valuesWithSide(r, flip(mine));
    long s = stableLevel(x, w, vr, vr);
    int sign = end == End::Left ? 1 : -1;
    auto at = [&](long l) { return Rational(x + sign * w * pow2(-l)); };
    // Valid levels form a run; find its ends.
    std::optional<long> first, last;
    bool unbounded = false;
    for (long l = lv; l <= std::max(lv, s) + 1; ++l) {
      if (vr.contains(at(l))) {
        if (!first) first = l;
        last = l;
      }
    }
    if (!first) return Extreme::none();
    unbounded = *last == std::max(lv, s) + 1;
    // Coarse levels lie far from x, fine levels approach x.
    bool wantFar = (end == End::Left) == (d == Dir::Max);
    if (wantFar) return Extreme::at({at(*first), flip(mine)});
    if (unbounded) return Extreme::limit({x, mine});
    return Extreme::at({at(*last), flip(mine)});
  }

  void criticalValues(const Window& w, std::vector<Rational>& out) const override {
    for (const auto& rung : rungs_.rungsMeeting(w, 24)) {
      long depth = 6;
      for (long j = 0; j <= (1L << depth); ++j) out.push_back(rung.lo + rung.width() * frac(j, 1L << depth));
    }
  }

  void sample(std::mt19937_64& rng, const Window& w, int count, std::vector<Interval>& out) const override {
    auto rs = rungs_.rungsMeeting(w, 24);
    if (rs.empty()) return;
    std::uniform_int_distribution<size_t> pickRung(0, rs.size() - 1);
    std::uniform_int_distribution<int> pickLevel(0, 8);
    for (int k = 0; k < count; ++k) {
      const Rung& r = rs[pickRung(rng)];
      int l = pickLevel(rng);
      std::uniform_int_distribution<long> pickJ(0, (1L << l) - 1);
      long j = pickJ(rng);
      Rational step = r.width() * pow2(-l);
      out.push_back(Interval::open(r.lo + step * j, r.lo + step * (j + 1)));
    }
  }

  Json toJson() const override { return Json{{"kind", kind()}, {"rungs", rungs_.toJson()}}; }

 private:
  RungSystem rungs_;
};

// Singletons M_{{z}} at the non-dyadic interior points of every rung.
class SingletonFamily : public Family {
 public:
  explicit SingletonFamily(RungSystem rungs) : rungs_(std::move(rungs)) {}

  std::string kind() const override { return "singletons"; }

  bool admits(const Rational& z) const {
    auto rung = rungs_.containing(z);
    return rung && rung->lo < z && dyadicLevel((z - rung->lo) / rung->width()) < 0;
  }

  bool contains(const Interval& m) const override {
    return m.isSingleton() && m.left().value.finite() && admits(m.left().value.value());
  }

  bool visitAt(End end, const DoubledPoint& p, const PointRange& r, const Visitor& f) const override {
    Side mine = end == End::Left ? Side::Minus : Side::Plus;
    if (p.side != mine || !p.value.finite() || !admits(p.value.value())) return false;
    DoubledPoint q = p.flipped();
    return r.contains(q) && f(Interval::singleton(p.value.value()));
  }

  bool visitStraddling(const DoubledPoint&, const PointRange&, const PointRange&, const Visitor&) const override {
    return false;
  }

  Extreme extremeAt(End end, const DoubledPoint& p, const PointRange& r, Dir) const override {
    Side mine = end == End::Left ? Side::Minus : Side::Plus;
    if (p.side != mine || !p.value.finite() || !admits(p.value.value())) return Extreme::none();
    return r.contains(p.flipped()) ? Extreme::at(p.flipped()) : Extreme::none();
  }

  void criticalValues(const Window& w, std::vector<Rational>& out) const override {
    for (const auto& rung : rungs_.rungsMeeting(w, 24)) {
      out.push_back(rung.lo + rung.width() / 3);
      out.push_back(rung.lo + rung.width() * 2 / 3);
    }
  }

  void sample(std::mt19937_64& rng, const Window& w, int count, std::vector<Interval>& out) const override {
    auto rs = rungs_.rungsMeeting(w, 24);
    if (rs.empty()) return;
    std::uniform_int_distribution<size_t> pickRung(0, rs.size() - 1);
    std::uniform_int_distribution<long> pickNum(1, 2000);
    for (int k = 0; k < count; ++k) {
      const Rung& r = rs[pickRung(rng)];
      long n = pickNum(rng);
      if (n % 3 == 0) ++n;
      out.push_back(Interval::singleton(r.lo + r.width() * frac(n, 6003)));
    }
  }

  Json toJson() const override { return Json{{"kind", kind()}, {"rungs", rungs_.toJson()}}; }

 private:
  RungSystem rungs_;
};

// ----------------------------------------------------------------------------

// Indices i with a_i in a value range, as an interval of integers.
struct IndexRange {
  std::optional<long> lo, hi;
  bool empty = false;

  bool contains(long i) const { return !empty && (!lo || i >= *lo) && (!hi || i <= *hi); }

  IndexRange intersect(const IndexRange& o) const {
    IndexRange r;
    r.empty = empty || o.empty;
    r.lo = lo && o.lo ? std::max(*lo, *o.lo) : (lo ? lo : o.lo);
    r.hi = hi && o.hi ? std::min(*hi, *o.hi) : (hi ? hi : o.hi);
    if (r.lo && r.hi && *r.lo > *r.hi) r.empty = true;
    return r;
  }

  bool visit(const std::function<bool(long)>& f) const {
    if (empty) return false;
    if (lo) {
      for (long i = *lo; !hi || i <= *hi; ++i)
        if (f(i)) return true;
      return false;
    }
    if (hi) {
      for (long i = *hi;; --i)
        if (f(i)) return true;
    }
    for (long k = 0;; ++k)
      if (f(k % 2 ? (k + 1) / 2 : -(k / 2))) return true;
  }
};

inline IndexRange ladderIndices(const Ladder& L, const ValueRange& v) {
  IndexRange r;
  if (v.empty()) return {std::nullopt, std::nullopt, true};
  if (!v.lo.isNegInf()) {
    if (v.lo.isPosInf() || v.lo.value() >= L.upperLimit()) return {std::nullopt, std::nullopt, true};
    if (v.lo.value() > L.lowerLimit()) {
      long k = *L.locate(v.lo.value());
      r.lo = (L.value(k) == v.lo.value() && v.loIncl) ? k : k + 1;
    }
  }
  if (!v.hi.isPosInf()) {
    if (v.hi.isNegInf() || v.hi.value() <= L.lowerLimit()) return {std::nullopt, std::nullopt, true};
    if (v.hi.value() < L.upperLimit()) {
      long k = *L.locate(v.hi.value());
      r.hi = (L.value(k) == v.hi.value() && !v.hiIncl) ? k - 1 : k;
    }
  }
  if (r.lo && r.hi && *r.lo > *r.hi) r.empty = true;
  return r;
}

// LEFT: {M_(a_i, apex) : i in range}; RIGHT: {M_(apex, a_j) : j in range}.
enum class FanSide { Left, Right };

class FanFamily : public Family {
 public:

  FanFamily(FanSide side, Rational apex, Ladder ladder, std::optional<long> lo, std::optional<long> hi)
      : side_(side), apex_(std::move(apex)), ladder_(std::move(ladder)) {
    IndexRange given{lo, hi, lo && hi && *lo > *hi};
    ValueRange beside = side_ == FanSide::Left ? ValueRange{ExtRational::negInf(), true, apex_, false}
                                             : ValueRange{apex_, false, ExtRational::posInf(), true};
    range_ = given.intersect(ladderIndices(ladder_, beside));
  }

  FanSide side() const { return side_; }
  const Rational& apex() const { return apex_; }
  const IndexRange& indices() const { return range_; }
  const Ladder& ladder() const { return ladder_; }

  std::string kind() const override { return "fan"; }

  bool contains(const Interval& m) const override {
    if (!m.isOpen() || !m.left().value.finite() || !m.right().value.finite()) return false;
    const DoubledPoint& apexEnd = side_ == FanSide::Left ? m.right() : m.left();
    const DoubledPoint& free = side_ == FanSide::Left ? m.left() : m.right();
    if (apexEnd.value.value() != apex_) return false;
    auto i = ladder_.indexOf(free.value.value());
    return i && range_.contains(*i);
  }

  bool visitAt(End end, const DoubledPoint& p, const PointRange& r, const Visitor& f) const override {
    End apexEnd = side_ == FanSide::Left ? End::Right : End::Left;
    if (end == apexEnd) {
      if (p != apexPoint()) return false;
      return freeIndices(r).visit([&](long i) { return f(member(i)); });
    }
    if (p.side != freeSide() || !p.value.finite()) return false;
    auto i = ladder_.indexOf(p.value.value());
    return i && range_.contains(*i) && r.contains(apexPoint()) && f(member(*i));
  }

  bool visitStraddling(const DoubledPoint& p, const PointRange& l, const PointRange& r,
                       const Visitor& f) const override {
    if (side_ == FanSide::Left) {
      if (!(p < apexPoint()) || !r.contains(apexPoint())) return false;
      return freeIndices(l.intersect(PointRange::below(p))).visit([&](long i) { return f(member(i)); });
    }
    if (!(apexPoint() < p) || !l.contains(apexPoint())) return false;
    return freeIndices(r.intersect(PointRange::above(p))).visit([&](long i) { return f(member(i)); });
  }

  Extreme extremeAt(End end, const DoubledPoint& p, const PointRange& r, Dir d) const override {
    End apexEnd = side_ == FanSide::Left ? End::Right : End::Left;
    if (end != apexEnd) {
      if (p.side != freeSide() || !p.value.finite()) return Extreme::none();
      auto i = ladder_.indexOf(p.value.value());
      return i && range_.contains(*i) && r.contains(apexPoint()) ? Extreme::at(apexPoint()) : Extreme::none();
    }
    if (p != apexPoint()) return Extreme::none();
    IndexRange ix = freeIndices(r);
    if (ix.empty) return Extreme::none();
    if (d == Dir::Min)
      return ix.lo ? Extreme::at(freePoint(*ix.lo)) : Extreme::limit(DoubledPoint::plus(ladder_.lowerLimit()));
    return ix.hi ? Extreme::at(freePoint(*ix.hi)) : Extreme::limit(DoubledPoint::minus(ladder_.upperLimit()));
  }

  void criticalValues(const Window& w, std::vector<Rational>& out) const override {
    out.push_back(apex_);
    IndexRange near = range_.intersect({-12L, 12L, false});
    near.visit([&](long i) {
      Rational a = ladder_.value(i);
      if (w.lo <= a && a <= w.hi) out.push_back(a);
      return false;
    });
  }

  void sample(std::mt19937_64& rng, const Window&, int count, std::vector<Interval>& out) const override {
    IndexRange near = range_.intersect({-12L, 12L, false});
    if (near.empty || !near.lo || !near.hi) return;
    std::uniform_int_distribution<long> pick(*near.lo, *near.hi);
    for (int k = 0; k < count; ++k) out.push_back(member(pick(rng)));
  }

  Json toJson() const override {
    Json j{{"kind", kind()},
           {"side", side_ == FanSide::Left ? "left" : "right"},
           {"apex", apex_.get_str()},
           {"lower", ladder_.lowerLimit().get_str()},
           {"upper", ladder_.upperLimit().get_str()}};
    j["from"] = range_.lo ? Json(*range_.lo) : Json(nullptr);
    j["to"] = range_.hi ? Json(*range_.hi) : Json(nullptr);
    return j;
  }

 private:
  Side freeSide() const { return side_ == FanSide::Left ? Side::Plus : Side::Minus; }
  DoubledPoint apexPoint() const {
    return side_ == FanSide::Left ? DoubledPoint::minus(apex_) : DoubledPoint::plus(apex_);
  }
  DoubledPoint freePoint(long i) const { return {ladder_.value(i), freeSide()}; }
  Interval member(long i) const {
    return side_ == FanSide::Left ? Interval::open(ladder_.value(i), apex_) : Interval::open(apex_, ladder_.value(i));
  }
  IndexRange freeIndices(const PointRange& r) const {
    return range_.intersect(ladderIndices(ladder_, valuesWithSide(r, freeSide())));
  }

  FanSide side_;
  Rational apex_;
  Ladder ladder_;
  IndexRange range_;
};

// Intervals with one fixed endpoint and the other endpoint (v, side) for v in a range.
class SweepFamily : public Family {
 public:
  SweepFamily(DoubledPoint fixed, End varEnd, Side varSide, ValueRange values)
      : fixed_(std::move(fixed)), varEnd_(varEnd), varSide_(varSide) {
    PointRange beyond = varEnd_ == End::Right ? PointRange::above(fixed_) : PointRange::below(fixed_);
    values_ = values.intersect(valuesWithSide(beyond, varSide_));
  }

  const DoubledPoint& fixed() const { return fixed_; }
  End varEnd() const { return varEnd_; }
  Side varSide() const { return varSide_; }
  const ValueRange& values() const { return values_; }

  std::string kind() const override { return "sweep"; }

  bool contains(const Interval& m) const override {
    const DoubledPoint& var = endpoint(m, varEnd_);
    return endpoint(m, other(varEnd_)) == fixed_ && var.side == varSide_ && values_.contains(var.value);
  }

  bool visitAt(End end, const DoubledPoint& p, const PointRange& r, const Visitor& f) const override {
    if (end != varEnd_) {
      if (p != fixed_) return false;
      return visitValues(values_.intersect(valuesWithSide(r, varSide_)), f);
    }
    if (p.side != varSide_ || !values_.contains(p.value) || !r.contains(fixed_)) return false;
    return f(make(p.value));
  }

  bool visitStraddling(const DoubledPoint& p, const PointRange& l, const PointRange& r,
                       const Visitor& f) const override {
    if (varEnd_ == End::Right) {
      if (!(fixed_ < p) || !l.contains(fixed_)) return false;
      return visitValues(values_.intersect(valuesWithSide(r.intersect(PointRange::above(p)), varSide_)), f);
    }
    if (!(p < fixed_) || !r.contains(fixed_)) return false;
    return visitValues(values_.intersect(valuesWithSide(l.intersect(PointRange::below(p)), varSide_)), f);
  }

  Extreme extremeAt(End end, const DoubledPoint& p, const PointRange& r, Dir d) const override {
    if (end != varEnd_) {
      if (p != fixed_) return Extreme::none();
      return extremeOfValues(values_.intersect(valuesWithSide(r, varSide_)), varSide_, d);
    }
    if (p.side != varSide_ || !values_.contains(p.value) || !r.contains(fixed_)) return Extreme::none();
    return Extreme::at(fixed_);
  }

  void criticalValues(const Window& w, std::vector<Rational>& out) const override {
    for (const auto* v : {&fixed_.value, &values_.lo, &values_.hi})
      if (v->finite() && w.lo <= v->value() && v->value() <= w.hi) out.push_back(v->value());
  }

  void sample(std::mt19937_64& rng, const Window& w, int count, std::vector<Interval>& out) const override {
    ValueRange vr = values_.intersect({w.lo, true, w.hi, true});
    if (vr.empty()) return;
    for (int k = 0; k < count; ++k) {
      ExtRational v = vr.lo < vr.hi ? ExtRational(randomBetween(rng, vr.lo.value(), vr.hi.value())) : vr.lo;
      if (values_.contains(v)) out.push_back(make(v));
    }
  }

  Json toJson() const override {
    return Json{{"kind", kind()},
                {"fixed", ecluster::toJson(fixed_)},
                {"varEnd", varEnd_ == End::Left ? "left" : "right"},
                {"varSide", varSide_ == Side::Minus ? "-" : "+"},
                {"from", values_.lo.str()},
                {"fromIncluded", values_.loIncl},
                {"to", values_.hi.str()},
                {"toIncluded", values_.hiIncl}};
  }

 private:
  Interval make(const ExtRational& v) const {
    DoubledPoint q(v, varSide_);
    return varEnd_ == End::Right ? Interval(fixed_, q) : Interval(q, fixed_);
  }
  bool visitValues(const ValueRange& vr, const Visitor& f) const {
    ValueStream s(vr);
    while (auto v = s.next())
      if (f(make(*v))) return true;
    return false;
  }

  DoubledPoint fixed_;
  End varEnd_;
  Side varSide_;
  ValueRange values_;
};

// Singletons at every point that is not an endpoint of a member of `images`.
class ComplementSingletonsFamily : public Family {
 public:
  explicit ComplementSingletonsFamily(std::vector<FamilyPtr> images) : images_(std::move(images)) {}

  const std::vector<FamilyPtr>& images() const { return images_; }

  std::string kind() const override { return "complement-singletons"; }

  bool isEndpoint(const Rational& z) const {
    auto hit = [](const Interval&) { return true; };
    for (const auto& f : images_)
      for (End e : {End::Left, End::Right})
        for (Side s : {Side::Minus, Side::Plus})
          if (f->visitAt(e, {z, s}, PointRange::all(), hit)) return true;
    return false;
  }

  bool contains(const Interval& m) const override {
    return m.isSingleton() && m.left().value.finite() && !isEndpoint(m.left().value.value());
  }

  bool visitAt(End end, const DoubledPoint& p, const PointRange& r, const Visitor& f) const override {
    Side mine = end == End::Left ? Side::Minus : Side::Plus;
    if (p.side != mine || !p.value.finite() || !r.contains(p.flipped())) return false;
    Interval v = Interval::singleton(p.value.value());
    return contains(v) && f(v);
  }

  bool visitStraddling(const DoubledPoint&, const PointRange&, const PointRange&, const Visitor&) const override {
    return false;
  }

  Extreme extremeAt(End end, const DoubledPoint& p, const PointRange& r, Dir) const override {
    Side mine = end == End::Left ? Side::Minus : Side::Plus;
    if (p.side != mine || !p.value.finite() || !r.contains(p.flipped())) return Extreme::none();
    return contains(Interval::singleton(p.value.value())) ? Extreme::at(p.flipped()) : Extreme::none();
  }

  void criticalValues(const Window& w, std::vector<Rational>& out) const override {
    for (const auto& f : images_) f->criticalValues(w, out);
  }

  void sample(std::mt19937_64& rng, const Window& w, int count, std::vector<Interval>& out) const override {
    for (int k = 0; k < count; ++k) {
      Rational z = randomBetween(rng, w.lo, w.hi, 6007);
      if (!isEndpoint(z)) out.push_back(Interval::singleton(z));
    }
  }

  Json toJson() const override {
    Json arr = Json::array();
    for (const auto& f : images_) arr.push_back(f->toJson());
    return Json{{"kind", kind()}, {"images", arr}};
  }

 private:
  std::vector<FamilyPtr> images_;
};

// ----------------------------------------------------------------------------

inline FamilyPtr familyFromJson(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ParseError("family needs a kind");
  std::string k = jsonText(j["kind"], "kind");
  if (k == "finite") {
    std::vector<Interval> items;
    for (const auto& e : j.at("items")) items.push_back(intervalFromJson(e));
    return std::make_shared<FiniteFamily>(std::move(items));
  }
  if (k == "all-projectives") return std::make_shared<AllProjectivesFamily>();
  if (k == "integer-projectives")
    return std::make_shared<IntegerProjectivesFamily>(Integer(jsonText(j.at("lower"), "lower")),
                                                      Integer(jsonText(j.at("upper"), "upper")));
  if (k == "dyadic") return std::make_shared<DyadicFamily>(RungSystem::fromJson(j.at("rungs")));
  if (k == "singletons") return std::make_shared<SingletonFamily>(RungSystem::fromJson(j.at("rungs")));
  if (k == "fan") {
    std::string side = jsonText(j.at("side"), "side");
    if (side != "left" && side != "right") throw ParseError("fan side must be left or right");
    auto idx = [&](const char* key) -> std::optional<long> {
      if (!j.contains(key) || j[key].is_null()) return std::nullopt;
      return j[key].get<long>();
    };
    return std::make_shared<FanFamily>(side == "left" ? FanSide::Left : FanSide::Right,
                                       rationalFromJson(j.at("apex")),
                                       Ladder(rationalFromJson(j.at("lower")), rationalFromJson(j.at("upper"))),
                                       idx("from"), idx("to"));
  }
  if (k == "sweep") {
    std::string ve = jsonText(j.at("varEnd"), "varEnd"), vs = jsonText(j.at("varSide"), "varSide");
    ValueRange vr{extRationalFromJson(j.at("from")), j.value("fromIncluded", true),
                  extRationalFromJson(j.at("to")), j.value("toIncluded", true)};
    return std::make_shared<SweepFamily>(pointFromJson(j.at("fixed")), ve == "left" ? End::Left : End::Right,
                                         vs == "-" ? Side::Minus : Side::Plus, vr);
  }
  if (k == "complement-singletons") {
    std::vector<FamilyPtr> images;
    for (const auto& e : j.at("images")) images.push_back(familyFromJson(e));
    return std::make_shared<ComplementSingletonsFamily>(std::move(images));
  }
  throw ParseError("unknown family kind: " + k);
}

}  // namespace ecluster
