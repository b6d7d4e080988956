#pragma once

#include <compare>
#include <optional>
#include <ostream>
#include <string>
#include <utility>

#include "error.hpp"
#include "rational.hpp"

namespace ecluster {

class ExtRational {
 public:
  enum class Kind { NegInf, Finite, PosInf };

  ExtRational() = default;
  ExtRational(const Rational& q) : kind_(Kind::Finite), q_(q) {}  // NOLINT
  ExtRational(long v) : kind_(Kind::Finite), q_(v) {}             // NOLINT
  template <class T, class U>
  ExtRational(const __gmp_expr<T, U>& e) : kind_(Kind::Finite), q_(e) {}  // NOLINT

  static ExtRational negInf() { return ExtRational(Kind::NegInf); }
  static ExtRational posInf() { return ExtRational(Kind::PosInf); }

  Kind kind() const { return kind_; }
  bool finite() const { return kind_ == Kind::Finite; }
  bool isNegInf() const { return kind_ == Kind::NegInf; }
  bool isPosInf() const { return kind_ == Kind::PosInf; }

  const Rational& value() const {
    if (!finite()) throw DomainError("infinite coordinate has no rational value");
    return q_;
  }

  friend int compare(const ExtRational& a, const ExtRational& b) {
    if (a.kind_ != b.kind_ || !a.finite())
      return static_cast<int>(a.kind_) - static_cast<int>(b.kind_);
    return cmp(a.q_, b.q_) < 0 ? -1 : (cmp(a.q_, b.q_) > 0 ? 1 : 0);
  }
  friend bool operator==(const ExtRational& a, const ExtRational& b) { return compare(a, b) == 0; }
  friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
    return compare(a, b) <=> 0;
  }

  std::string str() const {
    switch (kind_) {
      case Kind::NegInf: return "-inf";
      case Kind::PosInf: return "+inf";
      default: return q_.get_str();
    }
  }

 private:
  explicit ExtRational(Kind k) : kind_(k) {}
  Kind kind_ = Kind::Finite;
  Rational q_ = 0;
};

enum class Side { Minus = 0, Plus = 1 };

inline Side flip(Side s) { return s == Side::Minus ? Side::Plus : Side::Minus; }

struct DoubledPoint {
  ExtRational value;
  Side side = Side::Minus;

  DoubledPoint() = default;
  DoubledPoint(ExtRational v, Side s) : value(std::move(v)), side(s) {}

  static DoubledPoint negInf() { return {ExtRational::negInf(), Side::Plus}; }
  static DoubledPoint posInf() { return {ExtRational::posInf(), Side::Minus}; }
  static DoubledPoint minus(const Rational& q) { return {q, Side::Minus}; }
  static DoubledPoint plus(const Rational& q) { return {q, Side::Plus}; }

  // The infinities carry a single (open) side.
  bool valid() const {
    if (value.isNegInf()) return side == Side::Plus;
    if (value.isPosInf()) return side == Side::Minus;
    return true;
  }

  DoubledPoint flipped() const { return {value, flip(side)}; }

  friend int compare(const DoubledPoint& a, const DoubledPoint& b) {
    int c = compare(a.value, b.value);
    if (c != 0) return c;
    return static_cast<int>(a.side) - static_cast<int>(b.side);
  }
  friend bool operator==(const DoubledPoint& a, const DoubledPoint& b) { return compare(a, b) == 0; }
  friend std::strong_ordering operator<=>(const DoubledPoint& a, const DoubledPoint& b) {
    return compare(a, b) <=> 0;
  }
};

inline std::ostream& operator<<(std::ostream& os, const DoubledPoint& p) {
  return os << "(" << p.value.str() << "," << (p.side == Side::Minus ? "-" : "+") << ")";
}

// An interval module M_I with I = [left, right] in the doubled line.
// Left side Minus means the left endpoint is included; right side Plus means
// the right endpoint is included.
class Interval {
 public:
  Interval(DoubledPoint l, DoubledPoint r) : left_(std::move(l)), right_(std::move(r)) {
    if (!left_.valid() || !right_.valid()) throw DomainError("infinite endpoints must be open");
    if (!(left_ < right_)) throw DomainError("interval requires left < right");
  }

  static std::optional<Interval> tryMake(const DoubledPoint& l, const DoubledPoint& r) {
    if (!l.valid() || !r.valid() || !(l < r)) return std::nullopt;
    return Interval(l, r);
  }

  static Interval open(const ExtRational& a, const ExtRational& b) {
    return {DoubledPoint(a, Side::Plus), DoubledPoint(b, Side::Minus)};
  }
  static Interval closed(const Rational& a, const Rational& b) {
    return {DoubledPoint::minus(a), DoubledPoint::plus(b)};
  }
  static Interval closedOpen(const Rational& a, const ExtRational& b) {
    return {DoubledPoint::minus(a), DoubledPoint(b, Side::Minus)};
  }
  static Interval openClosed(const ExtRational& a, const Rational& b) {
    return {DoubledPoint(a, Side::Plus), DoubledPoint::plus(b)};
  }
  static Interval singleton(const Rational& x) { return closed(x, x); }
  // P_a, P_{a)} and P_{+inf}.
  static Interval projective(const Rational& a) { return openClosed(ExtRational::negInf(), a); }
  static Interval projectiveOpen(const ExtRational& a) { return open(ExtRational::negInf(), a); }
  static Interval projectiveInf() { return open(ExtRational::negInf(), ExtRational::posInf()); }

  const DoubledPoint& left() const { return left_; }
  const DoubledPoint& right() const { return right_; }

  bool leftClosed() const { return left_.side == Side::Minus; }
  bool rightClosed() const { return right_.side == Side::Plus; }
  bool isSingleton() const { return left_.value == right_.value; }
  bool isOpen() const { return !leftClosed() && !rightClosed(); }

  bool containsValue(const Rational& x) const {
    return left_ <= DoubledPoint::minus(x) && DoubledPoint::plus(x) <= right_;
  }

  friend bool operator==(const Interval& a, const Interval& b) {
    return a.left_ == b.left_ && a.right_ == b.right_;
  }
  friend std::strong_ordering operator<=>(const Interval& a, const Interval& b) {
    if (auto c = a.left_ <=> b.left_; c != 0) return c;
    return a.right_ <=> b.right_;
  }

 private:
  DoubledPoint left_, right_;
};

// Bracket notation, e.g. "(0,2]", "[1/2,+inf)", "M_{3}" for a singleton.
inline std::string notation(const Interval& v) {
  if (v.isSingleton()) return "M_{" + v.left().value.str() + "}";
  std::string s;
  s += v.leftClosed() ? '[' : '(';
  s += v.left().value.str();
  s += ',';
  s += v.right().value.str();
  s += v.rightClosed() ? ']' : ')';
  return s;
}

inline std::ostream& operator<<(std::ostream& os, const Interval& v) { return os << notation(v); }

// a_i = lower + (upper - lower) * 2^i / (2^i + 1).
class Ladder {
 public:
  Ladder() = default;
  Ladder(Rational lower, Rational upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (!(lower_ < upper_)) throw DomainError("ladder limits must satisfy lower < upper");
  }

  const Rational& lowerLimit() const { return lower_; }
  const Rational& upperLimit() const { return upper_; }

  Rational value(long i) const {
    Rational p = pow2(i);
    Rational t = p / (p + 1);
    return lower_ + (upper_ - lower_) * t;
  }

  Rational dyadicPoint(long i, const Integer& j, long l) const {
    if (l < 0) throw DomainError("dyadic level must be nonnegative");
    Integer top = 1;
    mpz_mul_2exp(top.get_mpz_t(), top.get_mpz_t(), static_cast<mp_bitcnt_t>(l));
    if (j < 0 || j > top) throw DomainError("dyadic index out of range");
    Rational a = value(i), b = value(i + 1);
    return a + frac(j, top) * (b - a);
  }

  // i with a_i <= q < a_{i+1}, or nullopt outside (lower, upper).
  std::optional<long> locate(const Rational& q) const {
    if (q <= lower_ || q >= upper_) return std::nullopt;
    Rational t = (q - lower_) / (upper_ - lower_);
    long i = floorLog2(t / (1 - t));
    while (value(i) > q) --i;
    while (value(i + 1) <= q) ++i;
    return i;
  }

  std::optional<long> indexOf(const Rational& q) const {
    auto i = locate(q);
    if (i && value(*i) == q) return i;
    return std::nullopt;
  }

  friend bool operator==(const Ladder& a, const Ladder& b) {
    return a.lower_ == b.lower_ && a.upper_ == b.upper_;
  }

 private:
  Rational lower_ = 0;
  Rational upper_ = 1;
};

}  // namespace ecluster
