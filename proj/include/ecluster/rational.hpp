#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "error.hpp"

namespace ecluster {

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational parseRational(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw ParseError("empty rational");
  if (s.front() == '+') s.erase(0, 1);
  auto slash = s.find('/');
  auto digitsOk = [](std::string_view d, bool allowSign) {
    if (!d.empty() && allowSign && d.front() == '-') d.remove_prefix(1);
    if (d.empty()) return false;
    for (char c : d)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  if (slash == std::string::npos) {
    auto dot = s.find('.');
    if (dot != std::string::npos) {
      std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
      bool neg = !whole.empty() && whole.front() == '-';
      if (neg) whole.erase(0, 1);
      if (whole.empty()) whole = "0";
      if (!digitsOk(whole, false) || !digitsOk(frac, false))
        throw ParseError("bad decimal: " + s);
      Integer den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
      Rational r(Integer(whole + frac), den);
      r.canonicalize();
      return neg ? Rational(-r) : r;
    }
    if (!digitsOk(s, true)) throw ParseError("bad rational: " + s);
    return Rational(Integer(s));
  }
  std::string num = s.substr(0, slash), den = s.substr(slash + 1);
  if (!digitsOk(num, true) || !digitsOk(den, false))
    throw ParseError("bad rational: " + s);
  Integer d(den);
  if (d == 0) throw ParseError("zero denominator: " + s);
  Rational r(Integer(num), d);
  r.canonicalize();
  return r;
}

// p/q in lowest terms.
inline Rational frac(const Integer& p, const Integer& q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

inline std::string toString(const Rational& q) { return q.get_str(); }

inline Integer floorOf(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Integer ceilOf(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Rational pow2(long k) {
  Integer p = 1;
  if (k >= 0) {
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
    return Rational(p);
  }
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(-k));
  return Rational(Integer(1), p);
}

// floor(log2 q) for q > 0, exact.
inline long floorLog2(const Rational& q) {
  long k = static_cast<long>(mpz_sizeinbase(q.get_num_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(q.get_den_mpz_t(), 2));
  while (pow2(k) > q) --k;
  while (pow2(k + 1) <= q) ++k;
  return k;
}

// Exponent m with den(q) = 2^m, or -1 when q is not dyadic.
inline long dyadicLevel(const Rational& q) {
  mpz_srcptr d = q.get_den_mpz_t();
  if (mpz_popcount(d) != 1) return -1;
  return static_cast<long>(mpz_sizeinbase(d, 2)) - 1;
}

inline bool isInteger(const Rational& q) { return q.get_den() == 1; }

inline long toLong(const Integer& z) {
  if (!z.fits_slong_p()) throw DomainError("integer out of range");
  return z.get_si();
}

}  // namespace ecluster
