#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>

#include "intdyn/error.hpp"

namespace intdyn {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }
inline double to_double(double x) { return x; }

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

/// floor(x) as an integer-valued rational; exact for any sign.
inline Rational floor_rat(const Rational& x) {
  BigInt n = numerator(x), d = denominator(x);
  BigInt q = n / d;
  if (n < 0 && q * d != n) --q;
  return Rational(q);
}

inline Rational pow_rat(Rational base, long e) {
  if (e < 0) {
    if (base == 0) throw Error(Err::out_of_domain, "0 to a negative power");
    base = Rational(denominator(base), numerator(base));
    e = -e;
  }
  Rational r = 1;
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

/// Parses "p/q", "p", or "-p/q". Throws ParseError on malformed input or q=0.
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw Error(Err::parse_error, "empty rational literal");
  for (char c : s) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+'))
      throw Error(Err::parse_error, "bad character in rational literal '" + s + "'");
  }
  try {
    Rational r(s);
    return r;
  } catch (const std::exception&) {
    throw Error(Err::parse_error, "cannot parse rational '" + s + "'");
  }
}

inline std::string rational_str(const Rational& r) { return r.str(); }

/// If n is a perfect square, stores the root and returns true. n must be >= 0.
inline bool sqrt_if_square(const BigInt& n, BigInt& root) {
  if (n < 0) return false;
  root = boost::multiprecision::sqrt(n);
  return root * root == n;
}

/// Perfect-square test for nonnegative rationals (reduced form: both parts square).
inline bool sqrt_if_square(const Rational& q, Rational& root) {
  BigInt rn, rd;
  if (!sqrt_if_square(numerator(q), rn)) return false;
  if (!sqrt_if_square(denominator(q), rd)) return false;
  root = Rational(rn, rd);
  return true;
}

/// Distance in representable doubles between a and b (same-sign finite values).
inline std::int64_t ulp_distance(double a, double b) {
  static_assert(sizeof(double) == sizeof(std::int64_t));
  auto key = [](double x) {
    std::int64_t i;
    std::memcpy(&i, &x, sizeof(x));
    return i >= 0 ? i : std::int64_t(0x8000000000000000ull) - i;
  };
  std::int64_t d = key(a) - key(b);
  return d < 0 ? -d : d;
}

// Scalar backend adapters. S is either `Rational` (exact) or `double` (float).
template <class S>
struct ScalarOps;

template <>
struct ScalarOps<Rational> {
  static constexpr bool exact = true;
  static Rational from_rational(const Rational& r) { return r; }
  static Rational floor(const Rational& x) { return floor_rat(x); }
  static const char* name() { return "exact"; }
};

template <>
struct ScalarOps<double> {
  static constexpr bool exact = false;
  static double from_rational(const Rational& r) { return to_double(r); }
  static double floor(double x) { return std::floor(x); }
  static const char* name() { return "float"; }
};

template <class S>
S scalar_from(const Rational& r) {
  return ScalarOps<S>::from_rational(r);
}

template <class S>
S abs_s(const S& x) {
  using std::abs;
  using boost::multiprecision::abs;
  return x < S(0) ? S(-x) : x;
}

}  // namespace intdyn
