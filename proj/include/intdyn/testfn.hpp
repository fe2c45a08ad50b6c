#pragma once

#include <string>
#include <vector>

#include "intdyn/interval.hpp"

namespace intdyn {

/// Closed-form test functions used to certify the operator relations.
///
/// The suite fixes {1, x, x², χ_[0,1/2), 1/(x+1)} — a pragmatic choice (the
/// relations hold on all of L²; these five exercise constants, polynomials, a
/// discontinuity, and a Möbius composition). Exact evaluation at rationals
/// keeps identity checks free of interpolation error.
struct TestFn {
  enum class Kind { one, identity, square, step_half, inv_xp1 } kind = Kind::one;

  Rational eval_exact(const Rational& x) const {
    switch (kind) {
      case Kind::one: return 1;
      case Kind::identity: return x;
      case Kind::square: return x * x;
      case Kind::step_half: return x >= 0 && x < Rational(1, 2) ? 1 : 0;
      case Kind::inv_xp1: return Rational(1) / (x + 1);
    }
    return 0;
  }

  double eval(double x) const {
    switch (kind) {
      case Kind::one: return 1.0;
      case Kind::identity: return x;
      case Kind::square: return x * x;
      case Kind::step_half: return x >= 0.0 && x < 0.5 ? 1.0 : 0.0;
      case Kind::inv_xp1: return 1.0 / (x + 1.0);
    }
    return 0.0;
  }

  /// ∫_[lo,hi] φ² dλ in closed form (for exact completeness residuals).
  Rational l2_mass(const Rational& lo, const Rational& hi) const {
    if (!(lo < hi)) return 0;
    switch (kind) {
      case Kind::one: return hi - lo;
      case Kind::identity: return (hi * hi * hi - lo * lo * lo) / 3;
      case Kind::square: return (pow_rat(hi, 5) - pow_rat(lo, 5)) / 5;
      case Kind::step_half: {
        Rational h = hi < Rational(1, 2) ? hi : Rational(1, 2);
        Rational l = lo > Rational(0) ? lo : Rational(0);
        return l < h ? h - l : Rational(0);
      }
      case Kind::inv_xp1: return Rational(1) / (lo + 1) - Rational(1) / (hi + 1);
    }
    return 0;
  }

  /// sup |φ| on [0,1].
  Rational sup_abs() const { return 1; }

  std::string name() const {
    switch (kind) {
      case Kind::one: return "1";
      case Kind::identity: return "x";
      case Kind::square: return "x^2";
      case Kind::step_half: return "chi_[0,1/2)";
      case Kind::inv_xp1: return "1/(x+1)";
    }
    return "?";
  }
};

inline std::vector<TestFn> standard_test_functions() {
  using K = TestFn::Kind;
  return {{K::one}, {K::identity}, {K::square}, {K::step_half}, {K::inv_xp1}};
}

}  // namespace intdyn
