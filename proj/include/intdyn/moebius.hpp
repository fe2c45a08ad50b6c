#pragma once

#include <array>
#include <initializer_list>
#include <vector>

#include "intdyn/interval.hpp"

namespace intdyn {

/// Injective linear-fractional map x ↦ (a·x + b)/(c·x + d) restricted to `domain`.
///
/// Composition is the 2×2 coefficient-matrix product, inversion the adjugate,
/// so all branch algebra stays exact over rational coefficients.
template <class S>
struct MoebiusBranch {
  S a{}, b{}, c{}, d{};
  Interval<S> domain;

  MoebiusBranch() = default;
  MoebiusBranch(S a_, S b_, S c_, S d_, Interval<S> dom)
      : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)), domain(std::move(dom)) {}

  S det() const { return a * d - b * c; }

  S eval(const S& x) const {
    S den = c * x + d;
    if (den == S(0)) throw Error(Err::out_of_domain, "Moebius pole hit during evaluation");
    return (a * x + b) / den;
  }

  /// (ad − bc)/(cx + d)²; constant sign on a pole-free domain.
  S derivative(const S& x) const {
    S den = c * x + d;
    if (den == S(0)) throw Error(Err::non_differentiable, "Moebius pole hit during differentiation");
    return det() / (den * den);
  }

  bool has_pole_in_domain() const {
    if (c == S(0)) return d == S(0);
    S pole = S(-d) / c;
    return domain.contains(pole);
  }

  /// Image of the domain; endpoints map to endpoints (monotone, pole-free).
  Interval<S> range() const {
    S y0 = eval(domain.lo), y1 = eval(domain.hi);
    return y0 < y1 ? Interval<S>(y0, y1) : Interval<S>(y1, y0);
  }

  /// Inverse map with coefficients (d, −b, −c, a), defined on range().
  MoebiusBranch inverse() const { return MoebiusBranch(d, S(-b), S(-c), a, range()); }

  std::array<S, 4> coeffs() const { return {a, b, c, d}; }
};

/// f ∘ g via coefficient-matrix product; the result lives on g's domain.
template <class S>
MoebiusBranch<S> compose(const MoebiusBranch<S>& f, const MoebiusBranch<S>& g) {
  return MoebiusBranch<S>(f.a * g.a + f.b * g.c, f.a * g.b + f.b * g.d,
                          f.c * g.a + f.d * g.c, f.c * g.b + f.d * g.d, g.domain);
}

/// True when the coefficient quadruples are proportional (all 2×2 minors vanish).
template <class S>
bool projectively_equal(const MoebiusBranch<S>& f, const MoebiusBranch<S>& g) {
  std::array<S, 4> u = f.coeffs(), v = g.coeffs();
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (!(u[i] * v[j] == u[j] * v[i])) return false;
  return true;
}

/// Solves branch(x) = y. Throws OutOfRange if y is outside the branch image.
template <class S>
S invert_piece(const MoebiusBranch<S>& branch, const S& y) {
  if (!branch.range().contains(y))
    throw Error(Err::out_of_range, "point is outside the branch range");
  return branch.inverse().eval(y);
}

template <class S>
MoebiusBranch<S> moebius_from(const Rational& a, const Rational& b, const Rational& c,
                              const Rational& d, const Interval<S>& dom) {
  return MoebiusBranch<S>(scalar_from<S>(a), scalar_from<S>(b), scalar_from<S>(c),
                          scalar_from<S>(d), dom);
}

}  // namespace intdyn
