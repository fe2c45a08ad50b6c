#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "intdyn/interval.hpp"

namespace intdyn {

/// (α·x + β)^exp with rational α, β. α > 0 after canonicalization.
struct LinearFactor {
  Rational alpha, beta;
  long exp = -1;
};

/// Closed-form density descriptor: scale·Π (α_j x + β_j)^(e_j).
///
/// Covers every measure in the catalog — Lebesgue (empty product), 1/x,
/// 1/(x+1), 1/((x+1)(x+2)) — and is closed under the transport operation
/// ψ = |f'|·(φ∘f) for Möbius f. Non-integrable forms (dθ = dx/x) are legal:
/// `integrable` records the quadrature verdict and `normalization` is only
/// meaningful when it holds.
struct Density {
  Rational scale = 1;
  std::vector<LinearFactor> factors;
  bool integrable = true;
  double normalization = 1.0;  // 1/∫ over the ambient interval when integrable
  std::string norm_tag = "1"; // symbolic origin of the constant, e.g. "1/log(2)"

  static Density constant(Rational s) {
    Density d;
    d.scale = std::move(s);
    return d;
  }

  /// scale / ((x+c₁)…(x+c_k))
  static Density reciprocal_product(Rational s, const std::vector<Rational>& shifts) {
    Density d;
    d.scale = std::move(s);
    for (const auto& c : shifts) d.factors.push_back({1, c, -1});
    return d;
  }

  void push_factor(Rational alpha, Rational beta, long exp) {
    factors.push_back({std::move(alpha), std::move(beta), exp});
    canonicalize();
  }

  /// Divide out content, force α > 0, fold constants into the scale, merge
  /// repeated factors, drop zero exponents. Value-preserving.
  void canonicalize() {
    std::vector<LinearFactor> out;
    for (auto& f : factors) {
      if (f.exp == 0) continue;
      if (f.alpha == 0) {
        if (f.beta == 0) throw Error(Err::out_of_domain, "zero density factor");
        scale *= pow_rat(f.beta, f.exp);
        continue;
      }
      if (f.alpha < 0) {
        f.alpha = -f.alpha;
        f.beta = -f.beta;
        if (f.exp % 2 != 0) scale = -scale;
      }
      // Pull the leading coefficient out: (αx+β)^e = α^e·(x + β/α)^e.
      scale *= pow_rat(f.alpha, f.exp);
      f.beta /= f.alpha;
      f.alpha = 1;
      out.push_back(f);
    }
    std::sort(out.begin(), out.end(), [](const LinearFactor& a, const LinearFactor& b) {
      return a.beta < b.beta;
    });
    factors.clear();
    for (auto& f : out) {
      if (!factors.empty() && factors.back().beta == f.beta)
        factors.back().exp += f.exp;
      else
        factors.push_back(f);
    }
    factors.erase(std::remove_if(factors.begin(), factors.end(),
                                 [](const LinearFactor& f) { return f.exp == 0; }),
                  factors.end());
  }

  Rational eval_exact(const Rational& x) const {
    Rational v = scale;
    for (const auto& f : factors) {
      Rational base = f.alpha * x + f.beta;
      if (base == 0) throw Error(Err::out_of_domain, "density pole at sample point");
      v *= pow_rat(base, f.exp);
    }
    return v;
  }

  /// Flattened double-precision form for hot loops.
  struct Compiled {
    double scale = 1.0;
    std::vector<std::array<double, 2>> linear;  // (alpha, beta)
    std::vector<long> exps;

    double eval(double x) const {
      double v = scale;
      for (size_t i = 0; i < linear.size(); ++i) {
        double base = linear[i][0] * x + linear[i][1];
        long e = exps[i];
        if (e == -1) {
          v /= base;
        } else if (e == -2) {
          v /= base * base;
        } else if (e == 1) {
          v *= base;
        } else {
          v *= std::pow(base, double(e));
        }
      }
      return v;
    }
  };

  Compiled compiled() const {
    Compiled c;
    c.scale = to_double(scale);
    for (const auto& f : factors) {
      c.linear.push_back({to_double(f.alpha), to_double(f.beta)});
      c.exps.push_back(f.exp);
    }
    return c;
  }

  template <class S>
  S eval(const S& x) const {
    if constexpr (ScalarOps<S>::exact) {
      return eval_exact(x);
    } else {
      return compiled().eval(x);
    }
  }

  double eval_normalized(double x) const { return normalization * eval<double>(x); }

  /// sup over [lo,hi] when the form is provably monotone decreasing there
  /// (all exponents ≤ 0 and every factor positive at lo). nullopt otherwise
  /// or when the value is unbounded.
  std::optional<Rational> sup_on(const Rational& lo, const Rational& hi) const {
    (void)hi;
    if (scale < 0) return std::nullopt;
    for (const auto& f : factors) {
      if (f.exp > 0) return std::nullopt;
      if (!(f.alpha > 0)) return std::nullopt;
      if (!(f.alpha * lo + f.beta > 0)) return std::nullopt;  // pole or sign change at/below lo
    }
    return eval_exact(lo);
  }

  /// ∫_[lo,hi] in closed form (partial fractions / power rule), Simpson
  /// fallback for exotic exponent patterns. Throws QuadratureFailure when a
  /// negative-exponent factor vanishes on [lo,hi] (divergent integral).
  double integrate(double lo, double hi) const;

  bool same_factors(const Density& o) const {
    if (factors.size() != o.factors.size()) return false;
    for (size_t i = 0; i < factors.size(); ++i)
      if (factors[i].alpha != o.factors[i].alpha || factors[i].beta != o.factors[i].beta ||
          factors[i].exp != o.factors[i].exp)
        return false;
    return true;
  }

  /// Equal up to a positive scalar multiple (exact factored comparison).
  bool projectively_equal(const Density& o) const {
    return same_factors(o) && scale != 0 && o.scale != 0 && (scale > 0) == (o.scale > 0);
  }

  std::string str() const {
    std::ostringstream os;
    os << rational_str(scale);
    for (const auto& f : factors) {
      os << "*(x";
      if (f.beta > 0) os << "+" << rational_str(f.beta);
      if (f.beta < 0) os << "-" << rational_str(Rational(-f.beta));
      os << ")^" << f.exp;
    }
    return os.str();
  }
};

namespace detail {

inline double simpson(const std::function<double(double)>& fn, double a, double b, int depth,
                      double fa, double fm, double fb, double whole, double tol) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = fn(lm), frm = fn(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0) throw Error(Err::quadrature_failure, "adaptive quadrature depth exhausted");
  if (std::abs(left + right - whole) <= 15.0 * tol) return left + right + (left + right - whole) / 15.0;
  return simpson(fn, a, m, depth - 1, fa, flm, fm, left, tol * 0.5) +
         simpson(fn, m, b, depth - 1, fm, frm, fb, right, tol * 0.5);
}

}  // namespace detail

inline double Density::integrate(double lo, double hi) const {
  if (!(lo <= hi)) throw Error(Err::quadrature_failure, "integrate needs lo <= hi");
  if (lo == hi) return 0.0;
  for (const auto& f : factors) {
    if (f.exp < 0) {
      double root = -to_double(f.beta) / to_double(f.alpha);
      if (root >= lo && root <= hi)
        throw Error(Err::quadrature_failure, "divergent: factor vanishes inside the range");
    }
  }
  double s = to_double(scale);
  if (factors.empty()) return s * (hi - lo);
  bool all_simple = std::all_of(factors.begin(), factors.end(),
                                [](const LinearFactor& f) { return f.exp == -1; });
  if (factors.size() == 1) {
    const auto& f = factors[0];
    double a = to_double(f.alpha), b = to_double(f.beta);
    if (f.exp == -1) return s / a * std::log((a * hi + b) / (a * lo + b));
    double e = double(f.exp);
    return s / (a * (e + 1.0)) *
           (std::pow(a * hi + b, e + 1.0) - std::pow(a * lo + b, e + 1.0));
  }
  if (all_simple) {
    // Distinct simple poles: Π 1/(x+β_j) = Σ A_j/(x+β_j).
    double total = 0.0;
    for (size_t j = 0; j < factors.size(); ++j) {
      double aj = to_double(factors[j].alpha), bj = to_double(factors[j].beta);
      double xj = -bj / aj;
      double A = 1.0;
      for (size_t l = 0; l < factors.size(); ++l) {
        if (l == j) continue;
        A /= to_double(factors[l].alpha) * xj + to_double(factors[l].beta);
      }
      total += A / aj * std::log((aj * hi + bj) / (aj * lo + bj));
    }
    return s * total;
  }
  // Exotic pattern: fall back to adaptive quadrature.
  auto fn = [this](double x) { return eval<double>(x); };
  double fa = fn(lo), fm = fn(0.5 * (lo + hi)), fb = fn(hi);
  double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson(fn, lo, hi, 48, fa, fm, fb, whole, 1e-13);
}

/// Sets the integrable flag and normalization from quadrature over [lo,hi].
inline void finalize_density(Density& d, double lo, double hi, const std::string& tag = "") {
  try {
    double mass = d.integrate(lo, hi);
    d.integrable = std::isfinite(mass) && mass > 0;
    if (d.integrable) {
      d.normalization = 1.0 / mass;
      d.norm_tag = tag.empty() ? "computed" : tag;
    }
  } catch (const Error&) {
    d.integrable = false;
    d.normalization = 1.0;
    d.norm_tag = "none (not integrable)";
  }
}

}  // namespace intdyn
