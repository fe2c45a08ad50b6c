#pragma once

#include <vector>

#include "intdyn/branch_system.hpp"
#include "intdyn/density.hpp"

namespace intdyn {

template <class S>
struct TransferResult {
  S value{};
  Rational tail_bound = 0;  // rigorous bound on the dropped terms (0 for finite arity)
  int terms = 0;
};

/// Perron–Frobenius sum (Lφ)(x) = Σ_{i≤K} |f_i'(x)|·φ(f_i(x)).
///
/// For infinite systems the truncation tail is bounded rigorously by
/// sup(φ)·Σ_{i>K} sup|f_i'| from the system's tail-bound rule; TailUnbounded
/// when no such bound is derivable. K beyond the materialized depth is served
/// from the generating rule.
template <class S>
TransferResult<S> transfer_apply(const BranchSystem<S>& f, const Density& phi, const S& x,
                                 int K = -1) {
  if (!f.ambient.contains_interior(x))
    throw Error(Err::out_of_domain, "transfer sample must be interior");
  if (K < 0) K = f.arity();
  TransferResult<S> out;
  out.terms = K;
  if (!f.infinite && K > f.arity()) K = f.arity();

  if (f.infinite) {
    if (K > f.arity() && !f.rule)
      throw Error(Err::index_out_of_range, "truncation exceeds materialized branches");
    if (!f.tail) throw Error(Err::tail_unbounded, "no tail bound rule for this family");
    auto sup = phi.sup_on(Rational(f.ambient.lo), Rational(f.ambient.hi));
    if (!sup) throw Error(Err::tail_unbounded, "density admits no supremum bound");
    out.tail_bound = *sup * f.tail->eval(K);
  }

  if constexpr (!ScalarOps<S>::exact) {
    // Float backend: flatten the density once and stream harmonic-rule
    // coefficients as doubles (affine in k), so million-term truncations stay
    // cheap. The exact backend below keeps full rational arithmetic and is
    // meant for small K.
    auto dens = phi.compiled();
    const bool harmonic = f.rule && f.rule->kind == FamilyKind::harmonic;
    double hb[4] = {0, 0, 0, 0}, hs[4] = {0, 0, 0, 0};
    if (harmonic) {
      hb[0] = to_double(f.rule->base.a); hb[1] = to_double(f.rule->base.b);
      hb[2] = to_double(f.rule->base.c); hb[3] = to_double(f.rule->base.d);
      hs[0] = to_double(f.rule->gen.a); hs[1] = to_double(f.rule->gen.b);
      hs[2] = to_double(f.rule->gen.c); hs[3] = to_double(f.rule->gen.d);
    }
    double acc = 0;
    for (int k = 1; k <= K; ++k) {
      double a, b, c, d;
      if (k <= f.arity() && !harmonic) {
        const auto& br = f.branch(k);
        a = br.a; b = br.b; c = br.c; d = br.d;
      } else if (harmonic) {
        a = hb[0] + k * hs[0]; b = hb[1] + k * hs[1];
        c = hb[2] + k * hs[2]; d = hb[3] + k * hs[3];
      } else {
        auto m = f.rule->coeffs_of(k);
        a = to_double(m.a); b = to_double(m.b); c = to_double(m.c); d = to_double(m.d);
      }
      double den = c * x + d;
      acc += std::abs((a * d - b * c) / (den * den)) * dens.eval((a * x + b) / den);
    }
    out.value = acc;
    return out;
  } else {
    S acc(0);
    for (int k = 1; k <= K; ++k) {
      S a, b, c, d;
      if (k <= f.arity()) {
        const auto& br = f.branch(k);
        a = br.a; b = br.b; c = br.c; d = br.d;
      } else {
        auto m = f.rule->coeffs_of(k);
        a = scalar_from<S>(m.a); b = scalar_from<S>(m.b);
        c = scalar_from<S>(m.c); d = scalar_from<S>(m.d);
      }
      S den = c * x + d;
      S deriv = abs_s(S((a * d - b * c) / (den * den)));
      acc += deriv * phi.eval<S>((a * x + b) / den);
    }
    out.value = acc;
    return out;
  }
}

/// Residual of the fixed-point equation Lφ = φ over a sample set, with the
/// truncation tail accounted for: `beyond_tail` is max(|φ−Lφ| − tail, 0).
struct ResidualReport {
  long samples = 0;
  double max_residual = 0.0;      // max |φ(x) − (Lφ)(x)|
  double tail_bound = 0.0;        // rigorous truncation allowance
  double max_beyond_tail = 0.0;   // residual unexplained by truncation
  bool exact_zero_beyond_tail = true;  // residual ≤ tail everywhere
  int terms = 0;
};

template <class S>
ResidualReport invariance_residual(const BranchSystem<S>& f, const Density& phi,
                                   const std::vector<S>& samples, int K = -1) {
  ResidualReport rep;
  rep.samples = static_cast<long>(samples.size());
  for (const S& x : samples) {
    auto t = transfer_apply(f, phi, x, K);
    rep.terms = t.terms;
    S deficit = abs_s(S(phi.eval<S>(x) - t.value));
    double d = to_double(deficit);
    rep.max_residual = std::max(rep.max_residual, d);
    rep.tail_bound = std::max(rep.tail_bound, to_double(t.tail_bound));
    if constexpr (ScalarOps<S>::exact) {
      if (deficit > S(t.tail_bound)) {
        rep.exact_zero_beyond_tail = false;
        rep.max_beyond_tail =
            std::max(rep.max_beyond_tail, to_double(S(deficit - S(t.tail_bound))));
      }
    } else {
      double beyond = d - to_double(t.tail_bound);
      if (beyond > 0) {
        rep.max_beyond_tail = std::max(rep.max_beyond_tail, beyond);
        rep.exact_zero_beyond_tail = false;
      }
    }
  }
  return rep;
}

/// Density transport onto the induced system: ψ = |f₁'|·(φ∘f₁) in closed
/// form; the factored class is closed under Möbius composition. Returned
/// un-normalized ("up to scalar multiple"); the integrable flag is set by
/// quadrature.
inline Density transport_density(const BranchSystem<Rational>& f, const Density& phi) {
  if (f.arity() != 2 || f.infinite)
    throw Error(Err::arity_mismatch, "density transport requires an arity-2 system");
  const auto& f1 = f.branch(1);
  const Rational &a = f1.a, &b = f1.b, &c = f1.c, &d = f1.d;
  Density psi;
  Rational det = a * d - b * c;
  psi.scale = phi.scale * (det < 0 ? -det : det);
  long exp_cd = -2;  // from |f₁'| = |det|/(cx+d)²
  for (const auto& fac : phi.factors) {
    // (α·f₁(x) + β) = ((αa+βc)x + (αb+βd)) / (cx+d)
    psi.factors.push_back({fac.alpha * a + fac.beta * c, fac.alpha * b + fac.beta * d, fac.exp});
    exp_cd -= fac.exp;
  }
  psi.factors.push_back({c, d, exp_cd});
  psi.canonicalize();
  finalize_density(psi, to_double(f.ambient.lo), to_double(f.ambient.hi));
  return psi;
}

/// Induced measure of the jump construction, ν(E) = μ(T⁻¹(E) ∩ A) for
/// dμ = φ dλ: Σ over branches of ∫_{f_i(E)∩A} φ dλ via the closed-form
/// antiderivative.
template <class S>
double induced_measure(const PiecewiseMap<S>& T, const Interval<S>& A, const Density& phi,
                       const Interval<S>& E) {
  if (!T.ambient.contains(E)) throw Error(Err::out_of_domain, "E must sit inside the ambient");
  double total = 0.0;
  for (const auto& piece : T.materialize()) {
    auto img = intersect(piece.range(), E);
    if (!img) continue;
    MoebiusBranch<S> inv = piece.inverse();
    S u = inv.eval(img->lo), v = inv.eval(img->hi);
    Interval<S> pre = u < v ? Interval<S>(u, v) : Interval<S>(v, u);
    auto clipped = intersect(pre, A);
    if (!clipped) continue;
    total += phi.integrate(to_double(clipped->lo), to_double(clipped->hi));
  }
  return total;
}

/// Pullback identity ψ₁ = |T'|·(ψ₂∘T): max pointwise residual over samples.
struct PullbackReport {
  long samples = 0;
  long excluded = 0;  // non-differentiable points skipped
  double max_residual = 0.0;
  bool exact_zero = true;
};

template <class S>
PullbackReport pullback_check(const PiecewiseMap<S>& T, const Density& psi1,
                              const Density& psi2, const std::vector<S>& samples) {
  PullbackReport rep;
  rep.samples = static_cast<long>(samples.size());
  for (const S& x : samples) {
    S deriv;
    try {
      deriv = T.derivative(x);
    } catch (const Error& e) {
      if (e.kind() == Err::non_differentiable) {
        ++rep.excluded;
        continue;
      }
      throw;
    }
    S rhs = abs_s(deriv) * psi2.eval<S>(T.eval(x));
    S diff = abs_s(S(psi1.eval<S>(x) - rhs));
    if (diff != S(0)) rep.exact_zero = false;
    rep.max_residual = std::max(rep.max_residual, to_double(diff));
  }
  return rep;
}

}  // namespace intdyn
