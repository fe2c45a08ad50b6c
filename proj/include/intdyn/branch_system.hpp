#pragma once

#include <span>
#include <vector>

#include "intdyn/piecewise.hpp"

namespace intdyn {

/// Branching function system f = {f_i : i ∈ Ω_N}: injective branches defined on
/// all of `ambient` whose ranges R_i = f_i(ambient) partition it up to measure
/// zero. Indices are 1-based. Countably infinite systems are materialized up to
/// `truncation` and optionally carry a generating `rule` plus a tail bound on
/// Σ sup|f_k'| for truncated transfer sums.
template <class S>
struct BranchSystem {
  Interval<S> ambient;
  std::vector<MoebiusBranch<S>> branches;
  bool infinite = false;
  std::optional<FamilyRule> rule;
  std::optional<TailBound> tail;

  int arity() const { return static_cast<int>(branches.size()); }

  const MoebiusBranch<S>& branch(int i) const {
    if (i < 1 || i > arity())
      throw Error(Err::index_out_of_range, "branch index " + std::to_string(i));
    return branches[static_cast<size_t>(i - 1)];
  }

  Interval<S> range_of(int i) const { return branch(i).range(); }

  /// χ_{R_i} membership: ranges are half-open [lo, hi), the range touching the
  /// ambient top is closed there.
  bool in_range(int i, const S& x) const {
    Interval<S> r = range_of(i);
    if (x < r.lo) return false;
    if (x < r.hi) return true;
    return x == r.hi && r.hi == ambient.hi;
  }

  /// Rebuild with a different truncation depth (rule-backed systems only).
  BranchSystem with_truncation(int K) const {
    if (!infinite || !rule) return *this;
    BranchSystem out = *this;
    out.branches.clear();
    for (int k = 1; k <= K; ++k) {
      auto m = rule->coeffs_of(k);
      out.branches.push_back(moebius_from<S>(m.a, m.b, m.c, m.d, ambient));
    }
    return out;
  }
};

/// Radon–Nikodym weight Φ_{f_i}(x) = |f_i'(x)| (Lebesgue base measure).
template <class S>
S rn_derivative(const MoebiusBranch<S>& f_i, const S& x) {
  return abs_s(f_i.derivative(x));
}

/// Checks the branching-system conditions: positive |f'|, pairwise disjoint
/// ranges, coverage (exact for finite arity, residual-reported for infinite).
template <class S>
ValidationReport validate_system(const BranchSystem<S>& f) {
  ValidationReport rep;
  const double tol = ScalarOps<S>::exact ? 0.0 : 64 * std::numeric_limits<double>::epsilon();
  rep.pieces_checked = f.arity();
  std::vector<Interval<S>> ranges;
  for (int i = 1; i <= f.arity(); ++i) {
    const auto& br = f.branch(i);
    std::string tag = "branch " + std::to_string(i);
    if (br.det() == S(0)) {
      rep.fail("degenerate", tag + " has zero determinant (not injective)");
      continue;
    }
    if (br.has_pole_in_domain()) {
      rep.fail("pole", tag + " has a pole inside the ambient interval");
      continue;
    }
    if (!(br.domain == f.ambient)) rep.fail("domain", tag + " is not defined on all of the ambient interval");
    if (!ambient_contains(f.ambient, br.range(), tol))
      rep.fail("image", tag + " range leaves the ambient interval");
    ranges.push_back(br.range());
  }
  detail::check_partition(rep, f.ambient, ranges, f.infinite, tol);
  return rep;
}

/// The coding map F with F ∘ f_i = id: pieces (R_i, f_i⁻¹), spatially ordered.
/// Rule-backed systems yield a rule-backed map (adjugate transported), so the
/// coding map evaluates beyond the materialized depth.
template <class S>
PiecewiseMap<S> coding_map_of(const BranchSystem<S>& f) {
  auto rep = validate_system(f);
  if (!rep.valid)
    throw Error(Err::invalid_system, "coding map of an invalid branching system: " +
                                         rep.violations.front().kind);
  PiecewiseMap<S> F;
  F.ambient = f.ambient;
  for (const auto& br : f.branches) F.pieces.push_back(br.inverse());
  std::sort(F.pieces.begin(), F.pieces.end(),
            [](const MoebiusBranch<S>& a, const MoebiusBranch<S>& b) {
              return a.domain.lo < b.domain.lo;
            });
  if (f.infinite && f.rule) {
    // Branch pieces become map pieces under the adjugate; both rule kinds are
    // closed under it (adj is linear; adj(PQ) = adj(Q)adj(P)).
    FamilyRule inv;
    inv.kind = f.rule->kind;
    inv.base = f.rule->base.adjugate();
    inv.gen = f.rule->gen.adjugate();
    inv.ratio = f.rule->ratio;
    inv.hi0 = f.rule->hi0;
    inv.gen_left = !f.rule->gen_left;
    F.rule = inv;
    F.truncation = f.arity();
    F.pieces.clear();  // the rule covers every piece; avoid double coverage
  }
  return F;
}

/// f_{w1} ∘ f_{w2} ∘ … ∘ f_{wm} as a single branch (matrix product).
template <class S>
MoebiusBranch<S> compose_branches(const BranchSystem<S>& f, std::span<const int> word) {
  if (word.empty()) throw Error(Err::index_out_of_range, "empty composition word");
  MoebiusBranch<S> acc = f.branch(word[0]);
  for (size_t i = 1; i < word.size(); ++i) acc = compose(acc, f.branch(word[i]));
  acc.domain = f.ambient;
  return acc;
}

template <class S>
MoebiusBranch<S> compose_branches(const BranchSystem<S>& f, std::initializer_list<int> word) {
  return compose_branches(f, std::span<const int>(word.begin(), word.size()));
}

/// Jump family g_n = f₂^(n−1) ∘ f₁ of an arity-2 system, materialized to depth
/// K (g₁ = f₁). Recognizes the two catalog range geometries to attach a
/// closed-form rule and a truncation tail bound.
template <class S>
BranchSystem<S> jump_family(const BranchSystem<S>& f, int K) {
  if (f.arity() != 2 || f.infinite)
    throw Error(Err::arity_mismatch, "jump family requires an arity-2 system");
  if (K < 1) throw Error(Err::out_of_range, "jump family depth must be >= 1");
  BranchSystem<S> g;
  g.ambient = f.ambient;
  g.infinite = true;
  const auto& f1 = f.branch(1);
  const auto& f2 = f.branch(2);
  MoebiusBranch<S> cur = f1;
  for (int n = 1; n <= K; ++n) {
    g.branches.push_back(cur);
    cur = compose(f2, cur);
    cur.domain = f.ambient;
  }

  if constexpr (ScalarOps<S>::exact) {
    // sup|f'| over a pole-free interval sits at an endpoint (|f'| is monotone).
    auto sup_abs_deriv = [&](const MoebiusBranch<S>& br) {
      S a = abs_s(br.derivative(f.ambient.lo)), b = abs_s(br.derivative(f.ambient.hi));
      return a < b ? b : a;
    };
    S r = sup_abs_deriv(f2), c = sup_abs_deriv(f1);
    Interval<S> r1 = f1.range();
    if (f2.b == S(0) && f2.c == S(0) && S(0) < f2.a / f2.d && f2.a / f2.d < S(1) &&
        r1.lo == (f2.a / f2.d) * r1.hi) {
      // Pure scaling f₂ ⇒ ranges f₂^(n-1)(R₁) shrink geometrically.
      FamilyRule rule;
      rule.kind = FamilyKind::geometric;
      rule.base = {Rational(f1.a), Rational(f1.b), Rational(f1.c), Rational(f1.d)};
      rule.gen = {Rational(f2.a), Rational(f2.b), Rational(f2.c), Rational(f2.d)};
      rule.ratio = Rational(f2.a / f2.d);
      rule.hi0 = Rational(r1.hi);
      rule.gen_left = true;
      g.rule = rule;
    } else if (f2.a == S(1) && f2.b == S(0) && f2.c == S(1) && f2.d == S(1) &&
               f.ambient.lo == S(0) && f.ambient.hi == S(1) &&
               r1.lo == Rational(1, 2) && r1.hi == S(1)) {
      // Farey pattern x/(x+1): ranges (1/(n+1), 1/n] and, since f₂'s matrix is
      // unipotent, coefficients affine in n: g_n = (M₁ − NM₁) + n·NM₁.
      MoebiusCoeffs m1{Rational(f1.a), Rational(f1.b), Rational(f1.c), Rational(f1.d)};
      MoebiusCoeffs step = MoebiusCoeffs{0, 0, 1, 0}.mul(m1);
      FamilyRule rule;
      rule.kind = FamilyKind::harmonic;
      rule.base = {m1.a - step.a, m1.b - step.b, m1.c - step.c, m1.d - step.d};
      rule.gen = step;
      g.rule = rule;
    }

    if (r < S(1)) {
      TailBound tb;
      tb.kind = TailBound::Kind::geometric;
      tb.c = Rational(c);
      tb.r = Rational(r);
      g.tail = tb;
    } else if (g.rule && g.rule->kind == FamilyKind::harmonic && abs_s(f1.det()) == S(1) &&
               abs_s(f2.det()) == S(1)) {
      // |g_n'| = 1/(x+n)² for the Farey pattern, so Σ_{n>K} sup|g_n'| ≤ 1/K.
      TailBound tb;
      tb.kind = TailBound::Kind::inv_linear;
      tb.c = 1;
      g.tail = tb;
    }
  }
  return g;
}

}  // namespace intdyn
