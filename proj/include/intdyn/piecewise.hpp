#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "intdyn/moebius.hpp"

namespace intdyn {

/// Rational coefficient quadruple, backend-independent storage for rules.
struct MoebiusCoeffs {
  Rational a, b, c, d;

  MoebiusCoeffs mul(const MoebiusCoeffs& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  MoebiusCoeffs adjugate() const { return {d, -b, -c, a}; }
  MoebiusCoeffs add_scaled(const MoebiusCoeffs& o, const Rational& t) const {
    return {a + t * o.a, b + t * o.b, c + t * o.c, d + t * o.d};
  }
};

/// Upper bound on Σ_{k>K} sup|f_k'| for a countable branch family.
struct TailBound {
  enum class Kind { inv_linear, geometric } kind = Kind::inv_linear;
  Rational c = 1;        // scale
  Rational r = Rational(1, 2);  // ratio (geometric only), 0 < r < 1

  Rational eval(int K) const {
    if (K < 1) throw Error(Err::out_of_range, "tail bound needs K >= 1");
    if (kind == Kind::inv_linear) return c / K;            // Σ_{k>K} c/k² ≤ c/K
    return c * pow_rat(r, K) / (Rational(1) - r);          // Σ_{k>K} c·r^{k-1}
  }
};

enum class FamilyKind { harmonic, geometric };

/// Closed-form generator for a countably infinite family of Möbius pieces.
///
/// harmonic:  piece k has domain [1/(k+1), 1/k] and coefficients base + k·step.
/// geometric: piece k has domain [hi0·r^k, hi0·r^(k-1)] and coefficients
///            gen^(k-1)·base (gen_left) or base·gen^(k-1).
///
/// index_of resolves the half-open convention (lo excluded, hi included)
/// analytically, independent of any truncation depth.
struct FamilyRule {
  FamilyKind kind = FamilyKind::harmonic;
  MoebiusCoeffs base{};
  MoebiusCoeffs gen{};   // `step` for harmonic, generator matrix for geometric
  Rational ratio = Rational(1, 2);
  Rational hi0 = 1;
  bool gen_left = false;
  std::optional<TailBound> tail;

  MoebiusCoeffs coeffs_of(int k) const {
    if (k < 1) throw Error(Err::index_out_of_range, "family index starts at 1");
    if (kind == FamilyKind::harmonic) return base.add_scaled(gen, Rational(k));
    MoebiusCoeffs p{1, 0, 0, 1};
    for (int i = 1; i < k; ++i) p = p.mul(gen);
    return gen_left ? p.mul(base) : base.mul(p);
  }

  std::pair<Rational, Rational> domain_of(int k) const {
    if (k < 1) throw Error(Err::index_out_of_range, "family index starts at 1");
    if (kind == FamilyKind::harmonic) return {Rational(1, k + 1), Rational(1, k)};
    Rational hi = hi0 * pow_rat(ratio, k - 1);
    return {hi * ratio, hi};
  }

  template <class S>
  MoebiusBranch<S> piece(int k) const {
    auto [lo, hi] = domain_of(k);
    auto m = coeffs_of(k);
    return moebius_from<S>(m.a, m.b, m.c, m.d, interval_from<S>(lo, hi));
  }

  /// k with x ∈ (domain lo, domain hi]; throws NoPiece for x at or below the
  /// accumulation point.
  template <class S>
  int index_of(const S& x) const {
    if (!(x > S(0))) throw Error(Err::no_piece, "point at or below the family accumulation point");
    if (kind == FamilyKind::harmonic) {
      S k = ScalarOps<S>::floor(S(1) / x);
      if (k < S(1)) throw Error(Err::no_piece, "point above the first harmonic piece");
      if (k > S(1000000000)) throw Error(Err::no_piece, "harmonic index exceeds 1e9");
      return static_cast<int>(to_double(k));
    }
    S hi = scalar_from<S>(hi0), r = scalar_from<S>(ratio);
    if (x > hi) throw Error(Err::no_piece, "point above the first geometric piece");
    int k = 1;
    S t = hi * r;
    while (x <= t) {
      t = t * r;
      if (++k > 4096) throw Error(Err::no_piece, "geometric index search exceeded depth 4096");
    }
    return k;
  }

  /// Branch count that covers the ambient space down to roughly one cell of a
  /// width-1/cells grid (used by the Ulam discretization).
  int suggested_truncation(int cells) const {
    if (kind == FamilyKind::harmonic) return std::max(64, 4 * cells);
    return 64;
  }
};

struct Violation {
  std::string kind;
  std::string detail;
};

/// Outcome of structural validation; failures are carried, never thrown.
struct ValidationReport {
  bool valid = true;
  std::vector<Violation> violations;
  double coverage_residual = 0.0;
  std::string coverage_residual_exact;  // "p/q" when the backend is exact
  int pieces_checked = 0;

  void fail(std::string kind, std::string detail) {
    valid = false;
    violations.push_back({std::move(kind), std::move(detail)});
  }
};

/// Piecewise Möbius map on a closed ambient interval.
///
/// `pieces` are explicit branches evaluated first-match-first (the
/// lower-indexed piece wins at shared endpoints); `rule`, when present,
/// supplies the countable tail of pieces with analytic index lookup.
/// `exceptional` holds finitely many point values (e.g. T(0) = 0) that no
/// piece covers.
template <class S>
struct PiecewiseMap {
  Interval<S> ambient;
  std::vector<MoebiusBranch<S>> pieces;
  std::optional<FamilyRule> rule;
  int truncation = 64;  // materialization depth for validation/enumeration
  std::vector<std::pair<S, S>> exceptional;

  std::optional<S> exceptional_value(const S& x) const {
    for (const auto& [p, v] : exceptional)
      if (p == x) return v;
    return std::nullopt;
  }

  /// Active piece at x, or nullopt (exceptional points have no piece).
  std::optional<MoebiusBranch<S>> piece_at(const S& x) const {
    for (const auto& p : pieces)
      if (p.domain.contains(x)) return p;
    if (rule) {
      try {
        int k = rule->index_of(x);
        return rule->piece<S>(k);
      } catch (const Error& e) {
        if (e.kind() != Err::no_piece) throw;
      }
    }
    return std::nullopt;
  }

  S eval(const S& x) const {
    if (!ambient.contains(x)) throw Error(Err::out_of_domain, "eval outside the ambient interval");
    if (auto v = exceptional_value(x)) return *v;
    if (auto p = piece_at(x)) return p->eval(x);
    throw Error(Err::no_piece, "no piece covers the point");
  }

  /// Signed slope of the active piece; requires x interior to that piece.
  S derivative(const S& x) const {
    if (!ambient.contains(x)) throw Error(Err::out_of_domain, "derivative outside the ambient interval");
    if (exceptional_value(x))
      throw Error(Err::non_differentiable, "exceptional point");
    auto p = piece_at(x);
    if (!p) throw Error(Err::non_differentiable, "no piece covers the point");
    if (!p->domain.contains_interior(x))
      throw Error(Err::non_differentiable, "piece boundary");
    return p->derivative(x);
  }

  /// Explicit pieces plus rule pieces 1..K (K = truncation by default).
  std::vector<MoebiusBranch<S>> materialize(int K = -1) const {
    if (K < 0) K = truncation;
    std::vector<MoebiusBranch<S>> out = pieces;
    if (rule)
      for (int k = 1; k <= K; ++k) out.push_back(rule->piece<S>(k));
    return out;
  }
};

namespace detail {

// Shared by map and branch-system validation: disjointness + coverage of a
// family of intervals inside `ambient`. Gaps at the low end are tolerated for
// countable families (`infinite`) and reported as the coverage residual.
template <class S>
void check_partition(ValidationReport& rep, const Interval<S>& ambient,
                     std::vector<Interval<S>> parts, bool infinite, double tol) {
  if (parts.empty()) {
    rep.fail("coverage", "no pieces");
    return;
  }
  std::sort(parts.begin(), parts.end(),
            [](const Interval<S>& a, const Interval<S>& b) { return a.lo < b.lo; });
  S covered(0), max_hi = parts.front().lo;
  for (size_t i = 0; i < parts.size(); ++i) {
    const auto& cur = parts[i];
    if (i > 0 && max_hi > cur.lo && to_double(S(max_hi - cur.lo)) > tol)
      rep.fail("overlap", "pieces overlap on " + Interval<S>(cur.lo, max_hi < cur.hi ? max_hi : cur.hi).str());
    if (i > 0 && cur.lo > max_hi && to_double(S(cur.lo - max_hi)) > tol)
      rep.fail("gap", "interior coverage gap " + Interval<S>(max_hi, cur.lo).str());
    covered += cur.length();
    if (cur.hi > max_hi) max_hi = cur.hi;
  }
  S lo_gap = parts.front().lo - ambient.lo;
  S hi_gap = ambient.hi - max_hi;
  if (to_double(hi_gap) > tol) rep.fail("gap", "uncovered near the top: " + Interval<S>(max_hi, ambient.hi).str());
  S residual = ambient.length() - covered;
  if (residual < S(0)) residual = S(0);
  rep.coverage_residual = to_double(residual);
  if constexpr (ScalarOps<S>::exact) rep.coverage_residual_exact = rational_str(residual);
  if (!infinite && to_double(lo_gap) > tol)
    rep.fail("gap", "uncovered near the bottom: " + Interval<S>(ambient.lo, parts.front().lo).str());
}

}  // namespace detail

template <class S>
bool ambient_contains(const Interval<S>& ambient, const Interval<S>& part, double tol) {
  if (tol == 0.0) return ambient.contains(part);
  return to_double(S(ambient.lo - part.lo)) <= tol && to_double(S(part.hi - ambient.hi)) <= tol;
}

/// Structural validation: poles, image containment, overlaps, coverage.
template <class S>
ValidationReport validate_piecewise(const PiecewiseMap<S>& T) {
  ValidationReport rep;
  const double tol = ScalarOps<S>::exact ? 0.0 : 64 * std::numeric_limits<double>::epsilon();
  auto mats = T.materialize();
  rep.pieces_checked = static_cast<int>(mats.size());
  std::vector<Interval<S>> doms;
  for (size_t i = 0; i < mats.size(); ++i) {
    const auto& p = mats[i];
    std::string tag = "piece " + std::to_string(i + 1);
    if (p.det() == S(0)) {
      rep.fail("degenerate", tag + " has zero determinant");
      continue;
    }
    if (p.has_pole_in_domain()) {
      rep.fail("pole", tag + " has a pole inside its domain");
      continue;
    }
    if (!ambient_contains(T.ambient, p.range(), tol))
      rep.fail("image", tag + " maps outside the ambient interval");
    if (!ambient_contains(T.ambient, p.domain, tol))
      rep.fail("domain", tag + " domain exceeds the ambient interval");
    doms.push_back(p.domain);
  }
  detail::check_partition(rep, T.ambient, doms, T.rule.has_value(), tol);
  return rep;
}

}  // namespace intdyn
