#pragma once

#include <string>
#include <vector>

#include "intdyn/branch_system.hpp"
#include "intdyn/grid.hpp"
#include "intdyn/radical.hpp"
#include "intdyn/testfn.hpp"

namespace intdyn {

// ---------------------------------------------------------------------------
// Operator words over the generator alphabet {gen(i), adj(i)}.

struct OpLetter {
  int index = 1;
  bool adjoint = false;
};

struct WordTerm {
  Rational coeff = 1;
  std::vector<OpLetter> letters;
};

/// Finite linear combination of generator/adjoint words; letters act left to
/// right as operator composition (the first letter is applied last to φ).
struct OperatorWord {
  std::vector<WordTerm> terms;

  static OperatorWord gen(int i) { return {{WordTerm{1, {{i, false}}}}}; }
  static OperatorWord adj(int i) { return {{WordTerm{1, {{i, true}}}}}; }
  static OperatorWord identity() { return {{WordTerm{1, {}}}}; }

  /// t₂^(n−1) t₁ — the canonical embedding word s_n.
  static OperatorWord embedding(int n) {
    WordTerm t;
    for (int k = 1; k < n; ++k) t.letters.push_back({2, false});
    t.letters.push_back({1, false});
    return {{t}};
  }

  /// t₂^(n−1)(t₁t₂t₁* + t₁²t₂*) — the alternative embedding word.
  static OperatorWord alt_embedding(int n) {
    WordTerm u1, u2;
    for (int k = 1; k < n; ++k) {
      u1.letters.push_back({2, false});
      u2.letters.push_back({2, false});
    }
    u1.letters.push_back({1, false});
    u1.letters.push_back({2, false});
    u1.letters.push_back({1, true});
    u2.letters.push_back({1, false});
    u2.letters.push_back({1, false});
    u2.letters.push_back({2, true});
    return {{u1, u2}};
  }

  OperatorWord operator*(const OperatorWord& o) const {
    OperatorWord out;
    for (const auto& a : terms)
      for (const auto& b : o.terms) {
        WordTerm t;
        t.coeff = a.coeff * b.coeff;
        t.letters = a.letters;
        t.letters.insert(t.letters.end(), b.letters.begin(), b.letters.end());
        out.terms.push_back(std::move(t));
      }
    return out;
  }

  OperatorWord operator+(const OperatorWord& o) const {
    OperatorWord out = *this;
    out.terms.insert(out.terms.end(), o.terms.begin(), o.terms.end());
    return out;
  }

  /// Reverse each word and swap gen ↔ adj (real coefficients).
  OperatorWord adjoint_word() const {
    OperatorWord out;
    for (const auto& t : terms) {
      WordTerm r;
      r.coeff = t.coeff;
      for (auto it = t.letters.rbegin(); it != t.letters.rend(); ++it)
        r.letters.push_back({it->index, !it->adjoint});
      out.terms.push_back(std::move(r));
    }
    return out;
  }

  size_t max_index() const {
    size_t m = 0;
    for (const auto& t : terms)
      for (const auto& l : t.letters) m = std::max(m, size_t(l.index));
    return m;
  }
};

// ---------------------------------------------------------------------------
// Grid-mode operator action (float backend, linear interpolation).

namespace detail {

inline void check_grid_system(const BranchSystem<double>& f, const GridFunction& phi) {
  if (phi.lo != to_double(f.ambient.lo) || phi.hi != to_double(f.ambient.hi))
    throw Error(Err::grid_mismatch, "grid does not match the system ambient");
}

}  // namespace detail

/// (S(f_i)φ)(x) = χ_{R_i}(x)·√|T'(x)|·φ(T(x)) with T'|_{R_i} taken from the
/// inverse branch, φ by grid interpolation.
inline GridFunction apply_generator(const BranchSystem<double>& f, int i, const GridFunction& phi) {
  detail::check_grid_system(f, phi);
  const MoebiusBranch<double> inv = f.branch(i).inverse();
  GridFunction out = GridFunction::zeros(phi.lo, phi.hi, phi.size());
  for (int m = 0; m < phi.size(); ++m) {
    double x = phi.node(m);
    if (!f.in_range(i, x)) continue;
    out.values[m] = std::sqrt(std::abs(inv.derivative(x))) * phi.interp(inv.eval(x));
  }
  return out;
}

/// (S(f_i)*φ)(x) = √|f_i'(x)|·φ(f_i(x)).
inline GridFunction apply_adjoint(const BranchSystem<double>& f, int i, const GridFunction& phi) {
  detail::check_grid_system(f, phi);
  const MoebiusBranch<double>& br = f.branch(i);
  GridFunction out = GridFunction::zeros(phi.lo, phi.hi, phi.size());
  for (int m = 0; m < phi.size(); ++m) {
    double x = phi.node(m);
    out.values[m] = std::sqrt(std::abs(br.derivative(x))) * phi.interp(br.eval(x));
  }
  return out;
}

/// Left-to-right composition of the word letters; linear combinations summed.
inline GridFunction apply_word(const BranchSystem<double>& f, const OperatorWord& w,
                               const GridFunction& phi) {
  detail::check_grid_system(f, phi);
  if (w.terms.empty()) throw Error(Err::index_out_of_range, "empty operator word");
  GridFunction acc = GridFunction::zeros(phi.lo, phi.hi, phi.size());
  for (const auto& term : w.terms) {
    GridFunction cur = phi;
    for (auto it = term.letters.rbegin(); it != term.letters.rend(); ++it)
      cur = it->adjoint ? apply_adjoint(f, it->index, cur) : apply_generator(f, it->index, cur);
    acc.values += to_double(term.coeff) * cur.values;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Closed-form mode (exact backend): operator words evaluated pointwise at
// rationals with radical-tracked weights, no interpolation anywhere.

/// (S(f_i)φ)(x) exactly.
inline RadicalValue apply_generator_exact(const BranchSystem<Rational>& f, int i,
                                          const TestFn& phi, const Rational& x) {
  if (!f.in_range(i, x)) return RadicalValue();
  MoebiusBranch<Rational> inv = f.branch(i).inverse();
  return RadicalValue::root(1, abs_s(inv.derivative(x))) *
         RadicalValue::rational(phi.eval_exact(inv.eval(x)));
}

/// (S(f_i)*φ)(x) exactly.
inline RadicalValue apply_adjoint_exact(const BranchSystem<Rational>& f, int i,
                                        const TestFn& phi, const Rational& x) {
  const auto& br = f.branch(i);
  return RadicalValue::root(1, abs_s(br.derivative(x))) *
         RadicalValue::rational(phi.eval_exact(br.eval(x)));
}

/// (Wφ)(x) exactly: walk the letters left to right, transporting the
/// evaluation point and accumulating √-weights, then evaluate φ.
inline RadicalValue apply_word_exact(const BranchSystem<Rational>& f, const OperatorWord& w,
                                     const TestFn& phi, const Rational& x) {
  if (w.terms.empty()) throw Error(Err::index_out_of_range, "empty operator word");
  if (w.max_index() > size_t(f.arity()))
    throw Error(Err::index_out_of_range, "word index exceeds system arity");
  RadicalValue acc;
  for (const auto& term : w.terms) {
    RadicalValue weight = RadicalValue::rational(term.coeff);
    Rational y = x;
    bool dead = false;
    for (const auto& l : term.letters) {
      if (l.adjoint) {
        const auto& br = f.branch(l.index);
        weight = weight * RadicalValue::root(1, abs_s(br.derivative(y)));
        y = br.eval(y);
      } else {
        if (!f.in_range(l.index, y)) {
          dead = true;
          break;
        }
        MoebiusBranch<Rational> inv = f.branch(l.index).inverse();
        weight = weight * RadicalValue::root(1, abs_s(inv.derivative(y)));
        y = inv.eval(y);
      }
    }
    if (dead) continue;
    acc += weight * RadicalValue::rational(phi.eval_exact(y));
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Relation checkers.

/// ‖Σ_{i≤k} S_iS_i*φ − φ‖² computed exactly from the range projections:
/// the sum acts as multiplication by χ_{∪R_i}, so the residual is the φ-mass
/// of the uncovered set.
inline Rational completeness_residual_sq(const BranchSystem<Rational>& f, const TestFn& phi,
                                         int k) {
  if (k < 0 || k > f.arity()) throw Error(Err::index_out_of_range, "partial-sum depth");
  Rational total = phi.l2_mass(f.ambient.lo, f.ambient.hi);
  for (int i = 1; i <= k; ++i) {
    Interval<Rational> r = f.range_of(i);
    total -= phi.l2_mass(r.lo, r.hi);
  }
  return total;
}

struct RelationReport {
  int pair_depth = 0;      // relations checked for indices i, j up to this
  int partial_depth = 0;   // partial completeness sums up to this
  long samples = 0;
  bool orthonormal_exact = true;        // S_i*S_jφ = δ_ijφ pointwise
  double max_orthonormal_dev = 0.0;
  bool range_projection_exact = true;   // S_iS_i*φ = χ_{R_i}φ pointwise
  double max_range_projection_dev = 0.0;
  bool completeness_exact = true;       // finite arity: residual at k = N is zero
  bool partial_monotone = true;         // infinite arity: residuals nonincreasing
  std::vector<std::pair<std::string, double>> partial_residual_sq;  // per fn at depth
  double max_adjointness_gap = 0.0;     // grid quadrature: |⟨Sφ,ψ⟩ − ⟨φ,S*ψ⟩|
  double grid_completeness_dev = 0.0;   // grid-operator route vs exact route
};

/// Exact pointwise Cuntz relation checks plus grid-level cross-checks.
/// `fgrid` must describe the same system in the float backend.
inline RelationReport check_cuntz_relations(const BranchSystem<Rational>& f,
                                            const BranchSystem<double>& fgrid,
                                            const std::vector<TestFn>& fns,
                                            const std::vector<Rational>& samples, int K,
                                            int grid_M = 4096) {
  if (fns.empty()) throw Error(Err::out_of_range, "need at least one test function");
  RelationReport rep;
  rep.samples = static_cast<long>(samples.size());
  int pair_depth = f.infinite ? std::min(6, f.arity()) : f.arity();
  rep.pair_depth = pair_depth;
  rep.partial_depth = std::min(K, f.arity());

  for (const auto& phi : fns) {
    for (const Rational& x : samples) {
      for (int i = 1; i <= pair_depth; ++i) {
        // S_i S_i* φ vs χ_{R_i} φ.
        OperatorWord proj = OperatorWord::gen(i) * OperatorWord::adj(i);
        RadicalValue lhs = apply_word_exact(f, proj, phi, x);
        Rational chi = f.in_range(i, x) ? 1 : 0;
        RadicalValue rhs = RadicalValue::rational(chi * phi.eval_exact(x));
        RadicalValue diff = lhs - rhs;
        if (!diff.is_zero()) {
          rep.range_projection_exact = false;
          rep.max_range_projection_dev =
              std::max(rep.max_range_projection_dev, std::abs(diff.to_double()));
        }
        for (int j = 1; j <= pair_depth; ++j) {
          OperatorWord w = OperatorWord::adj(i) * OperatorWord::gen(j);
          RadicalValue v = apply_word_exact(f, w, phi, x);
          RadicalValue expect =
              i == j ? RadicalValue::rational(phi.eval_exact(x)) : RadicalValue();
          RadicalValue d = v - expect;
          if (!d.is_zero()) {
            rep.orthonormal_exact = false;
            rep.max_orthonormal_dev = std::max(rep.max_orthonormal_dev, std::abs(d.to_double()));
          }
        }
      }
    }
  }

  // Completeness: exact residual sequence.
  for (const auto& phi : fns) {
    Rational prev = -1;
    for (int k = 1; k <= rep.partial_depth; ++k) {
      Rational res = completeness_residual_sq(f, phi, k);
      if (prev >= 0 && res > prev) rep.partial_monotone = false;
      if (res < 0) rep.partial_monotone = false;  // must stay a nonnegative mass
      prev = res;
    }
    rep.partial_residual_sq.emplace_back(phi.name(), to_double(prev));
    if (!f.infinite && prev != 0) rep.completeness_exact = false;
  }

  // Grid-level adjointness and operator-route completeness cross-check.
  for (const auto& fk : fns) {
    GridFunction phi = GridFunction::sample(to_double(f.ambient.lo), to_double(f.ambient.hi),
                                            grid_M, [&](double x) { return fk.eval(x); });
    GridFunction psi = GridFunction::sample(phi.lo, phi.hi, grid_M,
                                            [](double x) { return 1.0 + x * 0.5; });
    for (int i = 1; i <= std::min(2, fgrid.arity()); ++i) {
      double lhs = inner_product(apply_generator(fgrid, i, phi), psi);
      double rhs = inner_product(phi, apply_adjoint(fgrid, i, psi));
      rep.max_adjointness_gap = std::max(rep.max_adjointness_gap, std::abs(lhs - rhs));
    }
    GridFunction acc = GridFunction::zeros(phi.lo, phi.hi, grid_M);
    int kmax = std::min(rep.partial_depth, fgrid.arity());
    for (int i = 1; i <= kmax; ++i) {
      OperatorWord proj = OperatorWord::gen(i) * OperatorWord::adj(i);
      acc = acc + apply_word(fgrid, proj, phi);
    }
    double grid_res = norm_l2(acc - phi);
    double exact_res = std::sqrt(std::max(0.0, to_double(completeness_residual_sq(f, fk, kmax))));
    rep.grid_completeness_dev = std::max(rep.grid_completeness_dev, std::abs(grid_res - exact_res));
  }
  return rep;
}

struct EmbeddingReport {
  int n_max = 0;
  long compared = 0;
  bool exact = true;              // operator route: word = generator, pointwise
  double max_deviation = 0.0;
  bool coefficients_match = true; // Möbius route: f₂^(n−1)∘f₁ ≐ g_n projectively
};

/// Verifies s_n = t₂^(n−1)t₁ against the jump family: apply_word on the
/// arity-2 system equals apply_generator on the induced infinite system, and
/// the composed branch coefficients match projectively.
inline EmbeddingReport check_embedding(const BranchSystem<Rational>& f, int n_max,
                                       const std::vector<TestFn>& fns,
                                       const std::vector<Rational>& seeds) {
  if (f.arity() != 2 || f.infinite)
    throw Error(Err::arity_mismatch, "embedding check requires an arity-2 system");
  EmbeddingReport rep;
  rep.n_max = n_max;
  BranchSystem<Rational> g = jump_family(f, std::max(n_max + 4, 64));
  for (int n = 1; n <= n_max; ++n) {
    std::vector<int> word(size_t(n), 2);
    word.back() = 1;
    MoebiusBranch<Rational> composed = compose_branches(f, std::span<const int>(word));
    if (!projectively_equal(composed, g.branch(n))) rep.coefficients_match = false;
    OperatorWord w = OperatorWord::embedding(n);
    for (const Rational& u : seeds) {
      // Place the sample inside g_n(X) so the comparison is non-vacuous.
      Rational x = g.branch(n).eval(u);
      for (const auto& phi : fns) {
        RadicalValue lhs = apply_word_exact(f, w, phi, x);
        RadicalValue rhs = apply_generator_exact(g, n, phi, x);
        RadicalValue d = lhs - rhs;
        ++rep.compared;
        if (!d.is_zero()) {
          rep.exact = false;
          rep.max_deviation = std::max(rep.max_deviation, std::abs(d.to_double()));
        }
      }
    }
  }
  return rep;
}

struct AltEmbeddingReport {
  int n_max = 0;
  long compared = 0;
  bool exact = true;
  double max_deviation = 0.0;
};

/// Alternative embedding words w_n = t₂^(n−1)(t₁t₂t₁* + t₁²t₂*): a second,
/// inequivalent family realizing the infinite relations inside the two-letter
/// algebra. Checks w_n* w_m = δ_nm pointwise-exactly on the sample set.
inline AltEmbeddingReport check_alt_embedding(const BranchSystem<Rational>& f, int n_max,
                                              const std::vector<TestFn>& fns,
                                              const std::vector<Rational>& samples) {
  if (f.arity() != 2 || f.infinite)
    throw Error(Err::arity_mismatch, "alternative embedding check requires an arity-2 system");
  AltEmbeddingReport rep;
  rep.n_max = n_max;
  for (int n = 1; n <= n_max; ++n) {
    OperatorWord wn_star = OperatorWord::alt_embedding(n).adjoint_word();
    for (int m = 1; m <= n_max; ++m) {
      OperatorWord prod = wn_star * OperatorWord::alt_embedding(m);
      for (const auto& phi : fns) {
        for (const Rational& x : samples) {
          RadicalValue v = apply_word_exact(f, prod, phi, x);
          RadicalValue expect =
              n == m ? RadicalValue::rational(phi.eval_exact(x)) : RadicalValue();
          RadicalValue d = v - expect;
          ++rep.compared;
          if (!d.is_zero()) {
            rep.exact = false;
            rep.max_deviation = std::max(rep.max_deviation, std::abs(d.to_double()));
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace intdyn
