#pragma once

#include <utility>
#include <vector>

#include "intdyn/rational.hpp"

namespace intdyn {

/// Exact value of the form Σ cᵢ·√sᵢ with rational cᵢ and positive rational
/// radicands sᵢ. Terms whose radicand ratio is a rational square are merged,
/// so distinct stored radicands are linearly independent over Q and the zero
/// test (all coefficients zero) is sound. This is enough to evaluate isometry
/// words pointwise with no floating error: branch weights √|f'| enter as
/// radicands and the chain-rule products collapse back to rationals.
class RadicalValue {
 public:
  RadicalValue() = default;

  static RadicalValue rational(Rational c) {
    RadicalValue v;
    v.add_term(std::move(c), 1);
    return v;
  }

  /// c·√s with s > 0 (s = 0 collapses to zero).
  static RadicalValue root(Rational c, Rational s) {
    if (s < 0) throw Error(Err::out_of_domain, "negative radicand");
    RadicalValue v;
    if (s == 0) return v;
    v.add_term(std::move(c), std::move(s));
    return v;
  }

  bool is_zero() const { return terms_.empty(); }

  bool is_rational() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].second == 1);
  }

  Rational as_rational() const {
    if (terms_.empty()) return 0;
    if (!is_rational()) throw Error(Err::out_of_range, "value is irrational");
    return terms_[0].first;
  }

  RadicalValue& operator+=(const RadicalValue& o) {
    for (const auto& [c, s] : o.terms_) add_term(c, s);
    return *this;
  }

  RadicalValue operator+(const RadicalValue& o) const {
    RadicalValue v = *this;
    v += o;
    return v;
  }

  RadicalValue operator-(const RadicalValue& o) const {
    RadicalValue v = *this;
    for (const auto& [c, s] : o.terms_) v.add_term(-c, s);
    return v;
  }

  RadicalValue operator*(const RadicalValue& o) const {
    RadicalValue v;
    for (const auto& [c1, s1] : terms_)
      for (const auto& [c2, s2] : o.terms_) v.add_term(c1 * c2, s1 * s2);
    return v;
  }

  RadicalValue& scale(const Rational& c) {
    if (c == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& t : terms_) t.first *= c;
    return *this;
  }

  bool operator==(const RadicalValue& o) const { return (*this - o).is_zero(); }

  double to_double() const {
    double acc = 0;
    for (const auto& [c, s] : terms_) acc += intdyn::to_double(c) * std::sqrt(intdyn::to_double(s));
    return acc;
  }

  const std::vector<std::pair<Rational, Rational>>& terms() const { return terms_; }

 private:
  void add_term(Rational c, Rational s) {
    if (c == 0 || s == 0) return;
    // Fold perfect squares into the coefficient.
    Rational root;
    if (sqrt_if_square(s, root)) {
      c *= root;
      s = 1;
    }
    for (auto it = terms_.begin(); it != terms_.end(); ++it) {
      if (it->second == s) {
        it->first += c;
        if (it->first == 0) terms_.erase(it);
        return;
      }
      // √s = √(s·s₀)/s₀·√s₀ when s·s₀ is a rational square.
      Rational t;
      if (sqrt_if_square(Rational(it->second * s), t)) {
        it->first += c * t / it->second;
        if (it->first == 0) terms_.erase(it);
        return;
      }
    }
    terms_.emplace_back(std::move(c), std::move(s));
  }

  std::vector<std::pair<Rational, Rational>> terms_;
};

}  // namespace intdyn
