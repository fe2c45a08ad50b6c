#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "intdyn/branch_system.hpp"
#include "intdyn/density.hpp"

namespace intdyn {

/// One named construction: the map, its branching function system, the
/// invariant density (when finite or classically associated), and the jump
/// bookkeeping. `jump_partner` points from an induced map to its base with the
/// target set A = f₁(X); `closed_form_jump` gives a base map its induced map
/// in closed form.
template <class S>
struct CatalogEntry {
  std::string name;
  PiecewiseMap<S> map;
  BranchSystem<S> system;
  std::optional<Density> density;
  std::optional<std::pair<std::string, Interval<S>>> jump_partner;
  std::optional<PiecewiseMap<S>> closed_form_jump;
};

inline std::vector<std::string> list_entries() {
  return {"tent", "tent_jump", "farey", "gauss", "chan_sigma2", "chan_tau2"};
}

namespace cat_detail {

template <class S>
MoebiusBranch<S> mk(long a, long b, long c, long d, const Interval<S>& dom) {
  return moebius_from<S>(Rational(a), Rational(b), Rational(c), Rational(d), dom);
}

inline Density lebesgue_density() {
  Density d = Density::constant(1);
  d.normalization = 1.0;
  d.norm_tag = "1";
  return d;
}

inline Density gauss_density() {
  Density d = Density::reciprocal_product(1, {Rational(1)});
  d.integrable = true;
  d.normalization = 1.0 / std::log(2.0);
  d.norm_tag = "1/log(2)";
  return d;
}

inline Density theta_density() {
  Density d = Density::reciprocal_product(1, {Rational(0)});
  d.integrable = false;  // dθ = dx/x has infinite mass on [0,1]
  d.normalization = 1.0;
  d.norm_tag = "none (not integrable)";
  return d;
}

inline Density chan_density() {
  Density d = Density::reciprocal_product(1, {Rational(1), Rational(2)});
  d.integrable = true;
  d.normalization = 1.0 / std::log(4.0 / 3.0);
  d.norm_tag = "1/log(4/3)";
  return d;
}

template <class S>
BranchSystem<S> rule_system(const Interval<S>& X, FamilyRule rule, TailBound tail, int K) {
  BranchSystem<S> sys;
  sys.ambient = X;
  sys.infinite = true;
  sys.rule = std::move(rule);
  sys.tail = tail;
  return sys.with_truncation(K);
}

}  // namespace cat_detail

/// Builds a catalog entry. Names: tent, tent_jump, farey, gauss, chan_sigma2,
/// chan_tau2. `truncation` sets the materialization depth of the countable
/// families. Throws UnknownEntry otherwise.
template <class S>
CatalogEntry<S> get_entry(const std::string& name, int truncation = 64) {
  using cat_detail::mk;
  CatalogEntry<S> e;
  e.name = name;
  Interval<S> X = interval_from<S>(0, 1);
  Interval<S> half = interval_from<S>(Rational(1, 2), 1);
  Interval<S> lower = interval_from<S>(0, Rational(1, 2));
  S zero = scalar_from<S>(0);

  if (name == "tent") {
    e.map.ambient = X;
    e.map.pieces = {mk<S>(2, 0, 0, 1, lower), mk<S>(-2, 2, 0, 1, half)};
    e.system.ambient = X;
    e.system.branches = {mk<S>(-1, 2, 0, 2, X), mk<S>(1, 0, 0, 2, X)};
    e.density = cat_detail::lebesgue_density();
    e.closed_form_jump = get_entry<S>("tent_jump", truncation).map;
    return e;
  }
  if (name == "tent_jump") {
    FamilyRule map_rule;  // piece n: 2 − 2ⁿx on (2⁻ⁿ, 2⁻ⁿ⁺¹]
    map_rule.kind = FamilyKind::geometric;
    map_rule.base = {2, -2, 0, -1};
    map_rule.gen = {2, 0, 0, 1};
    map_rule.gen_left = false;
    e.map.ambient = X;
    e.map.rule = map_rule;
    e.map.truncation = truncation;
    e.map.exceptional = {{zero, zero}};

    FamilyRule sys_rule;  // branch n: g_n = (2 − x)/2ⁿ
    sys_rule.kind = FamilyKind::geometric;
    sys_rule.base = {-1, 2, 0, 2};
    sys_rule.gen = {1, 0, 0, 2};
    sys_rule.gen_left = true;
    TailBound tail{TailBound::Kind::geometric, Rational(1, 2), Rational(1, 2)};
    e.system = cat_detail::rule_system(X, sys_rule, tail, truncation);
    e.density = cat_detail::lebesgue_density();
    e.jump_partner = {{"tent", half}};
    return e;
  }
  if (name == "farey") {
    e.map.ambient = X;
    e.map.pieces = {mk<S>(1, 0, -1, 1, lower), mk<S>(-1, 1, 1, 0, half)};
    e.system.ambient = X;
    e.system.branches = {mk<S>(0, 1, 1, 1, X), mk<S>(1, 0, 1, 1, X)};
    e.density = cat_detail::theta_density();
    e.closed_form_jump = get_entry<S>("gauss", truncation).map;
    return e;
  }
  if (name == "gauss") {
    FamilyRule map_rule;  // piece k: 1/x − k on (1/(k+1), 1/k]
    map_rule.kind = FamilyKind::harmonic;
    map_rule.base = {0, 1, 1, 0};
    map_rule.gen = {-1, 0, 0, 0};
    e.map.ambient = X;
    e.map.rule = map_rule;
    e.map.truncation = truncation;
    e.map.exceptional = {{zero, zero}};

    FamilyRule sys_rule;  // branch k: g_k = 1/(x + k)
    sys_rule.kind = FamilyKind::harmonic;
    sys_rule.base = {0, 1, 1, 0};
    sys_rule.gen = {0, 0, 0, 1};
    TailBound tail{TailBound::Kind::inv_linear, 1, Rational(1, 2)};
    e.system = cat_detail::rule_system(X, sys_rule, tail, truncation);
    e.density = cat_detail::gauss_density();
    e.jump_partner = {{"farey", half}};
    return e;
  }
  if (name == "chan_sigma2") {
    e.map.ambient = X;
    e.map.pieces = {mk<S>(2, 0, 0, 1, lower), mk<S>(-1, 1, 1, 0, half)};
    e.system.ambient = X;
    e.system.branches = {mk<S>(0, 1, 1, 1, X), mk<S>(1, 0, 0, 2, X)};
    e.density = cat_detail::gauss_density();  // γ is σ₂-invariant
    e.closed_form_jump = get_entry<S>("chan_tau2", truncation).map;
    return e;
  }
  if (name == "chan_tau2") {
    FamilyRule map_rule;  // piece k: 1/(2^(k−1)x) − 1 on (2⁻ᵏ, 2⁻ᵏ⁺¹]
    map_rule.kind = FamilyKind::geometric;
    map_rule.base = {1, -1, -1, 0};
    map_rule.gen = {2, 0, 0, 1};
    map_rule.gen_left = false;
    e.map.ambient = X;
    e.map.rule = map_rule;
    e.map.truncation = truncation;
    e.map.exceptional = {{zero, zero}};

    FamilyRule sys_rule;  // branch k: g_k = 1/(2^(k−1)(x+1))
    sys_rule.kind = FamilyKind::geometric;
    sys_rule.base = {0, 1, 1, 1};
    sys_rule.gen = {1, 0, 0, 2};
    sys_rule.gen_left = true;
    TailBound tail{TailBound::Kind::geometric, 1, Rational(1, 2)};
    e.system = cat_detail::rule_system(X, sys_rule, tail, truncation);
    e.density = cat_detail::chan_density();
    e.jump_partner = {{"chan_sigma2", half}};
    return e;
  }
  throw Error(Err::unknown_entry, "no catalog entry named '" + name + "'");
}

}  // namespace intdyn
