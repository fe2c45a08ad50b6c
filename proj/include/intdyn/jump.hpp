#pragma once

#include <random>
#include <vector>

#include "intdyn/piecewise.hpp"

namespace intdyn {

/// A base map σ together with a target set A for inducing: J(x) = σ^(e(x)+1)(x)
/// where e(x) is the first entry time of the orbit into A. `entry_cap` bounds
/// the orbit search; exceeding it raises EntryCapExceeded (the orbit started in
/// the measure-zero set that never enters A, or the cap is too small).
template <class S>
struct JumpSpec {
  PiecewiseMap<S> base;
  Interval<S> target;
  long entry_cap = 100000;

  JumpSpec(PiecewiseMap<S> b, Interval<S> a, long cap = 100000)
      : base(std::move(b)), target(std::move(a)), entry_cap(cap) {
    if (!base.ambient.contains(target))
      throw Error(Err::out_of_domain, "target set leaves the ambient interval");
    if (entry_cap < 1) throw Error(Err::out_of_range, "entry cap must be >= 1");
  }
};

/// e(x) = min{k ≥ 0 : σ^k(x) ∈ A}, searched up to entry_cap.
template <class S>
long first_entry_time(const JumpSpec<S>& spec, const S& x) {
  S y = x;
  for (long k = 0; k <= spec.entry_cap; ++k) {
    if (spec.target.contains(y)) return k;
    y = spec.base.eval(y);
  }
  throw Error(Err::entry_cap_exceeded,
              "no entry into the target set within " + std::to_string(spec.entry_cap) + " steps");
}

/// J(x) = σ^(e(x)+1)(x) by direct orbit iteration.
template <class S>
S jump_apply(const JumpSpec<S>& spec, const S& x) {
  S y = x;
  for (long k = 0; k <= spec.entry_cap; ++k) {
    if (spec.target.contains(y)) return spec.base.eval(y);
    y = spec.base.eval(y);
  }
  throw Error(Err::entry_cap_exceeded,
              "no entry into the target set within " + std::to_string(spec.entry_cap) + " steps");
}

/// Deviation between the iterated jump and a closed-form map over a sample set.
struct EquivalenceReport {
  long samples = 0;
  long excluded = 0;       // entry-cap overruns, counted not dropped
  double max_deviation = 0.0;
  bool exact_zero = true;  // meaningful for the exact backend only
  long max_entry_time = 0;
};

template <class S>
EquivalenceReport check_jump_equals(const JumpSpec<S>& spec, const PiecewiseMap<S>& closed,
                                    const std::vector<S>& samples) {
  EquivalenceReport rep;
  rep.samples = static_cast<long>(samples.size());
  for (const S& x : samples) {
    long e;
    S jumped;
    try {
      e = first_entry_time(spec, x);
      jumped = jump_apply(spec, x);
    } catch (const Error& err) {
      if (err.kind() == Err::entry_cap_exceeded) {
        ++rep.excluded;
        continue;
      }
      throw;
    }
    if (e > rep.max_entry_time) rep.max_entry_time = e;
    S dev = abs_s(S(jumped - closed.eval(x)));
    if (dev != S(0)) rep.exact_zero = false;
    double d = to_double(dev);
    if (d > rep.max_deviation) rep.max_deviation = d;
  }
  return rep;
}

/// Fraction of random samples whose entry time is finite under the cap.
struct CoverageReport {
  long samples = 0;
  long finite = 0;
  long max_entry_time = 0;
  double fraction = 0.0;
};

template <class S>
CoverageReport check_entry_condition(const JumpSpec<S>& spec, long sample_count, long cap,
                                     std::uint64_t seed = 1,
                                     std::optional<Interval<double>> window = std::nullopt) {
  CoverageReport rep;
  rep.samples = sample_count;
  std::mt19937_64 rng(seed);
  double lo = window ? window->lo : to_double(spec.base.ambient.lo);
  double hi = window ? window->hi : to_double(spec.base.ambient.hi);
  std::uniform_real_distribution<double> dist(lo, hi);
  JumpSpec<S> capped(spec.base, spec.target, cap);
  for (long i = 0; i < sample_count; ++i) {
    S x = scalar_from<S>(Rational(dist(rng)));
    try {
      long e = first_entry_time(capped, x);
      ++rep.finite;
      if (e > rep.max_entry_time) rep.max_entry_time = e;
    } catch (const Error& err) {
      if (err.kind() != Err::entry_cap_exceeded) throw;
    }
  }
  rep.fraction = sample_count > 0 ? double(rep.finite) / double(sample_count) : 0.0;
  return rep;
}

}  // namespace intdyn
