#pragma once

#include <random>

#include "intdyn/grid.hpp"
#include "intdyn/piecewise.hpp"

namespace intdyn {

/// True when every piece (and the rule-generated tail) is affine, i.e. c = 0.
/// Affine dyadic-slope maps collapse double orbits onto exact dyadics — those
/// orbits must be iterated in exact arithmetic instead.
template <class S>
bool all_pieces_affine(const PiecewiseMap<S>& T) {
  for (const auto& p : T.materialize(std::min(T.truncation, 64)))
    if (!(p.c == S(0))) return false;
  return true;
}

/// Normalized occupation histogram of the orbit x₀, T(x₀), …, T^n(x₀),
/// returned as a piecewise-constant density on `bins` cells.
template <class S>
GridFunction birkhoff_histogram(const PiecewiseMap<S>& T, const S& x0, long n_steps, int bins) {
  if (bins < 2) throw Error(Err::out_of_range, "need at least 2 bins");
  if (n_steps < 1) throw Error(Err::out_of_range, "need at least 1 step");
  const double lo = to_double(T.ambient.lo), hi = to_double(T.ambient.hi);
  const double width = (hi - lo) / bins;
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(bins);
  S x = x0;
  for (long i = 0; i <= n_steps; ++i) {
    double xd = to_double(x);
    if (!(xd >= lo && xd <= hi))
      throw Error(Err::orbit_escape, "orbit left the ambient interval at step " + std::to_string(i));
    int b = std::min(bins - 1, int((xd - lo) / width));
    counts[b] += 1.0;
    if (i < n_steps) x = T.eval(x);
  }
  counts /= double(n_steps + 1) * width;
  return GridFunction(lo, hi, counts);
}

/// Seeded starting point for orbit sampling. For exact orbits the point is a
/// fraction over a fixed odd prime, so affine dyadic maps preserve the
/// denominator and the orbit stays cheap and non-degenerate.
///
/// Quadratic irrationals are forbidden starts for continued-fraction maps:
/// their digit expansions are eventually periodic, so the orbit visits only
/// finitely many points. Seeded rationals/doubles stay clear of that set.
inline Rational birkhoff_start(std::uint64_t seed) {
  static constexpr std::int64_t q = 1073741789;  // prime, not a Mersenne shape
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_int_distribution<std::int64_t> dist(2, q - 2);
  return Rational(dist(rng), q);
}

}  // namespace intdyn
