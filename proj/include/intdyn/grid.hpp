#pragma once

#include <Eigen/Dense>
#include <functional>

#include "intdyn/error.hpp"

namespace intdyn {

/// Function on [lo, hi] sampled at the M midpoints of a uniform partition,
/// with uniform quadrature weight h = (hi−lo)/M. The discretized L² vector.
///
/// Values are real in the default build; every formula in scope is
/// real-valued, and a complex-valued function factors through its real and
/// imaginary parts without touching the operator machinery.
struct GridFunction {
  double lo = 0.0;
  double hi = 1.0;
  Eigen::VectorXd values;

  GridFunction() = default;
  GridFunction(double l, double h, Eigen::VectorXd v) : lo(l), hi(h), values(std::move(v)) {
    if (values.size() < 2) throw Error(Err::grid_mismatch, "grid needs M >= 2");
    if (!(lo < hi)) throw Error(Err::out_of_domain, "grid needs lo < hi");
  }

  int size() const { return static_cast<int>(values.size()); }
  double h() const { return (hi - lo) / size(); }
  double node(int m) const { return lo + (m + 0.5) * h(); }

  static GridFunction zeros(double lo, double hi, int M) {
    return GridFunction(lo, hi, Eigen::VectorXd::Zero(M));
  }

  static GridFunction sample(double lo, double hi, int M, const std::function<double(double)>& fn) {
    GridFunction g = zeros(lo, hi, M);
    for (int m = 0; m < M; ++m) g.values[m] = fn(g.node(m));
    return g;
  }

  /// Linear interpolation between node values, clamped at the ends.
  double interp(double x) const {
    double t = (x - lo) / h() - 0.5;
    if (t <= 0.0) return values[0];
    int m = static_cast<int>(t);
    if (m >= size() - 1) return values[size() - 1];
    double frac = t - m;
    return values[m] * (1.0 - frac) + values[m + 1] * frac;
  }

  bool same_grid(const GridFunction& o) const {
    return size() == o.size() && lo == o.lo && hi == o.hi;
  }
};

/// ⟨φ, ψ⟩ = Σ w_m φ_m ψ_m (real scalars).
inline double inner_product(const GridFunction& phi, const GridFunction& psi) {
  if (!phi.same_grid(psi)) throw Error(Err::grid_mismatch, "inner product across different grids");
  return phi.h() * phi.values.dot(psi.values);
}

inline double norm_l2(const GridFunction& phi) {
  return std::sqrt(phi.h()) * phi.values.norm();
}

inline double norm_l1(const GridFunction& phi) {
  return phi.h() * phi.values.cwiseAbs().sum();
}

inline GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  if (!a.same_grid(b)) throw Error(Err::grid_mismatch, "subtracting across different grids");
  return GridFunction(a.lo, a.hi, a.values - b.values);
}

inline GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  if (!a.same_grid(b)) throw Error(Err::grid_mismatch, "adding across different grids");
  return GridFunction(a.lo, a.hi, a.values + b.values);
}

}  // namespace intdyn
