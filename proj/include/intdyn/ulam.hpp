#pragma once

#include <Eigen/Sparse>

#include "intdyn/grid.hpp"
#include "intdyn/piecewise.hpp"

namespace intdyn {

struct UlamOptions {
  int cells = 4096;
  double tol = 1e-13;     // L¹ change between successive iterates
  int max_iters = 100000;
  int truncation = -1;    // branch depth; -1 = rule-suggested
};

struct UlamResult {
  GridFunction density;       // piecewise-constant invariant density estimate
  int iterations = 0;
  double step_residual = 0.0; // final L¹ change
  double coverage_defect = 0.0;  // max |1 − row sum| before renormalization
};

/// Ulam discretization of the transfer operator: P[m][m'] is the fraction of
/// cell m that T maps into cell m', assembled from closed-form Möbius branch
/// preimages (no sampling). The left fixed vector of P, found by power
/// iteration on Pᵀ, approximates the invariant density.
inline UlamResult ulam_density(const PiecewiseMap<double>& T, const UlamOptions& opt = {}) {
  const int M = opt.cells;
  if (M < 2) throw Error(Err::out_of_range, "Ulam grid needs at least 2 cells");
  if (double(M) * double(M) * 8.0 > 8e8)
    throw Error(Err::out_of_range, "Ulam grid too large for dense assembly (cells > 9000)");
  const double lo = T.ambient.lo, hi = T.ambient.hi;
  const double h = (hi - lo) / M;

  int depth = opt.truncation;
  if (depth < 0) depth = T.rule ? T.rule->suggested_truncation(M) : T.truncation;
  auto pieces = T.materialize(depth);

  // Row-major accumulator of interval lengths |C_m ∩ T⁻¹(C_m')|.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> acc =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>::Zero(M, M);

  for (const auto& piece : pieces) {
    MoebiusBranch<double> inv = piece.inverse();
    Interval<double> img = piece.range();
    int c_lo = std::max(0, int((img.lo - lo) / h));
    int c_hi = std::min(M - 1, int((img.hi - lo) / h));
    for (int mp = c_lo; mp <= c_hi; ++mp) {
      double target_lo = std::max(lo + mp * h, img.lo);
      double target_hi = std::min(lo + (mp + 1) * h, img.hi);
      if (target_hi <= target_lo) continue;
      double u = inv.eval(target_lo), v = inv.eval(target_hi);
      if (u > v) std::swap(u, v);
      // Distribute the preimage [u, v] over the source cells it spans.
      int s_lo = std::max(0, int((u - lo) / h));
      int s_hi = std::min(M - 1, int((v - lo) / h));
      for (int m = s_lo; m <= s_hi; ++m) {
        double seg = std::min(lo + (m + 1) * h, v) - std::max(lo + m * h, u);
        if (seg > 0) acc(m, mp) += seg;
      }
    }
  }

  // Row-normalize; rows starved by branch truncation are flagged, not dropped.
  UlamResult res;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(size_t(M) * 8);
  for (int m = 0; m < M; ++m) {
    double rowsum = acc.row(m).sum();
    res.coverage_defect = std::max(res.coverage_defect, std::abs(1.0 - rowsum / h));
    if (rowsum <= 0) {
      for (int mp = 0; mp < M; ++mp) trips.emplace_back(mp, m, 1.0 / M);
      continue;
    }
    for (int mp = 0; mp < M; ++mp)
      if (acc(m, mp) > 0) trips.emplace_back(mp, m, acc(m, mp) / rowsum);
  }
  acc.resize(0, 0);
  Eigen::SparseMatrix<double> Pt(M, M);  // transition matrix transposed
  Pt.setFromTriplets(trips.begin(), trips.end());

  Eigen::VectorXd v = Eigen::VectorXd::Constant(M, 1.0 / M);
  double change = 1.0;
  int it = 0;
  for (; it < opt.max_iters; ++it) {
    Eigen::VectorXd next = Pt * v;
    next /= next.sum();
    change = (next - v).cwiseAbs().sum();
    v.swap(next);
    if (change < opt.tol) break;
  }
  if (change >= opt.tol)
    throw Error(Err::non_convergence,
                "power iteration stalled at residual " + std::to_string(change));
  res.iterations = it + 1;
  res.step_residual = change;
  res.density = GridFunction(lo, hi, v / h);  // cell masses -> density values
  return res;
}

/// L¹ distance between a piecewise-constant estimate and the normalized
/// closed-form density, cell masses computed by exact antiderivative.
inline double l1_distance_to_density(const GridFunction& est, const Density& target) {
  double total = 0.0;
  for (int m = 0; m < est.size(); ++m) {
    double a = est.lo + m * est.h(), b = a + est.h();
    double mass_est = est.values[m] * est.h();
    double mass_target = target.normalization * target.integrate(a, b);
    total += std::abs(mass_est - mass_target);
  }
  return total;
}

}  // namespace intdyn
