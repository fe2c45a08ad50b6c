#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "intdyn/birkhoff.hpp"
#include "intdyn/catalog.hpp"
#include "intdyn/cuntz.hpp"
#include "intdyn/transfer.hpp"
#include "intdyn/ulam.hpp"
#include "oracles.hpp"

using namespace intdyn;
using R = Rational;

TEST_CASE("transfer_apply: exact fixed points of the catalog pairs") {
  auto farey = get_entry<R>("farey");
  for (const auto& x : oracle::prime_samples(20, 3)) {
    auto t = transfer_apply(farey.system, *farey.density, x);
    CHECK(t.value == R(1) / x);  // 1/(x+1) + 1/(x(x+1)) = 1/x
    CHECK(t.tail_bound == 0);
  }

  auto chan = get_entry<R>("chan_sigma2");
  for (const auto& x : oracle::prime_samples(20, 5)) {
    auto t = transfer_apply(chan.system, *chan.density, x);
    CHECK(t.value == R(1) / (x + 1));
  }

  // Gauss: the truncated sum telescopes, Σ_{k≤K} = 1/(x+1) − 1/(x+K+1).
  auto gauss = get_entry<R>("gauss", 100);
  for (const auto& x : oracle::prime_samples(5, 7)) {
    auto t = transfer_apply(gauss.system, *gauss.density, x, 100);
    R want = R(1) / (x + 1) - R(1) / (x + 101);
    CHECK(t.value == want);
    CHECK(R(1) / (x + 101) <= t.tail_bound);  // actual tail within the bound
    CHECK(t.tail_bound == R(1, 100));
  }
}

TEST_CASE("invariance_residual: exact zeros, tail-only deficits, and a genuine failure") {
  auto samples = oracle::prime_samples(25, 11);

  auto tent = get_entry<R>("tent");
  auto trep = invariance_residual(tent.system, *tent.density, samples);
  CHECK(trep.max_residual == 0.0);

  auto tj = get_entry<R>("tent_jump", 40);
  auto jrep = invariance_residual(tj.system, *tj.density, samples);
  CHECK(jrep.exact_zero_beyond_tail);
  CHECK(jrep.max_residual <= jrep.tail_bound);
  CHECK(jrep.tail_bound == to_double(pow_rat(R(1, 2), 40)));

  // γ is not σ₁-invariant: at x = 1/2 the transfer gives 3/5 ≠ 2/3.
  auto farey = get_entry<R>("farey");
  auto gamma = *get_entry<R>("gauss").density;
  auto t = transfer_apply(farey.system, gamma, R(1, 2));
  CHECK(t.value == R(3, 5));
  CHECK(gamma.eval_exact(R(1, 2)) == R(2, 3));
  auto frep = invariance_residual(farey.system, gamma, samples);
  CHECK(frep.max_residual > 0.0);
}

TEST_CASE("transport_density: the three paper transports, exactly up to scale") {
  auto farey = get_entry<R>("farey");
  Density psi = transport_density(farey.system, *farey.density);
  CHECK(psi.projectively_equal(*get_entry<R>("gauss").density));
  CHECK(psi.eval_exact(R(1, 3)) == R(3, 4));  // 1/(x+1)
  CHECK(psi.integrable);

  auto chan = get_entry<R>("chan_sigma2");
  Density psi2 = transport_density(chan.system, *chan.density);
  CHECK(psi2.projectively_equal(*get_entry<R>("chan_tau2").density));

  auto tent = get_entry<R>("tent");
  Density psi3 = transport_density(tent.system, *tent.density);
  CHECK(psi3.factors.empty());
  CHECK(psi3.eval_exact(R(1, 3)) == R(1, 2));

  // Non-integrable input is accepted (the L¹ hypothesis is deliberately
  // violated here); the output is the finite Gauss density.
  CHECK(!farey.density->integrable);
}

TEST_CASE("transport duality: ψ(x) equals the squared adjoint action on √φ") {
  for (const auto& name : {"farey", "chan_sigma2", "tent"}) {
    auto e = get_entry<R>(name);
    Density psi = transport_density(e.system, *e.density);
    const auto& f1 = e.system.branch(1);
    for (const auto& x : oracle::prime_samples(15, 13)) {
      // {S(f1)* √φ}(x)² = |f1'(x)|·φ(f1(x)), assembled through radicals.
      RadicalValue v = RadicalValue::root(1, abs_s(f1.derivative(x))) *
                       RadicalValue::root(1, e.density->eval_exact(f1.eval(x)));
      CHECK((v * v).as_rational() == psi.eval_exact(x));
    }
  }
}

TEST_CASE("induced_measure: closed-form example and trivial cases") {
  auto farey = get_entry<R>("farey");
  Interval<R> A(R(1, 2), R(1));
  double nu = induced_measure(farey.map, A, *farey.density, Interval<R>(R(1, 3), R(1, 2)));
  CHECK(nu == doctest::Approx(std::log(9.0 / 8.0)).epsilon(1e-12));
  // Independent quadrature of ∫_{2/3}^{3/4} dx/x.
  double quad = oracle::simpson([](double x) { return 1.0 / x; }, 2.0 / 3.0, 3.0 / 4.0);
  CHECK(nu == doctest::Approx(quad).epsilon(1e-10));

  // E = ambient: ν(X) = ∫_A φ.
  auto tent = get_entry<R>("tent");
  double full = induced_measure(tent.map, A, *tent.density, tent.map.ambient);
  CHECK(full == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("induced_measure agrees with the transported density on dyadic intervals") {
  for (const auto& name : {"farey", "chan_sigma2", "tent"}) {
    auto e = get_entry<R>(name);
    Interval<R> A = e.system.branch(1).range();
    Density psi = transport_density(e.system, *e.density);
    for (int depth = 0; depth <= 4; ++depth) {
      long cells = 1L << depth;
      for (long i = 0; i < cells; ++i) {
        Interval<R> E(R(i, cells), R(i + 1, cells));
        double nu = induced_measure(e.map, A, *e.density, E);
        double integral = psi.integrate(to_double(E.lo), to_double(E.hi));
        CHECK(std::abs(nu - integral) <= 1e-10);
      }
    }
  }
}

TEST_CASE("pullback_check: transported density against the first branch") {
  auto farey = get_entry<R>("farey");
  Density theta = *farey.density;
  Density psi = transport_density(farey.system, theta);

  // T = f1 as a single-piece map; ν_∞ = ν_2 ∘ f1 means ψ = |f1'|·(θ'∘f1).
  PiecewiseMap<R> f1_map;
  f1_map.ambient = farey.map.ambient;
  auto f1 = farey.system.branch(1);
  f1_map.pieces = {f1};
  auto rep = pullback_check(f1_map, psi, theta, oracle::prime_samples(30, 17));
  CHECK(rep.exact_zero);
  CHECK(rep.excluded == 0);

  // T = identity: ψ1 = ψ2.
  PiecewiseMap<R> ident;
  ident.ambient = farey.map.ambient;
  ident.pieces = {MoebiusBranch<R>(R(1), R(0), R(0), R(1), farey.map.ambient)};
  auto irep = pullback_check(ident, theta, theta, oracle::prime_samples(10, 19));
  CHECK(irep.exact_zero);

  // T = x/2 with ψ2 ≡ 1, ψ1 ≡ 1/2.
  PiecewiseMap<R> halve;
  halve.ambient = farey.map.ambient;
  halve.pieces = {MoebiusBranch<R>(R(1), R(0), R(0), R(2), farey.map.ambient)};
  auto hrep = pullback_check(halve, Density::constant(R(1, 2)), Density::constant(1),
                             oracle::prime_samples(10, 23));
  CHECK(hrep.exact_zero);

  // Boundary samples are excluded, not failed.
  auto tent = get_entry<R>("tent");
  std::vector<R> with_boundary = {R(1, 2), R(3, 7)};
  auto brep = pullback_check(tent.map, Density::constant(1), Density::constant(R(1, 2)),
                             with_boundary);
  CHECK(brep.excluded == 1);
}

TEST_CASE("density integration: closed forms against quadrature oracle") {
  auto gamma = *get_entry<R>("gauss").density;
  CHECK(gamma.integrate(0, 1) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(gamma.normalization == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-15));

  auto mu2 = *get_entry<R>("chan_tau2").density;
  CHECK(mu2.integrate(0, 1) == doctest::Approx(std::log(4.0 / 3.0)).epsilon(1e-14));
  CHECK(mu2.integrate(0.2, 0.7) ==
        doctest::Approx(oracle::simpson(
                            [&](double x) { return 1.0 / ((x + 1) * (x + 2)); }, 0.2, 0.7))
            .epsilon(1e-10));

  // θ' = 1/x is not integrable over [0,1]; the factored form reports it.
  auto theta = *get_entry<R>("farey").density;
  CHECK(!theta.integrable);
  CHECK_THROWS_AS((void)theta.integrate(0, 1), Error);
  // Away from the pole it integrates fine.
  CHECK(theta.integrate(0.5, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));

  Density squared;  // 1/(x+1)²: single repeated factor, power rule
  squared.factors = {{1, 1, -2}};
  CHECK(squared.integrate(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("tail bounds: TailUnbounded for sup-unbounded densities on infinite families") {
  auto gauss = get_entry<R>("gauss", 32);
  auto theta = *get_entry<R>("farey").density;  // sup on [0,1] is infinite
  CHECK_THROWS_AS((void)transfer_apply(gauss.system, theta, R(1, 3)), Error);
  try {
    (void)transfer_apply(gauss.system, theta, R(1, 3));
  } catch (const Error& e) {
    CHECK(e.kind() == Err::tail_unbounded);
  }
}

TEST_CASE("ulam_density: dyadic exactness and probability-vector structure") {
  auto tent = get_entry<double>("tent");
  UlamOptions opt;
  opt.cells = 1024;
  auto res = ulam_density(tent.map, opt);
  CHECK((res.density.values.array() - 1.0).abs().maxCoeff() <= 1e-10);
  CHECK(res.density.values.minCoeff() >= 0.0);
  CHECK(std::abs(res.density.h() * res.density.values.sum() - 1.0) <= 1e-12);
  CHECK(res.coverage_defect <= 1e-12);

  auto gauss = get_entry<double>("gauss");
  opt.cells = 1024;
  auto gres = ulam_density(gauss.map, opt);
  CHECK(std::abs(gres.density.h() * gres.density.values.sum() - 1.0) <= 1e-12);
  CHECK(gres.density.values.minCoeff() >= 0.0);
  CHECK(l1_distance_to_density(gres.density, *gauss.density) <= 0.05);

  auto chan = get_entry<double>("chan_tau2");
  auto cres = ulam_density(chan.map, opt);
  CHECK(l1_distance_to_density(cres.density, *chan.density) <= 0.05);
}

TEST_CASE("birkhoff_histogram: smoke runs against the analytic densities") {
  auto gauss = get_entry<double>("gauss");
  std::mt19937_64 rng(2025);
  std::uniform_real_distribution<double> dist(1e-9, 1.0);
  GridFunction hist = birkhoff_histogram(gauss.map, dist(rng), 200000L, 64);
  CHECK(l1_distance_to_density(hist, *gauss.density) <= 0.1);

  // Affine dyadic pieces: double orbits collapse, exact rational orbits don't.
  auto tent = get_entry<R>("tent");
  CHECK(all_pieces_affine(tent.map));
  CHECK(!all_pieces_affine(gauss.map));
  GridFunction th = birkhoff_histogram(tent.map, birkhoff_start(2025), 200000L, 64);
  CHECK(l1_distance_to_density(th, *get_entry<double>("tent").density) <= 0.1);
}

TEST_CASE("birkhoff orbit escape is detected") {
  PiecewiseMap<double> shifted;  // x + 0.7 leaves [0,1]
  shifted.ambient = Interval<double>(0, 1);
  shifted.pieces = {MoebiusBranch<double>(1, 0.7, 0, 1, shifted.ambient)};
  CHECK_THROWS_AS((void)birkhoff_histogram(shifted, 0.5, 100L, 8), Error);
}
