#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "intdyn/catalog.hpp"
#include "intdyn/cuntz.hpp"
#include "oracles.hpp"

using namespace intdyn;
using R = Rational;

namespace {

const TestFn one{TestFn::Kind::one};

BranchSystem<R> sys(const std::string& name, int K = 64) { return get_entry<R>(name, K).system; }
BranchSystem<double> sysd(const std::string& name, int K = 64) {
  return get_entry<double>(name, K).system;
}

}  // namespace

TEST_CASE("generator action: closed forms from the representation formulas") {
  auto tent = sys("tent");
  // (S(f1)1)(x) = √2 · χ_[1/2,1](x)
  CHECK(apply_generator_exact(tent, 1, one, R(3, 4)) == RadicalValue::root(1, 2));
  CHECK(apply_generator_exact(tent, 1, one, R(1, 4)).is_zero());
  CHECK(apply_generator_exact(tent, 2, one, R(1, 4)) == RadicalValue::root(1, 2));

  auto farey = sys("farey");
  for (const auto& u : oracle::prime_samples(20, 5)) {
    R x = (u + 1) / 2;  // inside [1/2, 1]
    // (S(f1)1)(x) = χ_[1/2,1](x)/x
    CHECK(apply_generator_exact(farey, 1, one, x).as_rational() == R(1) / x);
  }

  for (const auto& u : oracle::prime_samples(20, 6)) {
    R x = u / 2;  // inside [0, 1/2)
    // (S(f2)1)(x) = χ_[0,1/2)(x)/(1−x)
    CHECK(apply_generator_exact(farey, 2, one, x).as_rational() == R(1) / (1 - x));
  }

  auto chan = sys("chan_sigma2");
  for (const auto& u : oracle::prime_samples(20, 8)) {
    R x = (u + 1) / 2;
    // weight from the piecewise form: √|σ₂'| = 1/x on the upper branch range
    CHECK(apply_generator_exact(chan, 1, one, x).as_rational() == R(1) / x);
  }

  auto gauss = sys("gauss", 32);
  for (int n = 1; n <= 8; ++n) {
    for (const auto& u : oracle::prime_samples(5, n)) {
      R x = gauss.branch(n).eval(u);  // inside (1/(n+1), 1/n]
      CHECK(apply_generator_exact(gauss, n, one, x).as_rational() == R(1) / x);
      if (n > 1) CHECK(apply_generator_exact(gauss, n - 1, one, x).is_zero());
    }
  }
}

TEST_CASE("adjoint action: closed forms") {
  auto farey = sys("farey");
  for (const auto& x : oracle::prime_samples(20, 9)) {
    // (S(f1)*1)(x) = 1/(x+1)
    CHECK(apply_adjoint_exact(farey, 1, one, x).as_rational() == R(1) / (x + 1));
  }
  auto chan = sys("chan_sigma2");
  for (const auto& x : oracle::prime_samples(20, 11)) {
    // (S(f2)*1)(x) = 1/√2
    CHECK(apply_adjoint_exact(chan, 2, one, x) == RadicalValue::root(1, R(1, 2)));
  }
}

TEST_CASE("pointwise isometry: S_i* S_i = I exactly, all catalog systems") {
  auto fns = standard_test_functions();
  for (const auto& name : {"tent", "farey", "chan_sigma2"}) {
    auto f = sys(name);
    for (int i = 1; i <= 2; ++i) {
      OperatorWord w = OperatorWord::adj(i) * OperatorWord::gen(i);
      for (const auto& phi : fns)
        for (const auto& x : oracle::prime_samples(10, 13 + i)) {
          RadicalValue got = apply_word_exact(f, w, phi, x);
          CHECK(got == RadicalValue::rational(phi.eval_exact(x)));
        }
    }
  }
}

TEST_CASE("range projections: S_i S_i* acts as multiplication by the range indicator") {
  auto farey = sys("farey");
  for (int i = 1; i <= 2; ++i) {
    OperatorWord w = OperatorWord::gen(i) * OperatorWord::adj(i);
    for (const auto& x : oracle::prime_samples(20, 17)) {
      R chi = farey.in_range(i, x) ? 1 : 0;
      CHECK(apply_word_exact(farey, w, one, x) == RadicalValue::rational(chi));
    }
  }
}

TEST_CASE("orthogonality across distinct generators is exact (disjoint ranges)") {
  auto farey = sys("farey");
  OperatorWord w = OperatorWord::adj(1) * OperatorWord::gen(2);
  for (const auto& x : oracle::prime_samples(20, 19))
    CHECK(apply_word_exact(farey, w, one, x).is_zero());
}

TEST_CASE("word evaluator: algebra identities and a desk-computed value") {
  auto tent = sys("tent");
  // adj(1)·gen(1) is the identity.
  OperatorWord id = OperatorWord::adj(1) * OperatorWord::gen(1);
  TestFn sq{TestFn::Kind::square};
  for (const auto& x : oracle::prime_samples(10, 23))
    CHECK(apply_word_exact(tent, id, sq, x) == RadicalValue::rational(x * x));

  // Alternative-embedding word at n = 1 applied to 1 on the tent system at
  // x = 5/7: the first summand dies on the indicator, the second contributes
  // √2·√2·√(1/2) = √2.
  OperatorWord w1 = OperatorWord::alt_embedding(1);
  CHECK(apply_word_exact(tent, w1, one, R(5, 7)) == RadicalValue::root(1, 2));

  // Homomorphism: gen(i)·gen(j) equals the generator of the composed branch.
  auto farey = sys("farey");
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) {
      BranchSystem<R> single;
      single.ambient = farey.ambient;
      single.branches = {compose_branches(farey, {i, j})};
      OperatorWord w = OperatorWord::gen(i) * OperatorWord::gen(j);
      for (const auto& x : oracle::prime_samples(8, 29 + i + j)) {
        RadicalValue lhs = apply_word_exact(farey, w, one, x);
        RadicalValue rhs = apply_generator_exact(single, 1, one, x);
        CHECK(lhs == rhs);
      }
    }
}

TEST_CASE("embedding words match the induced generators, tent closed form included") {
  auto fns = standard_test_functions();
  auto seeds = oracle::prime_samples(4, 31);
  for (const auto& name : {"tent", "farey", "chan_sigma2"}) {
    auto rep = check_embedding(sys(name), 8, fns, seeds);
    CHECK(rep.exact);
    CHECK(rep.coefficients_match);
    CHECK(rep.max_deviation == 0.0);
  }

  // Explicit check of the tent closed form: (π(s_n)1)(x) = 2^(n/2) on
  // [2^-n, 2^-(n-1)], i.e. the weight radicand is 2^n.
  auto g = jump_family(sys("tent"), 16);
  for (int n = 1; n <= 10; ++n) {
    R x = g.branch(n).eval(R(9, 17));
    RadicalValue got = apply_generator_exact(g, n, one, x);
    CHECK(got == RadicalValue::root(1, pow_rat(R(2), n)));
  }
}

TEST_CASE("check_cuntz_relations: finite systems are on the nose") {
  auto fns = standard_test_functions();
  auto samples = oracle::prime_samples(8, 37);
  for (const auto& name : {"tent", "farey", "chan_sigma2"}) {
    auto rep = check_cuntz_relations(sys(name), sysd(name), fns, samples, 2, 1024);
    CHECK(rep.orthonormal_exact);
    CHECK(rep.range_projection_exact);
    CHECK(rep.completeness_exact);
    CHECK(rep.max_orthonormal_dev == 0.0);
    // quadrature-level gaps: O(h) with a modest constant
    CHECK(rep.max_adjointness_gap <= 40.0 / 1024);
    CHECK(rep.grid_completeness_dev <= 0.05);
  }
}

TEST_CASE("infinite arity: partial sums are monotone and match the mass formula") {
  auto gauss = sys("gauss", 128);
  Rational prev = -1;
  for (int k = 1; k <= 128; ++k) {
    Rational res = completeness_residual_sq(gauss, one, k);
    CHECK(res == Rational(1, k + 1));  // ∫_0^{1/(k+1)} 1
    if (k > 1) CHECK(res < prev);
    prev = res;
  }
  auto rep = check_cuntz_relations(gauss, sysd("gauss", 128), standard_test_functions(),
                                   oracle::prime_samples(6, 41), 128, 512);
  CHECK(rep.orthonormal_exact);
  CHECK(rep.range_projection_exact);
  CHECK(rep.partial_monotone);
}

TEST_CASE("inner products: quadrature pairing") {
  GridFunction a = GridFunction::sample(0, 1, 4096, [](double) { return 1.0; });
  CHECK(inner_product(a, a) == doctest::Approx(1.0).epsilon(1e-12));

  GridFunction step = GridFunction::sample(0, 1, 4096, [](double x) { return x < 0.5 ? 1.0 : 0.0; });
  CHECK(std::abs(inner_product(step, a) - 0.5) <= 1.0 / 4096);

  auto tent = sysd("tent");
  GridFunction s1 = apply_generator(tent, 1, a);
  GridFunction s2 = apply_generator(tent, 2, a);
  CHECK(inner_product(s1, s2) == 0.0);  // disjoint supports, exactly

  GridFunction other = GridFunction::sample(0, 1, 512, [](double) { return 1.0; });
  CHECK_THROWS_AS((void)inner_product(a, other), Error);
}

TEST_CASE("alternative embedding words satisfy the infinite relations") {
  auto fns = standard_test_functions();
  auto samples = oracle::prime_samples(5, 43);
  for (const auto& name : {"tent", "farey", "chan_sigma2"}) {
    auto rep = check_alt_embedding(sys(name), 4, fns, samples);
    CHECK(rep.exact);
    CHECK(rep.max_deviation == 0.0);
  }
}

TEST_CASE("grid operator action approximates the closed forms") {
  auto tent = sysd("tent");
  GridFunction phi = GridFunction::sample(0, 1, 4096, [](double) { return 1.0; });
  GridFunction out = apply_generator(tent, 1, phi);
  for (int m = 0; m < out.size(); m += 97) {
    double x = out.node(m);
    double want = x >= 0.5 ? std::sqrt(2.0) : 0.0;
    CHECK(std::abs(out.values[m] - want) <= 1e-12);
  }

  auto farey = sysd("farey");
  GridFunction fout = apply_adjoint(farey, 1, phi);
  for (int m = 0; m < fout.size(); m += 101) {
    double x = fout.node(m);
    CHECK(std::abs(fout.values[m] - 1.0 / (x + 1.0)) <= 1e-12);
  }

  CHECK_THROWS_AS((void)apply_generator(tent, 3, phi), Error);
  GridFunction off = GridFunction::sample(0, 0.5, 64, [](double) { return 1.0; });
  CHECK_THROWS_AS((void)apply_generator(tent, 1, off), Error);
}

TEST_CASE("a corrupted branch slope breaks the relations detectably") {
  // Tent system with f2 = (3/5)x: ranges [0,3/5] and [1/2,1] overlap, so
  // completeness and cross-orthogonality must fail while the branch-local
  // chain rule still holds.
  Interval<R> X(R(0), R(1));
  BranchSystem<R> bad;
  bad.ambient = X;
  bad.branches = {MoebiusBranch<R>(R(-1), R(2), R(0), R(2), X),
                  MoebiusBranch<R>(R(3), R(0), R(0), R(5), X)};
  CHECK(!validate_system(bad).valid);

  std::vector<R> samples = {R(9, 10), R(5, 9), R(11, 20), R(1, 3)};
  BranchSystem<double> badd;
  badd.ambient = Interval<double>(0, 1);
  badd.branches = {MoebiusBranch<double>(-1, 2, 0, 2, badd.ambient),
                   MoebiusBranch<double>(0.6, 0, 0, 1, badd.ambient)};
  auto rep = check_cuntz_relations(bad, badd, standard_test_functions(), samples, 2, 256);
  CHECK(!rep.orthonormal_exact);
  CHECK(!rep.completeness_exact);
}

TEST_CASE("word evaluator rejects out-of-arity indices and empty words") {
  auto tent = sys("tent");
  OperatorWord bad = OperatorWord::gen(5);
  CHECK_THROWS_AS((void)apply_word_exact(tent, bad, one, R(1, 3)), Error);
  OperatorWord empty;
  CHECK_THROWS_AS((void)apply_word_exact(tent, empty, one, R(1, 3)), Error);
}
