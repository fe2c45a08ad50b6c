#include "intdyn/verify.hpp"

#include <random>

#include "intdyn/cuntz.hpp"
#include "intdyn/jump.hpp"
#include "intdyn/transfer.hpp"

namespace intdyn {

Json SuiteReport::to_json() const {
  Json j;
  j["all_pass"] = all_pass;
  Json arr = Json::array();
  for (const auto& c : checks) {
    Json cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    cj["details"] = c.details;
    arr.push_back(cj);
  }
  j["checks"] = arr;
  return j;
}

std::string SuiteReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.pass) return c.name;
  return "";
}

std::vector<std::string> jump_pair_bases() { return {"farey", "chan_sigma2", "tent"}; }

std::vector<Rational> prime_fraction_samples(long count, std::uint64_t seed) {
  static const long primes[] = {9973, 10007, 20011, 40009};
  std::mt19937_64 rng(seed);
  std::vector<Rational> out;
  out.reserve(size_t(count));
  for (long i = 0; i < count; ++i) {
    long q = primes[i % 4];
    std::uniform_int_distribution<long> dist(2, q - 2);
    out.emplace_back(dist(rng), q);
  }
  return out;
}

std::vector<double> uniform_samples(long count, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> out;
  out.reserve(size_t(count));
  for (long i = 0; i < count; ++i) out.push_back(dist(rng));
  return out;
}

std::vector<Rational> interior_rationals(long count, std::uint64_t seed) {
  static const long dens[] = {29, 31, 37, 41, 43, 47};
  std::mt19937_64 rng(seed);
  std::vector<Rational> out;
  out.reserve(size_t(count));
  for (long i = 0; i < count; ++i) {
    long q = dens[i % 6];
    std::uniform_int_distribution<long> dist(2, q - 2);
    out.emplace_back(dist(rng), q);
  }
  return out;
}

namespace {

template <class S>
Interval<S> target_of(const CatalogEntry<S>& base) {
  return base.system.branch(1).range();  // A = f₁(X), per the jump construction
}

std::string jump_name_of(const std::string& base) {
  if (base == "farey") return "gauss";
  if (base == "chan_sigma2") return "chan_tau2";
  if (base == "tent") return "tent_jump";
  throw Error(Err::unknown_entry, base + " is not a jump-pair base");
}

}  // namespace

CheckResult check_pair_jump_exact(const std::string& base, const VerifyOptions& opt) {
  CheckResult res;
  res.name = base + ".jump_equals_exact";
  auto e = get_entry<Rational>(base, opt.truncation);
  JumpSpec<Rational> spec(e.map, target_of(e), opt.entry_cap);
  auto samples = prime_fraction_samples(opt.exact_samples, opt.seed);
  auto rep = check_jump_equals(spec, *e.closed_form_jump, samples);
  res.pass = rep.exact_zero && rep.excluded == 0;
  res.details["samples"] = rep.samples;
  res.details["excluded"] = rep.excluded;
  res.details["max_deviation"] = rep.max_deviation;
  res.details["exact_zero"] = rep.exact_zero;
  res.details["max_entry_time"] = rep.max_entry_time;
  return res;
}

CheckResult check_pair_jump_float(const std::string& base, const VerifyOptions& opt) {
  CheckResult res;
  res.name = base + ".jump_equals_float";
  auto e = get_entry<double>(base, opt.truncation);
  JumpSpec<double> spec(e.map, target_of(e), opt.entry_cap);
  auto samples = uniform_samples(opt.float_samples, 1e-3, 1.0, opt.seed + 1);
  auto rep = check_jump_equals(spec, *e.closed_form_jump, samples);
  res.pass = rep.excluded == 0 && rep.max_deviation <= opt.float_jump_tol;
  res.details["samples"] = rep.samples;
  res.details["excluded"] = rep.excluded;
  res.details["max_deviation"] = rep.max_deviation;
  res.details["tolerance"] = opt.float_jump_tol;
  res.details["max_entry_time"] = rep.max_entry_time;
  return res;
}

CheckResult check_pair_embedding(const std::string& base, const VerifyOptions& opt) {
  CheckResult res;
  res.name = base + ".embedding";
  auto e = get_entry<Rational>(base, std::max(opt.truncation, opt.embed_nmax + 4));
  auto rep = check_embedding(e.system, opt.embed_nmax, standard_test_functions(),
                             interior_rationals(5, opt.seed + 2));
  res.pass = rep.exact && rep.coefficients_match;
  res.details["n_max"] = rep.n_max;
  res.details["compared"] = rep.compared;
  res.details["exact"] = rep.exact;
  res.details["max_deviation"] = rep.max_deviation;
  res.details["coefficients_match"] = rep.coefficients_match;
  return res;
}

CheckResult check_pair_cuntz(const std::string& base, const VerifyOptions& opt) {
  CheckResult res;
  res.name = base + ".cuntz_relations";
  auto fns = standard_test_functions();
  auto samples = interior_rationals(8, opt.seed + 3);
  auto e = get_entry<Rational>(base, opt.truncation);
  auto ed = get_entry<double>(base, opt.truncation);
  auto rep = check_cuntz_relations(e.system, ed.system, fns, samples, 2, opt.grid_M);

  // The induced infinite family must satisfy the weak (partial-sum) relations.
  auto g = jump_family(e.system, opt.truncation);
  auto gd = get_entry<double>(jump_name_of(base), opt.truncation).system;
  auto grep = check_cuntz_relations(g, gd, fns, samples, opt.truncation, opt.grid_M);

  double h = 1.0 / opt.grid_M;
  double adj_tol = 40.0 * h;  // O(h) midpoint+interpolation error, generous constant
  res.pass = rep.orthonormal_exact && rep.range_projection_exact && rep.completeness_exact &&
             rep.max_adjointness_gap <= adj_tol && grep.orthonormal_exact &&
             grep.range_projection_exact && grep.partial_monotone;
  res.details["finite"] = {{"orthonormal_exact", rep.orthonormal_exact},
                           {"range_projection_exact", rep.range_projection_exact},
                           {"completeness_exact", rep.completeness_exact},
                           {"max_adjointness_gap", rep.max_adjointness_gap},
                           {"adjointness_tol", adj_tol},
                           {"grid_completeness_dev", rep.grid_completeness_dev}};
  Json partial = Json::array();
  for (const auto& [fn, v] : grep.partial_residual_sq)
    partial.push_back(Json{{"fn", fn}, {"residual_sq", v}});
  res.details["infinite"] = {{"orthonormal_exact", grep.orthonormal_exact},
                             {"range_projection_exact", grep.range_projection_exact},
                             {"partial_monotone", grep.partial_monotone},
                             {"partial_residual_sq", partial}};
  return res;
}

CheckResult check_pair_transport(const std::string& base, const VerifyOptions& opt) {
  CheckResult res;
  res.name = base + ".transport";
  auto e = get_entry<Rational>(base, opt.truncation);
  auto jump_entry = get_entry<Rational>(jump_name_of(base), opt.truncation);
  Density psi = transport_density(e.system, *e.density);
  bool match = psi.projectively_equal(*jump_entry.density);
  res.pass = match;
  res.details["transported"] = psi.str();
  res.details["expected"] = jump_entry.density->str();
  res.details["projective_match"] = match;
  res.details["integrable"] = psi.integrable;
  return res;
}

CheckResult check_pair_invariance(const std::string& base, const VerifyOptions& opt) {
  CheckResult res;
  res.name = base + ".invariance";
  auto samples = interior_rationals(25, opt.seed + 4);
  auto e = get_entry<Rational>(base, opt.truncation);
  auto be = invariance_residual(e.system, *e.density, samples);
  auto j = get_entry<Rational>(jump_name_of(base), opt.truncation);
  auto je = invariance_residual(j.system, *j.density, samples);
  res.pass = be.exact_zero_beyond_tail && be.max_residual == 0.0 && je.exact_zero_beyond_tail;
  res.details["base"] = {{"max_residual", be.max_residual},
                         {"exact_zero", be.max_residual == 0.0}};
  res.details["jump"] = {{"max_residual", je.max_residual},
                         {"tail_bound", je.tail_bound},
                         {"within_tail", je.exact_zero_beyond_tail},
                         {"terms", je.terms}};
  return res;
}

CheckResult check_pair_induced(const std::string& base, const VerifyOptions& opt) {
  CheckResult res;
  res.name = base + ".induced_consistency";
  auto e = get_entry<Rational>(base, opt.truncation);
  Interval<Rational> A = target_of(e);
  Density psi = transport_density(e.system, *e.density);
  double worst = 0.0;
  long count = 0;
  for (int depth = 0; depth <= opt.dyadic_depth; ++depth) {
    long cells = 1L << depth;
    for (long i = 0; i < cells; ++i) {
      Interval<Rational> E(Rational(i, cells), Rational(i + 1, cells));
      double nu = induced_measure(e.map, A, *e.density, E);
      double integral = psi.integrate(to_double(E.lo), to_double(E.hi));
      worst = std::max(worst, std::abs(nu - integral));
      ++count;
    }
  }
  res.pass = worst <= opt.induced_tol;
  res.details["intervals"] = count;
  res.details["max_abs_diff"] = worst;
  res.details["tolerance"] = opt.induced_tol;
  return res;
}

CheckResult check_pair_alt_embedding(const std::string& base, const VerifyOptions& opt) {
  CheckResult res;
  res.name = base + ".alt_embedding_relations";
  auto e = get_entry<Rational>(base, opt.truncation);
  auto rep = check_alt_embedding(e.system, opt.alt_nmax, standard_test_functions(),
                                 interior_rationals(6, opt.seed + 5));
  res.pass = rep.exact;
  res.details["n_max"] = rep.n_max;
  res.details["compared"] = rep.compared;
  res.details["exact"] = rep.exact;
  res.details["max_deviation"] = rep.max_deviation;
  return res;
}

SuiteReport run_verify_all(const VerifyOptions& opt) {
  SuiteReport suite;
  for (const auto& base : jump_pair_bases()) {
    suite.add(check_pair_jump_exact(base, opt));
    suite.add(check_pair_jump_float(base, opt));
    suite.add(check_pair_embedding(base, opt));
    suite.add(check_pair_cuntz(base, opt));
    suite.add(check_pair_transport(base, opt));
    suite.add(check_pair_invariance(base, opt));
    suite.add(check_pair_induced(base, opt));
    suite.add(check_pair_alt_embedding(base, opt));
  }
  return suite;
}

std::vector<std::pair<double, double>> figure_samples(const std::string& name, int count) {
  auto e = get_entry<double>(name);
  std::vector<std::pair<double, double>> out;
  out.reserve(size_t(count));
  double lo = e.map.ambient.lo, hi = e.map.ambient.hi;
  for (int i = 0; i < count; ++i) {
    double x = lo + (hi - lo) * double(i) / double(count - 1);
    out.emplace_back(x, e.map.eval(x));
  }
  return out;
}

}  // namespace intdyn
