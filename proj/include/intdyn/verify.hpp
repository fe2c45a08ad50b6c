#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "intdyn/json_io.hpp"

namespace intdyn {

/// Knobs for the verification suite; defaults match the documented bounds.
struct VerifyOptions {
  long exact_samples = 10000;   // rational samples per jump-equivalence check
  long float_samples = 10000;   // float samples on [1e-3, 1]
  int embed_nmax = 20;          // embedding depth
  int alt_nmax = 8;             // alternative-embedding word depth
  int grid_M = 4096;            // quadrature grid
  int truncation = 64;          // countable-family materialization
  long entry_cap = 100000;      // jump orbit cap
  std::uint64_t seed = 20250809;
  int dyadic_depth = 6;         // induced-measure consistency depth
  double float_jump_tol = 1e-9;
  double induced_tol = 1e-10;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  Json details;
};

struct SuiteReport {
  std::vector<CheckResult> checks;
  bool all_pass = true;

  void add(CheckResult c) {
    all_pass = all_pass && c.pass;
    checks.push_back(std::move(c));
  }
  Json to_json() const;
  /// Name of the first failing check, or empty.
  std::string first_failure() const;
};

// Deterministic sample generators.
// Jump-equivalence samples are p/q with q an odd prime and p ≥ 2, which keeps
// orbits off every piece boundary of the catalog maps (boundaries are dyadic
// or of the form 1/n; subtractive orbit updates preserve coprimality).
std::vector<Rational> prime_fraction_samples(long count, std::uint64_t seed);
std::vector<double> uniform_samples(long count, double lo, double hi, std::uint64_t seed);
/// Interior rationals with small odd denominators, for pointwise operator checks.
std::vector<Rational> interior_rationals(long count, std::uint64_t seed);

/// Runs the full identity suite over the three catalog jump pairs.
SuiteReport run_verify_all(const VerifyOptions& opt = {});

// Per-pair checks, exposed for the CLI subcommands and acceptance suite.
CheckResult check_pair_jump_exact(const std::string& base, const VerifyOptions& opt);
CheckResult check_pair_jump_float(const std::string& base, const VerifyOptions& opt);
CheckResult check_pair_embedding(const std::string& base, const VerifyOptions& opt);
CheckResult check_pair_cuntz(const std::string& base, const VerifyOptions& opt);
CheckResult check_pair_transport(const std::string& base, const VerifyOptions& opt);
CheckResult check_pair_invariance(const std::string& base, const VerifyOptions& opt);
CheckResult check_pair_induced(const std::string& base, const VerifyOptions& opt);
CheckResult check_pair_alt_embedding(const std::string& base, const VerifyOptions& opt);

/// Base-map names of the three catalog jump pairs, in suite order.
std::vector<std::string> jump_pair_bases();

/// 1024-sample figure data (x, y) for a catalog map, float backend.
std::vector<std::pair<double, double>> figure_samples(const std::string& name, int count = 1024);

}  // namespace intdyn
