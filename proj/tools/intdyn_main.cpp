// Command-line front end: catalog inspection, jump verification, Cuntz
// relation checks, invariant-measure tooling, and the full verify-all suite.
// Exit codes: 0 = all checks passed, 1 = a check failed, 2 = usage error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "intdyn/birkhoff.hpp"
#include "intdyn/cuntz.hpp"
#include "intdyn/jump.hpp"
#include "intdyn/transfer.hpp"
#include "intdyn/ulam.hpp"
#include "intdyn/verify.hpp"

using namespace intdyn;

namespace {

int env_int(const char* name, int fallback) {
  const char* v = std::getenv(name);
  if (!v) return fallback;
  try {
    return std::stoi(v);
  } catch (...) {
    return fallback;
  }
}

void write_text(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw Error(Err::parse_error, "cannot open output file " + out_path);
  out << text;
}

std::string csv_of(const std::vector<std::pair<double, double>>& rows,
                   const std::string& header) {
  std::string text = header + "\n";
  char buf[64];
  for (const auto& [x, y] : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", x, y);
    text += buf;
  }
  return text;
}

Interval<Rational> parse_set(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos)
    throw Error(Err::parse_error, "--set expects \"lo,hi\"");
  return Interval<Rational>(parse_rational(s.substr(0, comma)),
                            parse_rational(s.substr(comma + 1)));
}

Density density_by_name(const std::string& name, const std::string& map_name) {
  if (name == "auto" || name.empty()) {
    auto e = get_entry<Rational>(map_name, 4);
    if (!e.density) throw Error(Err::unknown_entry, map_name + " has no catalog density");
    return *e.density;
  }
  if (name == "lebesgue") return Density::constant(1);
  if (name == "gauss") return *get_entry<Rational>("gauss", 4).density;
  if (name == "theta") return *get_entry<Rational>("farey", 4).density;
  if (name == "chan") return *get_entry<Rational>("chan_tau2", 4).density;
  throw Error(Err::unknown_entry, "unknown density '" + name + "'");
}

TestFn test_fn_by_name(const std::string& name) {
  for (const auto& fn : standard_test_functions())
    if (fn.name() == name) return fn;
  if (name == "one" || name.empty()) return TestFn{TestFn::Kind::one};
  throw Error(Err::unknown_entry, "unknown test function '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interval dynamics, jump transformations, and isometry representations"};
  app.require_subcommand(1);

  int default_grid = env_int("INTDYN_GRID", 4096);
  int default_trunc = env_int("INTDYN_TRUNC", 64);

  // --- catalog ---------------------------------------------------------
  auto* cat = app.add_subcommand("catalog", "List or export the built-in constructions");
  auto* cat_list = cat->add_subcommand("list", "Print all entry names");
  auto* cat_show = cat->add_subcommand("show", "Export one entry");
  std::string show_name, show_emit = "json", show_out;
  int show_samples = 1024;
  cat_show->add_option("name", show_name, "Entry name")->required();
  cat_show->add_option("--emit", show_emit, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  cat_show->add_option("--samples", show_samples, "CSV sample count");
  cat_show->add_option("--out", show_out, "Output path (default stdout)");
  cat->require_subcommand(1);

  // --- jump ------------------------------------------------------------
  auto* jump = app.add_subcommand("jump", "First entry times and jump values");
  std::string jump_map, jump_set, jump_x, jump_backend = "exact";
  long jump_cap = 100000;
  jump->add_option("--map", jump_map, "Catalog name or JSON path");
  jump->add_option("--set", jump_set, "Target set \"lo,hi\" (default: range of the first branch)");
  jump->add_option("--x", jump_x, "Sample point as p/q");
  jump->add_option("--backend", jump_backend, "exact|float")
      ->check(CLI::IsMember({"exact", "float"}));
  jump->add_option("--cap", jump_cap, "Entry-time cap");
  auto* jump_verify = jump->add_subcommand("verify", "Compare against a closed-form map");
  jump_verify->fallthrough();  // --map etc. belong to the parent command
  std::string jv_against, jv_out;
  long jv_samples = 10000;
  double jv_tol = 1e-9;
  std::uint64_t jv_seed = 20250809;
  jump_verify->add_option("--against", jv_against, "Closed-form map (default: catalog partner)");
  jump_verify->add_option("--samples", jv_samples, "Sample count");
  jump_verify->add_option("--tol", jv_tol, "Float-backend tolerance");
  jump_verify->add_option("--seed", jv_seed, "Sample seed");
  jump_verify->add_option("--out", jv_out, "Output path");

  // --- cuntz -----------------------------------------------------------
  auto* cuntz = app.add_subcommand("cuntz", "Isometry relation checks");
  auto* cz_check = cuntz->add_subcommand("check", "Cuntz relations for one system");
  std::string cz_map, cz_out, cz_emit, cz_fn = "1";
  int cz_depth = default_trunc, cz_grid = default_grid, cz_gen = 1;
  cz_check->add_option("--map", cz_map, "Catalog name")->required();
  cz_check->add_option("--depth", cz_depth, "Partial-sum depth");
  cz_check->add_option("--grid", cz_grid, "Quadrature grid size");
  cz_check->add_option("--emit", cz_emit, "csv: dump (x, (S_i phi)(x)) samples");
  cz_check->add_option("--gen", cz_gen, "Generator index for --emit csv");
  cz_check->add_option("--fn", cz_fn, "Test function for --emit csv");
  cz_check->add_option("--out", cz_out, "Output path");
  auto* cz_embed = cuntz->add_subcommand("embed", "Embedding words vs induced family");
  std::string ce_map, ce_out;
  int ce_nmax = 20;
  cz_embed->add_option("--map", ce_map, "Catalog name (arity-2 base)")->required();
  cz_embed->add_option("--nmax", ce_nmax, "Word depth");
  cz_embed->add_option("--out", ce_out, "Output path");
  cuntz->require_subcommand(1);

  // --- measure ---------------------------------------------------------
  auto* measure = app.add_subcommand("measure", "Invariant measures and oracles");
  auto* m_inv = measure->add_subcommand("invariance", "Transfer-operator fixed-point residual");
  std::string mi_map, mi_density = "auto", mi_out;
  int mi_trunc = default_trunc;
  long mi_samples = 25;
  m_inv->add_option("--map", mi_map, "Catalog name")->required();
  m_inv->add_option("--density", mi_density, "auto|lebesgue|gauss|theta|chan");
  m_inv->add_option("--trunc", mi_trunc, "Transfer truncation");
  m_inv->add_option("--samples", mi_samples, "Sample count");
  m_inv->add_option("--out", mi_out, "Output path");
  auto* m_tr = measure->add_subcommand("transport", "Induced density in closed form");
  std::string mt_map, mt_out;
  m_tr->add_option("--map", mt_map, "Catalog name (arity-2 base)")->required();
  m_tr->add_option("--out", mt_out, "Output path");
  auto* m_ulam = measure->add_subcommand("ulam", "Ulam-matrix invariant density");
  std::string mu_map, mu_emit, mu_out;
  int mu_cells = 4096;
  m_ulam->add_option("--map", mu_map, "Catalog name or JSON path")->required();
  m_ulam->add_option("--cells", mu_cells, "Grid cells");
  m_ulam->add_option("--emit", mu_emit, "csv: dump x,value rows");
  m_ulam->add_option("--out", mu_out, "Output path");
  auto* m_orbit = measure->add_subcommand("orbit", "Birkhoff occupation histogram");
  std::string mo_map, mo_emit, mo_out;
  long mo_steps = 1000000;
  int mo_bins = 64;
  std::uint64_t mo_seed = 20250809;
  m_orbit->add_option("--map", mo_map, "Catalog name")->required();
  m_orbit->add_option("--steps", mo_steps, "Orbit length");
  m_orbit->add_option("--seed", mo_seed, "Starting-point seed");
  m_orbit->add_option("--bins", mo_bins, "Histogram bins");
  m_orbit->add_option("--emit", mo_emit, "csv: dump x,value rows");
  m_orbit->add_option("--out", mo_out, "Output path");
  measure->require_subcommand(1);

  // --- verify-all ------------------------------------------------------
  auto* verify = app.add_subcommand("verify-all", "Run the full identity suite");
  VerifyOptions vopt;
  vopt.grid_M = default_grid;
  vopt.truncation = default_trunc;
  std::string verify_out;
  verify->add_option("--samples", vopt.exact_samples, "Rational samples per jump check");
  verify->add_option("--float-samples", vopt.float_samples, "Float samples per jump check");
  verify->add_option("--nmax", vopt.embed_nmax, "Embedding depth");
  verify->add_option("--grid", vopt.grid_M, "Quadrature grid size");
  verify->add_option("--trunc", vopt.truncation, "Family truncation");
  verify->add_option("--seed", vopt.seed, "Sample seed");
  verify->add_option("--jump-tol", vopt.float_jump_tol, "Float-backend jump tolerance");
  verify->add_option("--induced-tol", vopt.induced_tol, "Induced-measure consistency tolerance");
  verify->add_option("--cap", vopt.entry_cap, "Jump orbit cap");
  verify->add_option("--out", verify_out, "Write the JSON report here");

  // --- figure ----------------------------------------------------------
  auto* figure = app.add_subcommand("figure", "Emit (x, y) samples of a catalog map");
  std::string fig_name, fig_out;
  int fig_samples = 1024;
  figure->add_option("name", fig_name, "Catalog map")->required();
  figure->add_option("--samples", fig_samples, "Sample count");
  figure->add_option("--out", fig_out, "Output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (*cat_list) {
      for (const auto& n : list_entries()) std::cout << n << "\n";
      return 0;
    }
    if (*cat_show) {
      if (show_emit == "json") {
        write_text(show_out, entry_json(get_entry<Rational>(show_name)).dump(2));
      } else {
        write_text(show_out, csv_of(figure_samples(show_name, show_samples), "x,y"));
      }
      return 0;
    }
    if (*jump_verify) {
      VerifyOptions opt;
      opt.exact_samples = jv_samples;
      opt.float_samples = jv_samples;
      opt.seed = jv_seed;
      opt.entry_cap = jump_cap;
      opt.float_jump_tol = jv_tol;
      std::string base = jump_map;
      if (base.empty()) throw Error(Err::unknown_entry, "jump verify needs --map <base>");
      if (!jv_against.empty() && jv_against != (base == "farey"     ? "gauss"
                                                : base == "tent"    ? "tent_jump"
                                                                    : "chan_tau2")) {
        // Custom closed form: run the exact comparison directly.
        auto e = get_entry<Rational>(base);
        auto closed = load_map<Rational>(jv_against);
        JumpSpec<Rational> spec(e.map, e.system.branch(1).range(), jump_cap);
        auto rep = check_jump_equals(spec, closed, prime_fraction_samples(jv_samples, jv_seed));
        Json j{{"samples", rep.samples},
               {"excluded", rep.excluded},
               {"max_deviation", rep.max_deviation},
               {"exact_zero", rep.exact_zero}};
        write_text(jv_out, j.dump(2));
        return rep.exact_zero && rep.excluded == 0 ? 0 : 1;
      }
      SuiteReport suite;
      suite.add(check_pair_jump_exact(base, opt));
      suite.add(check_pair_jump_float(base, opt));
      write_text(jv_out, suite.to_json().dump(2));
      return suite.all_pass ? 0 : 1;
    }
    if (*jump) {
      if (jump_map.empty() || jump_x.empty())
        throw Error(Err::unknown_entry, "jump needs --map and --x (or the verify subcommand)");
      bool in_catalog = false;
      for (const auto& n : list_entries()) in_catalog |= n == jump_map;
      if (jump_set.empty() && !in_catalog)
        throw Error(Err::parse_error, "custom map descriptors need an explicit --set \"lo,hi\"");
      Rational x = parse_rational(jump_x);
      Json j;
      j["x"] = rational_str(x);
      j["backend"] = jump_backend;
      if (jump_backend == "exact") {
        auto T = load_map<Rational>(jump_map);
        Interval<Rational> A = jump_set.empty()
                                   ? get_entry<Rational>(jump_map).system.branch(1).range()
                                   : parse_set(jump_set);
        JumpSpec<Rational> spec(T, A, jump_cap);
        Rational v = jump_apply(spec, x);
        j["entry_time"] = first_entry_time(spec, x);
        j["value"] = rational_str(v);
        j["value_float"] = to_double(v);
      } else {
        auto T = load_map<double>(jump_map);
        Interval<double> A =
            jump_set.empty()
                ? get_entry<double>(jump_map).system.branch(1).range()
                : Interval<double>(to_double(parse_set(jump_set).lo),
                                   to_double(parse_set(jump_set).hi));
        JumpSpec<double> spec(T, A, jump_cap);
        j["entry_time"] = first_entry_time(spec, to_double(x));
        j["value_float"] = jump_apply(spec, to_double(x));
      }
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (*cz_check) {
      auto e = get_entry<Rational>(cz_map, cz_depth);
      auto ed = get_entry<double>(cz_map, cz_depth);
      if (cz_emit == "csv") {
        GridFunction phi = GridFunction::sample(0.0, 1.0, cz_grid, [&](double x) {
          return test_fn_by_name(cz_fn).eval(x);
        });
        GridFunction out = apply_generator(ed.system, cz_gen, phi);
        std::vector<std::pair<double, double>> rows;
        for (int m = 0; m < out.size(); ++m) rows.emplace_back(out.node(m), out.values[m]);
        write_text(cz_out, csv_of(rows, "x,value"));
        return 0;
      }
      auto rep = check_cuntz_relations(e.system, ed.system, standard_test_functions(),
                                       interior_rationals(8, 20250809), cz_depth, cz_grid);
      bool pass = rep.orthonormal_exact && rep.range_projection_exact &&
                  (e.system.infinite ? rep.partial_monotone : rep.completeness_exact);
      Json j{{"pair_depth", rep.pair_depth},
             {"partial_depth", rep.partial_depth},
             {"orthonormal_exact", rep.orthonormal_exact},
             {"range_projection_exact", rep.range_projection_exact},
             {"completeness_exact", rep.completeness_exact},
             {"partial_monotone", rep.partial_monotone},
             {"max_adjointness_gap", rep.max_adjointness_gap},
             {"grid_completeness_dev", rep.grid_completeness_dev}};
      write_text(cz_out, j.dump(2));
      return pass ? 0 : 1;
    }
    if (*cz_embed) {
      VerifyOptions opt;
      opt.embed_nmax = ce_nmax;
      auto res = check_pair_embedding(ce_map, opt);
      Json j{{"name", res.name}, {"pass", res.pass}, {"details", res.details}};
      write_text(ce_out, j.dump(2));
      return res.pass ? 0 : 1;
    }
    if (*m_inv) {
      auto e = get_entry<Rational>(mi_map, mi_trunc);
      Density phi = density_by_name(mi_density, mi_map);
      auto rep = invariance_residual(e.system, phi, interior_rationals(mi_samples, 20250809));
      Json j{{"map", mi_map},
             {"density", phi.str()},
             {"samples", rep.samples},
             {"max_residual", rep.max_residual},
             {"tail_bound", rep.tail_bound},
             {"within_tail", rep.exact_zero_beyond_tail},
             {"terms", rep.terms}};
      write_text(mi_out, j.dump(2));
      return rep.exact_zero_beyond_tail ? 0 : 1;
    }
    if (*m_tr) {
      auto e = get_entry<Rational>(mt_map);
      if (!e.density) throw Error(Err::unknown_entry, mt_map + " has no catalog density");
      Density psi = transport_density(e.system, *e.density);
      Json j{{"map", mt_map},
             {"source", e.density->str()},
             {"transported", psi.str()},
             {"note", "up to scalar multiple"},
             {"integrable", psi.integrable},
             {"density", density_json(psi)}};
      write_text(mt_out, j.dump(2));
      return 0;
    }
    if (*m_ulam) {
      auto T = load_map<double>(mu_map, default_trunc);
      UlamOptions uopt;
      uopt.cells = mu_cells;
      auto res = ulam_density(T, uopt);
      if (mu_emit == "csv") {
        std::vector<std::pair<double, double>> rows;
        for (int m = 0; m < res.density.size(); ++m)
          rows.emplace_back(res.density.node(m), res.density.values[m]);
        write_text(mu_out, csv_of(rows, "x,value"));
        return 0;
      }
      Json j{{"map", mu_map},
             {"cells", mu_cells},
             {"iterations", res.iterations},
             {"step_residual", res.step_residual},
             {"coverage_defect", res.coverage_defect},
             {"mass", res.density.h() * res.density.values.sum()}};
      write_text(mu_out, j.dump(2));
      return 0;
    }
    if (*m_orbit) {
      GridFunction hist = [&] {
        auto Tf = load_map<double>(mo_map, default_trunc);
        if (all_pieces_affine(Tf)) {
          auto Tx = load_map<Rational>(mo_map, default_trunc);
          return birkhoff_histogram(Tx, birkhoff_start(mo_seed), mo_steps, mo_bins);
        }
        std::mt19937_64 rng(mo_seed);
        std::uniform_real_distribution<double> dist(1e-9, 1.0);
        return birkhoff_histogram(Tf, dist(rng), mo_steps, mo_bins);
      }();
      if (mo_emit == "csv") {
        std::vector<std::pair<double, double>> rows;
        for (int m = 0; m < hist.size(); ++m) rows.emplace_back(hist.node(m), hist.values[m]);
        write_text(mo_out, csv_of(rows, "x,value"));
        return 0;
      }
      Json j{{"map", mo_map},
             {"steps", mo_steps},
             {"bins", mo_bins},
             {"seed", mo_seed},
             {"mass", hist.h() * hist.values.sum()}};
      write_text(mo_out, j.dump(2));
      return 0;
    }
    if (*verify) {
      SuiteReport suite = run_verify_all(vopt);
      for (const auto& c : suite.checks)
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "\n";
      if (!verify_out.empty()) write_text(verify_out, suite.to_json().dump(2));
      if (!suite.all_pass) {
        std::cout << "first failing check: " << suite.first_failure() << "\n";
        return 1;
      }
      std::cout << "all checks passed\n";
      return 0;
    }
    if (*figure) {
      write_text(fig_out, csv_of(figure_samples(fig_name, fig_samples), "x,y"));
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == Err::unknown_entry || e.kind() == Err::parse_error ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
