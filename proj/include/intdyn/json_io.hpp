#pragma once

#include <fstream>
#include <string>

#include "intdyn/catalog.hpp"
#include "json.hpp"

namespace intdyn {

using Json = nlohmann::ordered_json;

// Rationals travel as "p/q" strings (plain integers also accepted on input).
inline Json rational_json(const Rational& r) { return rational_str(r); }

inline Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number_float()) return Rational(j.get<double>());
  throw Error(Err::parse_error, "expected a rational as \"p/q\" string or number");
}

template <class S>
Json interval_json(const Interval<S>& iv) {
  return Json::array({rational_json(Rational(iv.lo)), rational_json(Rational(iv.hi))});
}

template <class S>
Interval<S> interval_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(Err::parse_error, "interval must be [lo, hi]");
  return interval_from<S>(rational_from_json(j[0]), rational_from_json(j[1]));
}

inline Json coeffs_json(const MoebiusCoeffs& m) {
  return Json::array(
      {rational_json(m.a), rational_json(m.b), rational_json(m.c), rational_json(m.d)});
}

inline MoebiusCoeffs coeffs_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 4)
    throw Error(Err::parse_error, "moebius coefficients must be [a, b, c, d]");
  return {rational_from_json(j[0]), rational_from_json(j[1]), rational_from_json(j[2]),
          rational_from_json(j[3])};
}

inline Json tail_json(const TailBound& t) {
  Json j;
  j["kind"] = t.kind == TailBound::Kind::inv_linear ? "inv_linear" : "geometric";
  j["c"] = rational_json(t.c);
  j["r"] = rational_json(t.r);
  return j;
}

inline TailBound tail_from_json(const Json& j) {
  TailBound t;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "inv_linear")
    t.kind = TailBound::Kind::inv_linear;
  else if (kind == "geometric")
    t.kind = TailBound::Kind::geometric;
  else
    throw Error(Err::parse_error, "unknown tail kind '" + kind + "'");
  t.c = rational_from_json(j.at("c"));
  if (j.contains("r")) t.r = rational_from_json(j.at("r"));
  return t;
}

inline Json rule_json(const FamilyRule& r) {
  Json j;
  j["kind"] = r.kind == FamilyKind::harmonic ? "harmonic" : "geometric";
  j["base"] = coeffs_json(r.base);
  j[r.kind == FamilyKind::harmonic ? "step" : "gen"] = coeffs_json(r.gen);
  if (r.kind == FamilyKind::geometric) {
    j["ratio"] = rational_json(r.ratio);
    j["hi"] = rational_json(r.hi0);
    j["gen_side"] = r.gen_left ? "left" : "right";
  }
  if (r.tail) j["tail"] = tail_json(*r.tail);
  return j;
}

inline FamilyRule rule_from_json(const Json& j) {
  FamilyRule r;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "harmonic")
    r.kind = FamilyKind::harmonic;
  else if (kind == "geometric")
    r.kind = FamilyKind::geometric;
  else
    throw Error(Err::parse_error, "unknown family kind '" + kind + "'");
  r.base = coeffs_from_json(j.at("base"));
  r.gen = coeffs_from_json(j.contains("step") ? j.at("step") : j.at("gen"));
  if (j.contains("ratio")) r.ratio = rational_from_json(j.at("ratio"));
  if (j.contains("hi")) r.hi0 = rational_from_json(j.at("hi"));
  if (j.contains("gen_side")) r.gen_left = j.at("gen_side").get<std::string>() == "left";
  if (j.contains("tail")) r.tail = tail_from_json(j.at("tail"));
  return r;
}

template <class S>
Json map_json(const PiecewiseMap<S>& T) {
  Json j;
  j["ambient"] = interval_json(T.ambient);
  Json pieces = Json::array();
  for (const auto& p : T.pieces) {
    Json pj;
    pj["dom"] = interval_json(p.domain);
    pj["moebius"] = Json::array({rational_json(Rational(p.a)), rational_json(Rational(p.b)),
                                 rational_json(Rational(p.c)), rational_json(Rational(p.d))});
    pieces.push_back(pj);
  }
  j["pieces"] = pieces;
  if (T.rule) {
    j["family_rule"] = rule_json(*T.rule);
    j["truncation"] = T.truncation;
  }
  Json exc = Json::array();
  for (const auto& [x, v] : T.exceptional)
    exc.push_back(Json::array({rational_json(Rational(x)), rational_json(Rational(v))}));
  j["exceptional"] = exc;
  return j;
}

template <class S>
PiecewiseMap<S> map_from_json(const Json& j) {
  PiecewiseMap<S> T;
  T.ambient = interval_from_json<S>(j.at("ambient"));
  if (j.contains("pieces")) {
    for (const auto& pj : j.at("pieces")) {
      auto dom = interval_from_json<S>(pj.at("dom"));
      auto m = coeffs_from_json(pj.at("moebius"));
      T.pieces.push_back(moebius_from<S>(m.a, m.b, m.c, m.d, dom));
    }
  }
  if (j.contains("family_rule")) T.rule = rule_from_json(j.at("family_rule"));
  if (j.contains("truncation")) T.truncation = j.at("truncation").get<int>();
  if (j.contains("exceptional")) {
    for (const auto& ej : j.at("exceptional")) {
      T.exceptional.emplace_back(scalar_from<S>(rational_from_json(ej.at(0))),
                                 scalar_from<S>(rational_from_json(ej.at(1))));
    }
  }
  return T;
}

template <class S>
Json system_json(const BranchSystem<S>& f) {
  Json j;
  j["ambient"] = interval_json(f.ambient);
  j["arity"] = f.infinite ? Json("inf") : Json(f.arity());
  if (f.infinite && f.rule) {
    j["rule"] = rule_json(*f.rule);
    j["truncation"] = f.arity();
  } else {
    Json branches = Json::array();
    for (const auto& br : f.branches) {
      Json bj;
      bj["moebius"] = Json::array({rational_json(Rational(br.a)), rational_json(Rational(br.b)),
                                   rational_json(Rational(br.c)), rational_json(Rational(br.d))});
      branches.push_back(bj);
    }
    j["branches"] = branches;
  }
  if (f.tail) j["tail"] = tail_json(*f.tail);
  return j;
}

template <class S>
BranchSystem<S> system_from_json(const Json& j) {
  BranchSystem<S> f;
  f.ambient = interval_from_json<S>(j.at("ambient"));
  const auto& ar = j.at("arity");
  f.infinite = ar.is_string() && ar.get<std::string>() == "inf";
  if (j.contains("tail")) f.tail = tail_from_json(j.at("tail"));
  if (f.infinite && j.contains("rule")) {
    f.rule = rule_from_json(j.at("rule"));
    int K = j.contains("truncation") ? j.at("truncation").get<int>() : 64;
    return f.with_truncation(K);
  }
  if (!j.contains("branches")) throw Error(Err::parse_error, "finite system needs branches");
  for (const auto& bj : j.at("branches")) {
    auto m = coeffs_from_json(bj.at("moebius"));
    f.branches.push_back(moebius_from<S>(m.a, m.b, m.c, m.d, f.ambient));
  }
  if (!f.infinite && j.contains("arity") && ar.is_number_integer() &&
      ar.get<int>() != f.arity())
    throw Error(Err::parse_error, "arity does not match branch count");
  return f;
}

inline Json density_json(const Density& d) {
  Json j;
  j["scale"] = rational_json(d.scale);
  Json facs = Json::array();
  for (const auto& f : d.factors) {
    Json fj;
    fj["alpha"] = rational_json(f.alpha);
    fj["beta"] = rational_json(f.beta);
    fj["exp"] = f.exp;
    facs.push_back(fj);
  }
  j["factors"] = facs;
  j["integrable"] = d.integrable;
  j["normalization"] = d.normalization;
  j["norm_tag"] = d.norm_tag;
  return j;
}

inline Density density_from_json(const Json& j) {
  Density d;
  d.scale = rational_from_json(j.at("scale"));
  for (const auto& fj : j.at("factors"))
    d.factors.push_back({rational_from_json(fj.at("alpha")), rational_from_json(fj.at("beta")),
                         fj.at("exp").get<long>()});
  d.integrable = j.at("integrable").get<bool>();
  d.normalization = j.at("normalization").get<double>();
  d.norm_tag = j.at("norm_tag").get<std::string>();
  return d;
}

template <class S>
Json entry_json(const CatalogEntry<S>& e) {
  Json j;
  j["name"] = e.name;
  j["map"] = map_json(e.map);
  j["branch_system"] = system_json(e.system);
  if (e.density) j["invariant_density"] = density_json(*e.density);
  if (e.jump_partner) {
    Json p;
    p["base"] = e.jump_partner->first;
    p["target"] = interval_json(e.jump_partner->second);
    j["jump_partner"] = p;
  }
  if (e.closed_form_jump) j["closed_form_jump"] = map_json(*e.closed_form_jump);
  return j;
}

template <class S>
CatalogEntry<S> entry_from_json(const Json& j) {
  CatalogEntry<S> e;
  e.name = j.at("name").get<std::string>();
  e.map = map_from_json<S>(j.at("map"));
  e.system = system_from_json<S>(j.at("branch_system"));
  if (j.contains("invariant_density")) e.density = density_from_json(j.at("invariant_density"));
  if (j.contains("jump_partner")) {
    e.jump_partner = {{j.at("jump_partner").at("base").get<std::string>(),
                       interval_from_json<S>(j.at("jump_partner").at("target"))}};
  }
  if (j.contains("closed_form_jump"))
    e.closed_form_jump = map_from_json<S>(j.at("closed_form_jump"));
  return e;
}

/// Resolves --map arguments: a catalog name or a path to a JSON descriptor.
template <class S>
PiecewiseMap<S> load_map(const std::string& name_or_path, int truncation = 64) {
  for (const auto& n : list_entries())
    if (n == name_or_path) return get_entry<S>(name_or_path, truncation).map;
  std::ifstream in(name_or_path);
  if (!in) throw Error(Err::unknown_entry, "'" + name_or_path + "' is neither a catalog name nor a readable file");
  Json j = Json::parse(in, nullptr, true);
  return map_from_json<S>(j.contains("map") ? j.at("map") : j);
}

}  // namespace intdyn
