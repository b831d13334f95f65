#pragma once

#include <string>

#include <json.hpp>

#include "immlab/decomp.hpp"
#include "immlab/restriction.hpp"

namespace immlab {

inline nlohmann::json target_to_json(const Target& t) {
  switch (t.kind) {
    case TargetKind::Zero: return "0";
    case TargetKind::One: return "1";
    case TargetKind::YVar: return var_name(yvar(t.index));
    case TargetKind::ZVar: return var_name(zvar(t.index));
  }
  throw Error("bad target kind");
}

inline Target target_from_json(const nlohmann::json& j) {
  std::string s = j.get<std::string>();
  if (s == "0") return {TargetKind::Zero, 0};
  if (s == "1") return {TargetKind::One, 0};
  VarId v = parse_var(s);
  if (v.ns == Ns::Y) return {TargetKind::YVar, static_cast<int>(v.index)};
  if (v.ns == Ns::Z) return {TargetKind::ZVar, static_cast<int>(v.index)};
  throw ParseError("bad restriction target: " + s);
}

// Schema: {d, pi, a, A, mapping: [{var, target}], Y, Z, m}
inline nlohmann::json rho_to_json(const RestrictionRho& rho) {
  nlohmann::json mapping = nlohmann::json::array();
  for (std::size_t i = 0; i < rho.map.size(); ++i)
    mapping.push_back(
        {{"var", var_name(VarId{Ns::X, static_cast<std::uint32_t>(i)})},
         {"target", target_to_json(rho.map[i])}});
  nlohmann::json y = nlohmann::json::array(), z = nlohmann::json::array();
  for (int j = 1; j <= rho.y_count; ++j) y.push_back(var_name(yvar(j)));
  for (int j = 1; j <= rho.z_count; ++j) z.push_back(var_name(zvar(j)));
  return {{"d", rho.d},      {"pi", rho.pi}, {"a", rho.a},
          {"A", rho.marked}, {"mapping", mapping},
          {"Y", y},          {"Z", z},       {"m", rho.m}};
}

inline RestrictionRho rho_from_json(const nlohmann::json& j) {
  return restriction_from(j.at("pi").get<std::vector<int>>(),
                          j.at("a").get<std::vector<int>>());
}

inline nlohmann::json factor_to_json(const Factor& f) {
  nlohmann::json vars = nlohmann::json::array();
  for (const VarId& v : f.vars) vars.push_back(var_name(v));
  return {{"poly", poly_to_string(f.poly)}, {"vars", vars}};
}

// Schema: {kind, factors: [{poly, vars}], verified}
inline nlohmann::json term_to_json(const TProductTerm& term,
                                   const VarSet& ambient) {
  nlohmann::json factors = nlohmann::json::array();
  for (const Factor& f : term.factors) factors.push_back(factor_to_json(f));
  return {{"kind", "t_product"},
          {"factors", factors},
          {"verified", verify_term(term, ambient).ok}};
}

inline nlohmann::json term_to_json(const RSimpleTerm& term,
                                   const VarSet& ambient) {
  nlohmann::json factors = nlohmann::json::array();
  for (const Factor& f : term.linears) factors.push_back(factor_to_json(f));
  factors.push_back(factor_to_json(term.tail));
  return {{"kind", "r_simple"},
          {"factors", factors},
          {"r", term.r},
          {"support_threshold", term.support_threshold},
          {"verified", verify_term(term, ambient).ok}};
}

inline nlohmann::json decomposition_to_json(const Decomposition& dec,
                                            const VarSet& ambient) {
  nlohmann::json terms = nlohmann::json::array();
  for (const TProductTerm& t : dec.products)
    terms.push_back(term_to_json(t, ambient));
  for (const RSimpleTerm& t : dec.simples)
    terms.push_back(term_to_json(t, ambient));
  return {{"schema", 1},
          {"source_size", dec.source_size},
          {"terms", terms}};
}

}  // namespace immlab
