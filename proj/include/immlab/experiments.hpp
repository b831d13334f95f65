#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "immlab/decomp.hpp"
#include "immlab/generators.hpp"
#include "immlab/imm.hpp"
#include "immlab/rank.hpp"
#include "immlab/restriction.hpp"
#include "immlab/transform.hpp"

namespace immlab {

using json = nlohmann::json;

// Cap on per-trial records embedded in a report; aggregates always cover all
// trials.
inline constexpr int kMaxTrialRecords = 200;

namespace detail {

// Frequency check against an exact per-sample probability, 3-sigma band.
inline json stat_check(const std::string& name, long long hits, long long n,
                       double expected) {
  double estimate = n > 0 ? static_cast<double>(hits) / n : 0.0;
  double sigma = n > 0 ? std::sqrt(expected * (1.0 - expected) / n) : 0.0;
  bool pass = n == 0 || std::abs(estimate - expected) <= 3.0 * sigma;
  return {{"name", name},       {"hits", hits},   {"n", n},
          {"estimate", estimate}, {"expected", expected},
          {"sigma", sigma},     {"pass", pass}};
}

inline json hard_check(const std::string& name, long long failures,
                       long long n) {
  return {{"name", name}, {"failures", failures}, {"n", n},
          {"pass", failures == 0}};
}

inline bool all_pass(const json& checks) {
  for (const json& c : checks)
    if (!c.at("pass").get<bool>()) return false;
  return true;
}

// rank(M(term|rho)) by factor-wise restriction and rank multiplicativity
// (factors own disjoint variable sets, and rho is injective into Y u Z).
inline long long restricted_product_rank(const TProductTerm& term,
                                         const RestrictionRho& rho) {
  long long r = 1;
  for (const Factor& f : term.factors) {
    Polynomial g = apply_to_polynomial(f.poly, rho);
    if (g.is_zero()) return 0;
    r *= rank(g);
  }
  return r;
}

inline long long restricted_simple_rank(const RSimpleTerm& term,
                                        const RestrictionRho& rho) {
  long long r = 1;
  for (const Factor& f : term.linears) {
    Polynomial g = apply_to_polynomial(f.poly, rho);
    if (g.is_zero()) return 0;
    r *= rank(g);
  }
  Polynomial g = apply_to_polynomial(term.tail.poly, rho);
  if (g.is_zero()) return 0;
  return r * rank(g);
}

// Exact integer form of rank <= 2^{e/2}: rank^2 <= 2^e.
inline bool sq_le_pow2(long long r, long long e) {
  if (e < 0) return r == 0;
  if (e >= 62) return true;  // ranks here are far below 2^31
  return static_cast<unsigned long long>(r) * r <=
         (1ULL << static_cast<unsigned>(e));
}

// Designated-edge events behind the 1/4 and 1/8 calibrations: for an odd
// layer j >= 3, Pr[(pi(j-1), pi(j)) = (1,1)] = 1/4 exactly (both coordinates
// free), and the conjunction with a_j = 1 has probability 1/8.
inline void count_designated_edges(const RestrictionRho& rho, long long* n,
                                   long long* quarter_hits,
                                   long long* eighth_hits) {
  for (int j = 3; j <= rho.d; j += 2) {
    ++*n;
    bool on_edge = rho.pi_at(j - 1) == 1 && rho.pi_at(j) == 1;
    if (on_edge) ++*quarter_hits;
    if (on_edge && rho.a[j - 1] == 1) ++*eighth_hits;
  }
}

}  // namespace detail

// Every trial: sample rho, restrict IMM_d, assert rank(M(IMM_d|rho)) = 2^m.
inline json exp_full_rank(int d, int trials, std::uint64_t seed,
                          std::uint64_t prime = kDefaultPrime) {
  Polynomial imm = imm_polynomial(d, prime);
  long long failures = 0;
  json records = json::array();
  for (int k = 0; k < trials; ++k) {
    std::uint64_t sub = trial_seed(seed, k);
    SplitMix64 rng(sub);
    RestrictionRho rho = sample_restriction(d, rng);
    Polynomial restricted = apply_to_polynomial(imm, rho);
    int r = rank(restricted);
    bool ok = r == (1LL << rho.m);
    if (!ok) ++failures;
    if (k < kMaxTrialRecords)
      records.push_back({{"trial", k}, {"subseed", sub}, {"m", rho.m},
                         {"rank", r}, {"ok", ok}});
  }
  json checks = json::array();
  checks.push_back(detail::hard_check("rank_equals_2^m", failures, trials));
  return {{"schema", 1},
          {"name", "full_rank"},
          {"config", {{"d", d}, {"trials", trials}, {"seed", seed},
                      {"prime", prime}}},
          {"checks", checks},
          {"trials", records},
          {"pass", detail::all_pass(checks)}};
}

// Random t-product terms under random restrictions: the imbalance rank bound
// is asserted on every trial; the odd-image (parity) frequency is checked
// against its exact value 1/2; the looser imbalance frequency is reported.
inline json exp_product_rank(int d, int t, int trials, std::uint64_t seed,
                             double density = 1.0,
                             std::uint64_t prime = kDefaultPrime) {
  GeneratorSpec spec;
  spec.d = d;
  spec.parts = t;
  spec.density = density;
  spec.modulus = prime;
  long long bound_failures = 0, parity_failures = 0;
  long long oncolor_n = 0, odd_hits = 0, imbalance_hits = 0;
  std::map<int, long long> ell_histogram;
  json records = json::array();
  for (int k = 0; k < trials; ++k) {
    std::uint64_t sub = trial_seed(seed, k);
    SplitMix64 rng(sub);
    TProductTerm term = gen_t_product(spec, rng);
    RestrictionRho rho = sample_restriction(d, rng);
    std::vector<VarSet> classes;
    for (const Factor& f : term.factors) classes.push_back(f.vars);
    Coloring chi = coloring_from_partition(d, classes);
    PathColorStats stats = path_color_stats(rho, chi);
    long long r = detail::restricted_product_rank(term, rho);
    int ell = stats.imbalance_count;
    bool bound_ok =
        detail::sq_le_pow2(r, rho.y_count + rho.z_count - ell);
    if (!bound_ok) ++bound_failures;
    for (int c : stats.path_colors) {
      ++oncolor_n;
      if (stats.odd_image[c]) {
        ++odd_hits;
        if (!stats.imbalanced[c]) ++parity_failures;  // odd => imbalanced
      }
      if (stats.imbalanced[c]) ++imbalance_hits;
    }
    ++ell_histogram[ell];
    if (k < kMaxTrialRecords)
      records.push_back({{"trial", k}, {"subseed", sub}, {"ell", ell},
                         {"rank", r}, {"m", rho.m}, {"bound_ok", bound_ok}});
  }
  json checks = json::array();
  checks.push_back(
      detail::hard_check("rank^2 <= 2^(|Y|+|Z|-ell)", bound_failures, trials));
  checks.push_back(
      detail::hard_check("odd_image_implies_imbalance", parity_failures,
                         oncolor_n));
  checks.push_back(
      detail::stat_check("odd_image_frequency_1/2", odd_hits, oncolor_n, 0.5));
  json ell_hist = json::object();
  for (auto [e, c] : ell_histogram) ell_hist[std::to_string(e)] = c;
  return {{"schema", 1},
          {"name", "product_rank"},
          {"config", {{"d", d}, {"t", t}, {"trials", trials}, {"seed", seed},
                      {"density", density}, {"prime", prime}}},
          {"aggregates",
           {{"ell_histogram", ell_hist},
            {"imbalance_frequency",
             oncolor_n ? static_cast<double>(imbalance_hits) / oncolor_n : 0.0}}},
          {"checks", checks},
          {"trials", records},
          {"pass", detail::all_pass(checks)}};
}

// Random simple terms under random restrictions: the touched-variable rank
// bound is asserted on every trial; the contact-edge rate is checked against
// its exact value 1/8.
inline json exp_simple_rank(int d, int r, int trials, std::uint64_t seed,
                            int threshold, double density = 1.0,
                            std::uint64_t prime = kDefaultPrime) {
  GeneratorSpec spec;
  spec.d = d;
  spec.parts = r;
  spec.density = density;
  spec.support_threshold = threshold;
  spec.modulus = prime;
  long long bound_failures = 0;
  long long edge_n = 0, quarter_hits = 0, eighth_hits = 0;
  long long u_le_4r = 0;
  std::map<int, long long> u_histogram;
  json records = json::array();
  for (int k = 0; k < trials; ++k) {
    std::uint64_t sub = trial_seed(seed, k);
    SplitMix64 rng(sub);
    RSimpleTerm term = gen_r_simple(spec, rng);
    RestrictionRho rho = sample_restriction(d, rng);
    VarSet u;
    for (const Factor& f : term.linears) u.insert(f.vars.begin(), f.vars.end());
    int u_rho = touched_variable_count(rho, u);
    long long rr = detail::restricted_simple_rank(term, rho);
    bool bound_ok = detail::sq_le_pow2(
        rr, 2LL * term.r_prime() + rho.y_count + rho.z_count - u_rho);
    if (!bound_ok) ++bound_failures;
    detail::count_designated_edges(rho, &edge_n, &quarter_hits, &eighth_hits);
    if (u_rho <= 4 * r) ++u_le_4r;
    ++u_histogram[u_rho];
    if (k < kMaxTrialRecords)
      records.push_back({{"trial", k}, {"subseed", sub}, {"u_rho", u_rho},
                         {"rank", rr}, {"bound_ok", bound_ok}});
  }
  json checks = json::array();
  checks.push_back(detail::hard_check("rank^2 <= 2^(2r'+|Y|+|Z|-|U|rho|)",
                                      bound_failures, trials));
  checks.push_back(detail::stat_check("contact_edge_rate_1/8", eighth_hits,
                                      edge_n, 0.125));
  json u_hist = json::object();
  for (auto [e, c] : u_histogram) u_hist[std::to_string(e)] = c;
  return {{"schema", 1},
          {"name", "simple_rank"},
          {"config", {{"d", d}, {"r", r}, {"trials", trials}, {"seed", seed},
                      {"threshold", threshold}, {"density", density},
                      {"prime", prime}}},
          {"aggregates",
           {{"u_histogram", u_hist},
            {"frac_u_le_4r", trials ? static_cast<double>(u_le_4r) / trials
                                    : 0.0}}},
          {"checks", checks},
          {"trials", records},
          {"pass", detail::all_pass(checks)}};
}

// Path/coloring calibrations: odd-image frequency (exactly 1/2 per on-path
// color), designated-edge rate (1/4), contact-edge rate (1/8).
// coloring_spec: "layer" (one color per layer) or "random:t".
inline json exp_color_paths(int d, const std::string& coloring_spec,
                            int trials, std::uint64_t seed) {
  Coloring chi;
  if (coloring_spec == "layer") {
    chi = layer_coloring(d);
  } else if (coloring_spec.rfind("random:", 0) == 0) {
    int t = std::stoi(coloring_spec.substr(7));
    SplitMix64 setup(seed);
    auto blocks = detail::random_partition(full_x_set(d), t, setup);
    std::vector<VarSet> classes;
    for (auto& b : blocks) classes.emplace_back(b.begin(), b.end());
    chi = coloring_from_partition(d, classes);
  } else {
    throw Error("exp_color_paths: coloring_spec must be 'layer' or 'random:t'");
  }
  long long oncolor_n = 0, odd_hits = 0, imbalance_hits = 0;
  long long edge_n = 0, quarter_hits = 0, eighth_hits = 0;
  long long tail_hits = 0, parity_failures = 0;
  std::map<int, long long> cpi_histogram;
  json records = json::array();
  for (int k = 0; k < trials; ++k) {
    std::uint64_t sub = trial_seed(seed, k);
    SplitMix64 rng(sub);
    RestrictionRho rho = sample_restriction(d, rng);
    PathColorStats stats = path_color_stats(rho, chi);
    for (int c : stats.path_colors) {
      ++oncolor_n;
      if (stats.odd_image[c]) {
        ++odd_hits;
        if (!stats.imbalanced[c]) ++parity_failures;
      }
      if (stats.imbalanced[c]) ++imbalance_hits;
    }
    detail::count_designated_edges(rho, &edge_n, &quarter_hits, &eighth_hits);
    int cpi = static_cast<int>(stats.path_colors.size());
    ++cpi_histogram[cpi];
    if (4 * cpi <= chi.colors) ++tail_hits;
    if (k < kMaxTrialRecords)
      records.push_back({{"trial", k}, {"subseed", sub}, {"colors", cpi},
                         {"ell", stats.imbalance_count}});
  }
  json checks = json::array();
  checks.push_back(
      detail::stat_check("odd_image_frequency_1/2", odd_hits, oncolor_n, 0.5));
  checks.push_back(detail::stat_check("designated_edge_rate_1/4",
                                      quarter_hits, edge_n, 0.25));
  checks.push_back(detail::stat_check("contact_edge_rate_1/8", eighth_hits,
                                      edge_n, 0.125));
  checks.push_back(detail::hard_check("odd_image_implies_imbalance",
                                      parity_failures, oncolor_n));
  json cpi_hist = json::object();
  for (auto [e, c] : cpi_histogram) cpi_hist[std::to_string(e)] = c;
  return {{"schema", 1},
          {"name", "color_paths"},
          {"config", {{"d", d}, {"coloring", coloring_spec},
                      {"trials", trials}, {"seed", seed}}},
          {"aggregates",
           {{"colors_histogram", cpi_hist},
            {"imbalance_frequency",
             oncolor_n ? static_cast<double>(imbalance_hits) / oncolor_n : 0.0},
            {"tail_le_quarter",
             trials ? static_cast<double>(tail_hits) / trials : 0.0}}},
          {"checks", checks},
          {"trials", records},
          {"pass", detail::all_pass(checks)}};
}

// Build -> normalize -> decompose -> recombine pipeline, with the per-term
// restricted rank bounds sampled over rho_trials restrictions.
inline json exp_decompose_roundtrip(int d, int delta, int t_override,
                                    std::uint64_t seed, int rho_trials = 100,
                                    std::uint64_t prime = kDefaultPrime) {
  Formula f = build_dc_formula(d, delta, prime);
  Formula norm = normalize_to_alternating(f, delta);
  DecompParams params = default_params(d, delta);
  if (t_override > 0) {
    params.t = t_override;
    params.r = std::max(params.r, params.t);
  }
  VarSet ambient = compute_supp(norm)[norm.root()];
  Decomposition dec = decompose(norm, params, ambient);
  Polynomial expected = imm_polynomial(d, prime);
  bool sum_ok = decomposition_sum(dec, prime) == expected;
  long long terms =
      static_cast<long long>(dec.products.size() + dec.simples.size());
  bool count_ok = terms <= 2LL * dec.source_size;
  long long verify_failures = 0;
  for (const TProductTerm& term : dec.products)
    if (!verify_term(term, ambient).ok) ++verify_failures;
  for (const RSimpleTerm& term : dec.simples)
    if (!verify_term(term, ambient).ok) ++verify_failures;
  long long bound_failures = 0, bound_n = 0;
  for (int k = 0; k < rho_trials; ++k) {
    SplitMix64 rng(trial_seed(seed, k));
    RestrictionRho rho = sample_restriction(d, rng);
    for (const TProductTerm& term : dec.products) {
      std::vector<VarSet> classes;
      for (const Factor& fac : term.factors) classes.push_back(fac.vars);
      Coloring chi = coloring_from_partition(d, classes);
      PathColorStats stats = path_color_stats(rho, chi);
      long long r = detail::restricted_product_rank(term, rho);
      ++bound_n;
      if (!detail::sq_le_pow2(
              r, rho.y_count + rho.z_count - stats.imbalance_count))
        ++bound_failures;
    }
    for (const RSimpleTerm& term : dec.simples) {
      VarSet u;
      for (const Factor& fac : term.linears)
        u.insert(fac.vars.begin(), fac.vars.end());
      int u_rho = touched_variable_count(rho, u);
      long long r = detail::restricted_simple_rank(term, rho);
      ++bound_n;
      if (!detail::sq_le_pow2(r, 2LL * term.r_prime() + rho.y_count +
                                     rho.z_count - u_rho))
        ++bound_failures;
    }
  }
  json checks = json::array();
  checks.push_back(detail::hard_check("terms_sum_to_imm", sum_ok ? 0 : 1, 1));
  checks.push_back(
      detail::hard_check("term_count_le_2s", count_ok ? 0 : 1, 1));
  checks.push_back(detail::hard_check("verify_term", verify_failures, terms));
  checks.push_back(detail::hard_check("restricted_rank_bounds",
                                      bound_failures, bound_n));
  return {{"schema", 1},
          {"name", "decompose_roundtrip"},
          {"config", {{"d", d}, {"delta", delta}, {"t", params.t},
                      {"r", params.r}, {"seed", seed},
                      {"rho_trials", rho_trials}, {"prime", prime}}},
          {"aggregates",
           {{"products", dec.products.size()}, {"simples", dec.simples.size()},
            {"source_size", dec.source_size}}},
          {"checks", checks},
          {"pass", detail::all_pass(checks)}};
}

inline json exp_size_table(const std::vector<int>& d_list,
                           const std::vector<int>& delta_list) {
  std::vector<SizeRow> rows = size_table(d_list, delta_list);
  json jrows = json::array();
  for (const SizeRow& r : rows)
    jrows.push_back({{"d", r.d}, {"delta", r.delta},
                     {"formula_size", r.formula_size},
                     {"circuit_size", r.circuit_size}, {"leaves", r.leaves}});
  return {{"schema", 1},
          {"name", "size_table"},
          {"config", {{"d_list", d_list}, {"delta_list", delta_list}}},
          {"rows", jrows},
          {"pass", true}};
}

// CSV projection of a report's per-trial records (or table rows).
inline std::string report_csv(const json& report) {
  const json* rows = nullptr;
  if (report.contains("rows")) rows = &report.at("rows");
  else if (report.contains("trials")) rows = &report.at("trials");
  if (!rows || rows->empty()) return "";
  std::ostringstream os;
  std::vector<std::string> cols;
  for (auto it = rows->front().begin(); it != rows->front().end(); ++it)
    cols.push_back(it.key());
  for (std::size_t i = 0; i < cols.size(); ++i)
    os << (i ? "," : "") << cols[i];
  os << "\n";
  for (const json& row : *rows) {
    for (std::size_t i = 0; i < cols.size(); ++i)
      os << (i ? "," : "") << row.at(cols[i]).dump();
    os << "\n";
  }
  return os.str();
}

}  // namespace immlab
