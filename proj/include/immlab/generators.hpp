#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "immlab/decomp.hpp"
#include "immlab/rng.hpp"
#include "immlab/var.hpp"

namespace immlab {

struct GeneratorSpec {
  int d = 4;               // number of matrix layers; X has 4d variables
  int parts = 1;           // t for products, r for simple terms
  double density = 1.0;    // per-monomial keep probability, in (0, 1]
  int support_threshold = -1;  // r-simple only; -1 = default 400r
  std::uint64_t seed = 0;
  std::uint64_t modulus = kDefaultPrime;
};

namespace detail {

// Cap on distinct monomials sampled per factor when the factor's variable
// set is too large to enumerate.
inline constexpr int kGenMonomialCap = 256;
inline constexpr int kGenEnumerateLimit = 12;  // enumerate <= 2^12 subsets

// Random multilinear polynomial over `vars`: each of the 2^|vars| monomials
// kept independently with probability `density` (enumerated when |vars| is
// small; approximated by sampling ~density*2^|vars| distinct monomials,
// capped, when large), uniform nonzero coefficients, never identically zero.
// Draw order: for the enumerated path, one uniform01 per monomial in subset-
// mask order, then one coefficient draw per kept monomial; for the sampled
// path, one mask draw + one coefficient draw per monomial.
inline Polynomial random_poly(const std::vector<VarId>& vars, double density,
                              std::uint64_t modulus, SplitMix64& rng) {
  Polynomial p(modulus);
  int n = static_cast<int>(vars.size());
  auto monomial_for = [&](std::uint64_t mask) {
    VarSet s;
    for (int b = 0; b < n; ++b)
      if (mask & (std::uint64_t{1} << b)) s.insert(vars[b]);
    return Monomial(s);
  };
  auto coeff = [&] { return 1 + rng.below(modulus - 1); };
  if (n <= kGenEnumerateLimit) {
    std::vector<std::uint64_t> kept;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask)
      if (rng.uniform01() < density) kept.push_back(mask);
    if (kept.empty()) kept.push_back(rng.below(std::uint64_t{1} << n));
    for (std::uint64_t mask : kept) p.add_term(monomial_for(mask), coeff());
    return p;
  }
  double want = density * std::pow(2.0, std::min(n, 40));
  int count = static_cast<int>(std::min<double>(kGenMonomialCap,
                                                std::max(1.0, want)));
  while (static_cast<int>(p.terms().size()) < count) {
    std::uint64_t mask = 0;
    for (int b = 0; b < n; ++b)
      mask |= static_cast<std::uint64_t>(rng.bit()) << b;
    Monomial m = monomial_for(mask);
    if (!p.terms().count(m)) p.add_term(m, coeff());
  }
  return p;
}

// Random affine (degree <= 1) polynomial over vars with every variable
// present and a random constant term.
inline Polynomial random_affine(const std::vector<VarId>& vars,
                                std::uint64_t modulus, SplitMix64& rng) {
  Polynomial p(modulus);
  for (const VarId& v : vars)
    p.add_term(Monomial(VarSet{v}), 1 + rng.below(modulus - 1));
  p.add_term(Monomial{}, rng.below(modulus));
  return p;
}

// Balanced-first random partition: shuffle, then cut into `parts` contiguous
// runs of near-equal length. Draw order: Fisher-Yates over the sorted
// variable list, one below(i+1) per position from the back.
inline std::vector<std::vector<VarId>> random_partition(const VarSet& x,
                                                        int parts,
                                                        SplitMix64& rng) {
  std::vector<VarId> pool(x.begin(), x.end());
  for (std::size_t i = pool.size(); i > 1; --i)
    std::swap(pool[i - 1], pool[rng.below(i)]);
  std::vector<std::vector<VarId>> out(parts);
  std::size_t n = pool.size(), pos = 0;
  for (int k = 0; k < parts; ++k) {
    std::size_t len = n / parts + (static_cast<std::size_t>(k) < n % parts);
    out[k].assign(pool.begin() + pos, pool.begin() + pos + len);
    pos += len;
  }
  return out;
}

}  // namespace detail

inline TProductTerm gen_t_product(const GeneratorSpec& spec, SplitMix64& rng) {
  VarSet x = full_x_set(spec.d);
  if (spec.parts < 1 || static_cast<std::size_t>(spec.parts) > x.size())
    throw TooManyParts("gen_t_product: need 1 <= t <= " +
                       std::to_string(x.size()));
  if (!(spec.density > 0.0 && spec.density <= 1.0))
    throw Error("gen_t_product: density must be in (0,1]");
  TProductTerm term;
  for (auto& block : detail::random_partition(x, spec.parts, rng))
    term.factors.push_back(
        {detail::random_poly(block, spec.density, spec.modulus, rng),
         VarSet(block.begin(), block.end())});
  return term;
}

inline RSimpleTerm gen_r_simple(const GeneratorSpec& spec, SplitMix64& rng) {
  VarSet x = full_x_set(spec.d);
  int threshold = spec.support_threshold >= 0 ? spec.support_threshold
                                              : 400 * spec.parts;
  if (spec.parts < 1) throw Error("gen_r_simple: r must be >= 1");
  if (threshold > static_cast<int>(x.size()))
    throw ThresholdUnsatisfiable("gen_r_simple: threshold " +
                                 std::to_string(threshold) + " > |X| = " +
                                 std::to_string(x.size()));
  if (threshold < spec.parts)
    throw ThresholdUnsatisfiable("gen_r_simple: threshold below r");
  RSimpleTerm term;
  term.r = spec.parts;
  term.support_threshold = threshold;
  // shuffle X; the first `threshold` variables feed the linears, the rest
  // form the tail's ascribed set
  std::vector<VarId> pool(x.begin(), x.end());
  for (std::size_t i = pool.size(); i > 1; --i)
    std::swap(pool[i - 1], pool[rng.below(i)]);
  std::vector<VarId> covered(pool.begin(), pool.begin() + threshold);
  VarSet linear_part(covered.begin(), covered.end());
  std::size_t pos = 0;
  for (int k = 0; k < spec.parts; ++k) {
    std::size_t len = covered.size() / spec.parts +
                      (static_cast<std::size_t>(k) <
                       covered.size() % static_cast<std::size_t>(spec.parts));
    std::vector<VarId> block(covered.begin() + pos,
                             covered.begin() + pos + len);
    pos += len;
    term.linears.push_back({detail::random_affine(block, spec.modulus, rng),
                            VarSet(block.begin(), block.end())});
  }
  std::vector<VarId> rest(pool.begin() + threshold, pool.end());
  term.tail = {detail::random_poly(rest, spec.density, spec.modulus, rng),
               VarSet(rest.begin(), rest.end())};
  return term;
}

}  // namespace immlab
