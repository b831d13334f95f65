#include <catch2/catch_amalgamated.hpp>

#include "immlab/generators.hpp"

using namespace immlab;

TEST_CASE("generated product terms verify and are deterministic") {
  for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
    for (int d : {2, 4, 8}) {
      for (int t : {1, 2, 5}) {
        GeneratorSpec spec;
        spec.d = d;
        spec.parts = t;
        spec.seed = seed;
        SplitMix64 rng(seed);
        TProductTerm term = gen_t_product(spec, rng);
        REQUIRE(term.t() == t);
        VerifyResult v = verify_term(term, full_x_set(d));
        INFO(v.diagnostics);
        REQUIRE(v.ok);
        // same seed, same term (factor by factor: the expanded product is
        // far too large to materialize at full density)
        SplitMix64 rng2(seed);
        TProductTerm again = gen_t_product(spec, rng2);
        REQUIRE(again.t() == term.t());
        for (int i = 0; i < term.t(); ++i) {
          REQUIRE(again.factors[i].poly == term.factors[i].poly);
          REQUIRE(again.factors[i].vars == term.factors[i].vars);
        }
        // blocks are near-equal in size
        std::size_t lo = 4 * d, hi = 0;
        for (const Factor& f : term.factors) {
          lo = std::min(lo, f.vars.size());
          hi = std::max(hi, f.vars.size());
        }
        REQUIRE(hi - lo <= 1);
      }
    }
  }
}

TEST_CASE("generated simple terms verify and respect the threshold") {
  for (std::uint64_t seed : {7ULL, 8ULL}) {
    for (int r : {1, 2, 4}) {
      GeneratorSpec spec;
      spec.d = 6;  // 24 variables
      spec.parts = r;
      spec.support_threshold = 4 * r;
      spec.seed = seed;
      SplitMix64 rng(seed);
      RSimpleTerm term = gen_r_simple(spec, rng);
      REQUIRE(term.r == r);
      REQUIRE(term.r_prime() == r);
      VerifyResult v = verify_term(term, full_x_set(6));
      INFO(v.diagnostics);
      REQUIRE(v.ok);
      std::size_t covered = 0;
      for (const Factor& f : term.linears) {
        REQUIRE(f.poly.is_affine());
        // every ascribed variable actually appears in the factor
        REQUIRE(support(f.poly) == f.vars);
        covered += f.vars.size();
      }
      REQUIRE(covered == static_cast<std::size_t>(4 * r));
    }
  }
}

TEST_CASE("generator parameter validation") {
  GeneratorSpec spec;
  spec.d = 2;  // 8 variables
  spec.parts = 9;
  SplitMix64 rng(1);
  REQUIRE_THROWS_AS(gen_t_product(spec, rng), TooManyParts);

  spec.parts = 2;
  spec.density = 0.0;
  REQUIRE_THROWS_AS(gen_t_product(spec, rng), Error);

  GeneratorSpec rs;
  rs.d = 2;
  rs.parts = 2;
  rs.support_threshold = 9;  // > |X| = 8
  REQUIRE_THROWS_AS(gen_r_simple(rs, rng), ThresholdUnsatisfiable);
  rs.support_threshold = 1;  // < r
  REQUIRE_THROWS_AS(gen_r_simple(rs, rng), ThresholdUnsatisfiable);
  rs.support_threshold = -1;  // default 400r > 8
  REQUIRE_THROWS_AS(gen_r_simple(rs, rng), ThresholdUnsatisfiable);
}

TEST_CASE("density shrinks the generated factors") {
  GeneratorSpec dense, sparse;
  dense.d = sparse.d = 4;
  dense.parts = sparse.parts = 2;
  dense.density = 1.0;
  sparse.density = 0.05;
  std::size_t dense_terms = 0, sparse_terms = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SplitMix64 r1(seed), r2(seed);
    for (const Factor& f : gen_t_product(dense, r1).factors)
      dense_terms += f.poly.terms().size();
    for (const Factor& f : gen_t_product(sparse, r2).factors)
      sparse_terms += f.poly.terms().size();
  }
  REQUIRE(sparse_terms < dense_terms);
}
