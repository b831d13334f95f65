#include <catch2/catch_amalgamated.hpp>

#include "immlab/imm.hpp"
#include "immlab/restriction.hpp"
#include "immlab/serialize.hpp"
#include "immlab/transform.hpp"

#include "helpers.hpp"

using namespace immlab;

TEST_CASE("sampled restrictions satisfy the structural invariants") {
  SplitMix64 rng(12345);
  for (int it = 0; it < 10000; ++it) {
    int d = 1 + static_cast<int>(rng.below(16));
    RestrictionRho rho = sample_restriction(d, rng);
    REQUIRE(rho.d == d);
    REQUIRE(static_cast<int>(rho.pi.size()) == d);
    REQUIRE(static_cast<int>(rho.a.size()) == d);
    int n_marked = static_cast<int>(rho.marked.size());
    REQUIRE(rho.y_count == (n_marked + 1) / 2);
    REQUIRE(rho.z_count == n_marked / 2);
    REQUIRE(rho.m == rho.z_count);
    for (int i = 1; i <= d; ++i)
      REQUIRE(rho.b[i - 1] == (rho.pi_at(i - 1) != rho.pi_at(i) ? 1 : 0));

    // each y/z variable is hit exactly once, and only on marked path edges
    std::map<std::pair<int, int>, int> hits;
    for (int i = 1; i <= d; ++i)
      for (int u = 1; u <= 2; ++u)
        for (int v = 1; v <= 2; ++v) {
          Target t = rho.apply(xvar(i, u, v));
          if (t.kind == TargetKind::YVar || t.kind == TargetKind::ZVar) {
            ++hits[{static_cast<int>(t.kind), t.index}];
            // variables live on the path and only in marked layers
            REQUIRE(u == rho.pi_at(i - 1));
            REQUIRE(v == rho.pi_at(i));
            REQUIRE(rho.a[i - 1] == 1);
          }
        }
    REQUIRE(static_cast<int>(hits.size()) == rho.y_count + rho.z_count);
    for (const auto& [t, c] : hits) REQUIRE(c == 1);
    // every unmarked layer keeps exactly two 1-entries (I or E), every
    // marked layer keeps one 1 plus its fresh variable
    for (int i = 1; i <= d; ++i) {
      int ones = 0;
      for (int u = 1; u <= 2; ++u)
        for (int v = 1; v <= 2; ++v)
          if (rho.apply(xvar(i, u, v)).kind == TargetKind::One) ++ones;
      REQUIRE(ones == (rho.a[i - 1] ? 1 : 2));
    }
  }
}

TEST_CASE("worked example restriction") {
  // pi = (2,2,1,1,1,2,2,1,1), a marks the odd layers of a 9-layer instance
  std::vector<int> pi = {2, 2, 1, 1, 1, 2, 2, 1, 1};
  std::vector<int> a = {1, 0, 1, 0, 1, 0, 1, 0, 1};
  RestrictionRho rho = restriction_from(pi, a);
  REQUIRE(rho.marked == std::vector<int>{1, 3, 5, 7, 9});
  REQUIRE(rho.y_count == 3);
  REQUIRE(rho.z_count == 2);
  REQUIRE(rho.m == 2);

  // first marked layer: path edge (1,2) takes y_1, its row-mate becomes 1
  REQUIRE(rho.apply(xvar(1, 1, 2)).kind == TargetKind::YVar);
  REQUIRE(rho.apply(xvar(1, 1, 2)).index == 1);
  REQUIRE(rho.apply(xvar(1, 1, 1)).kind == TargetKind::One);
  // second marked layer (layer 3): edge (2,1) takes z_1, column-mate is 1
  REQUIRE(rho.apply(xvar(3, 2, 1)).kind == TargetKind::ZVar);
  REQUIRE(rho.apply(xvar(3, 2, 1)).index == 1);
  REQUIRE(rho.apply(xvar(3, 1, 1)).kind == TargetKind::One);
  // layer 2 is unmarked with pi(1) = pi(2): identity matrix
  REQUIRE(rho.apply(xvar(2, 1, 1)).kind == TargetKind::One);
  REQUIRE(rho.apply(xvar(2, 2, 2)).kind == TargetKind::One);
  REQUIRE(rho.apply(xvar(2, 1, 2)).kind == TargetKind::Zero);

  Polynomial restricted = apply_to_polynomial(imm_polynomial(9), rho);
  REQUIRE(restricted == imm_restricted_closed_form(rho));
  Polynomial expect =
      poly_mul(poly_mul(parse_poly("1 + y[1]*z[1]"), parse_poly("1 + y[2]*z[2]"),
                        true),
               parse_poly("1 + y[3]"), true);
  REQUIRE(restricted == expect);
}

TEST_CASE("restricting the polynomial matches the closed form") {
  SplitMix64 rng(5150);
  for (int it = 0; it < 1000; ++it) {
    int d = 1 + static_cast<int>(rng.below(14));
    RestrictionRho rho = sample_restriction(d, rng);
    Polynomial got = apply_to_polynomial(imm_polynomial(d), rho);
    REQUIRE(got == imm_restricted_closed_form(rho));
  }
  // all-zero a: the whole product collapses to the constant 1
  for (int d : {1, 4, 9}) {
    SplitMix64 r2(d);
    std::vector<int> pi;
    for (int i = 0; i < d; ++i) pi.push_back(1 + r2.bit());
    RestrictionRho rho = restriction_from(pi, std::vector<int>(d, 0));
    REQUIRE(apply_to_polynomial(imm_polynomial(d), rho) ==
            Polynomial::constant(1));
  }
}

TEST_CASE("restriction is a ring homomorphism on disjoint-layer inputs") {
  SplitMix64 rng(9001);
  int d = 8;
  std::vector<VarId> odd_layers, even_layers;
  for (int i = 1; i <= d; ++i)
    for (int u = 1; u <= 2; ++u)
      for (int v = 1; v <= 2; ++v)
        (i % 2 ? odd_layers : even_layers).push_back(xvar(i, u, v));
  // keep the factors small
  odd_layers.resize(6);
  even_layers.resize(6);
  for (int it = 0; it < 200; ++it) {
    RestrictionRho rho = sample_restriction(d, rng);
    Polynomial p = testutil::random_test_poly(odd_layers, rng);
    Polynomial q = testutil::random_test_poly(even_layers, rng);
    REQUIRE(apply_to_polynomial(poly_add(p, q), rho) ==
            poly_add(apply_to_polynomial(p, rho),
                     apply_to_polynomial(q, rho)));
    // note: images may share y/z variables, so multiply non-strictly
    REQUIRE(apply_to_polynomial(poly_mul(p, q), rho) ==
            poly_mul(apply_to_polynomial(p, rho),
                     apply_to_polynomial(q, rho), false));
  }
}

TEST_CASE("restricting a formula commutes with evaluation") {
  SplitMix64 rng(1226);
  for (int it = 0; it < 200; ++it) {
    int d = 2 + static_cast<int>(rng.below(7));
    VarSet xs = full_x_set(d);
    std::vector<VarId> vars(xs.begin(), xs.end());
    vars.resize(std::min<std::size_t>(vars.size(), 8));
    Formula f = testutil::random_ml_formula(vars, rng, 3);
    RestrictionRho rho = sample_restriction(d, rng);
    Formula rf = apply_to_formula(f, rho);
    REQUIRE(evaluate_to_polynomial(rf) ==
            apply_to_polynomial(evaluate_to_polynomial(f), rho));
  }
}

TEST_CASE("restriction JSON round trips") {
  SplitMix64 rng(33);
  for (int it = 0; it < 100; ++it) {
    int d = 1 + static_cast<int>(rng.below(12));
    RestrictionRho rho = sample_restriction(d, rng);
    nlohmann::json j = rho_to_json(rho);
    RestrictionRho back = rho_from_json(j);
    REQUIRE(back.d == rho.d);
    REQUIRE(back.pi == rho.pi);
    REQUIRE(back.a == rho.a);
    for (int i = 0; i < 4 * d; ++i) {
      VarId v{Ns::X, static_cast<std::uint32_t>(i)};
      Target s = rho.apply(v), t = back.apply(v);
      REQUIRE(s.kind == t.kind);
      REQUIRE(s.index == t.index);
    }
  }
}

TEST_CASE("restriction_from validates its input") {
  REQUIRE_THROWS_AS(restriction_from({1, 2}, {1}), LengthMismatch);
  REQUIRE_THROWS_AS(restriction_from({1, 3}, {1, 1}), Error);
  REQUIRE_THROWS_AS(restriction_from({1, 2}, {1, 2}), Error);
}

TEST_CASE("path color statistics on the layer coloring") {
  std::vector<int> pi = {2, 2, 1, 1, 1, 2, 2, 1, 1};
  std::vector<int> a = {1, 0, 1, 0, 1, 0, 1, 0, 1};
  RestrictionRho rho = restriction_from(pi, a);
  PathColorStats s = path_color_stats(rho, layer_coloring(9));
  REQUIRE(static_cast<int>(s.path_colors.size()) == 9);
  for (int c = 0; c < 9; ++c) {
    REQUIRE(s.layers[c] == std::vector<int>{c + 1});
    bool marked = a[c] == 1;
    REQUIRE(s.odd_image[c] == marked);
    REQUIRE(s.imbalanced[c] == marked);
  }
  REQUIRE(s.imbalance_count == 5);

  // one color over all layers: 3 y-hits vs 2 z-hits, odd and imbalanced
  Coloring one{9, 1, std::vector<int>(36, 0)};
  PathColorStats t = path_color_stats(rho, one);
  REQUIRE(t.y_hits[0] == 3);
  REQUIRE(t.z_hits[0] == 2);
  REQUIRE(t.odd_image[0]);
  REQUIRE(t.imbalance_count == 1);
}

TEST_CASE("touched variable count follows the mapping") {
  std::vector<int> pi = {2, 2, 1, 1, 1, 2, 2, 1, 1};
  std::vector<int> a = {1, 0, 1, 0, 1, 0, 1, 0, 1};
  RestrictionRho rho = restriction_from(pi, a);
  REQUIRE(touched_variable_count(rho, full_x_set(9)) == 5);
  REQUIRE(touched_variable_count(rho, VarSet{xvar(1, 1, 2)}) == 1);
  REQUIRE(touched_variable_count(rho, VarSet{xvar(2, 1, 1)}) == 0);
}
