#include <catch2/catch_amalgamated.hpp>

#include "immlab/formula.hpp"
#include "immlab/transform.hpp"

#include "helpers.hpp"

using namespace immlab;

namespace {

std::vector<VarId> small_vars(int n) {
  std::vector<VarId> vs;
  VarSet all = full_x_set((n + 3) / 4 + 1);
  for (VarId v : all) {
    vs.push_back(v);
    if (static_cast<int>(vs.size()) == n) break;
  }
  return vs;
}

}  // namespace

TEST_CASE("supp, size and product depth on a hand-built formula") {
  // (x1*x2 + x3) * x4 + 5
  Formula f;
  int x1 = f.add_input(xvar(1, 1, 1));
  int x2 = f.add_input(xvar(1, 1, 2));
  int x3 = f.add_input(xvar(1, 2, 1));
  int x4 = f.add_input(xvar(1, 2, 2));
  int p1 = f.add_prod({x1, x2});
  int s1 = f.add_sum({p1, x3});
  int p2 = f.add_prod({s1, x4});
  int c = f.add_const(5);
  int root = f.add_sum({p2, c});
  f.set_root(root);

  REQUIRE(f.size() == 9);
  REQUIRE(f.is_tree());
  std::vector<VarSet> supp = compute_supp(f);
  REQUIRE(supp[root] == full_x_set(1));
  REQUIRE(supp[p1] == VarSet{xvar(1, 1, 1), xvar(1, 1, 2)});
  REQUIRE(supp[c].empty());
  REQUIRE(product_depth(f) == 2);
  REQUIRE(check_syntactic_multilinear(f).ok);
  Polynomial want = parse_poly("x[1][1][1]*x[1][1][2]*x[1][2][2] "
                               "+ x[1][2][1]*x[1][2][2] + 5");
  REQUIRE(evaluate_to_polynomial(f) == want);
}

TEST_CASE("multilinearity checker reports a witness") {
  Formula f;
  int a = f.add_input(yvar(1));
  int b = f.add_input(yvar(1));
  int p = f.add_prod({a, b});
  f.set_root(p);
  MlWitness w = check_syntactic_multilinear(f);
  REQUIRE(!w.ok);
  REQUIRE(w.gate == p);
  REQUIRE(w.shared == yvar(1));
}

TEST_CASE("ascribed variable sets partition and contain support") {
  SplitMix64 rng(555);
  for (int it = 0; it < 1000; ++it) {
    int n = 2 + static_cast<int>(rng.below(7));
    std::vector<VarId> vars = small_vars(n);
    Formula f = testutil::random_ml_formula(vars, rng, 3);
    VarSet ambient(vars.begin(), vars.end());
    std::vector<VarSet> supp = compute_supp(f);
    std::vector<VarSet> vsets = compute_vars(f, ambient);

    REQUIRE(vsets[f.root()] == ambient);
    for (int g = 0; g < f.gate_count(); ++g) {
      const Gate& gg = f.gate(g);
      if (gg.kind == GateKind::Sum) {
        // sum children inherit the parent's set
        for (int c : gg.children) REQUIRE(vsets[c] == vsets[g]);
      } else if (gg.kind == GateKind::Prod) {
        // product children partition the parent's set
        VarSet acc;
        for (int c : gg.children) {
          REQUIRE(disjoint(acc, vsets[c]));
          acc = set_union(acc, vsets[c]);
        }
        REQUIRE(acc == vsets[g]);
      }
      // Supp(g) is contained in Vars(g)
      for (VarId v : supp[g]) REQUIRE(vsets[g].count(v) == 1);
    }
  }
}

TEST_CASE("zeroing a gate splits the formula as cofactor times gate plus rest") {
  SplitMix64 rng(777);
  int done = 0;
  while (done < 500) {
    int n = 2 + static_cast<int>(rng.below(6));
    std::vector<VarId> vars = small_vars(n);
    Formula f = testutil::random_ml_formula(vars, rng, 3);
    int phi = static_cast<int>(rng.below(f.gate_count()));
    // pick a reachable gate
    std::vector<VarSet> supp = compute_supp(f);
    std::vector<int> par;
    try {
      par = f.parent_map();
    } catch (const Error&) {
      continue;
    }
    bool reachable = phi == f.root() || par[phi] != -1;
    if (!reachable) continue;

    GateDecomposition gd = zero_gate_decompose(f, phi);
    Polynomial whole = evaluate_to_polynomial(f);
    Polynomial rebuilt = poly_add(poly_mul(gd.cofactor, gd.gate_poly),
                                  evaluate_to_polynomial(gd.zeroed));
    REQUIRE(whole == rebuilt);

    // the cofactor avoids the ascribed variables of the zeroed gate
    VarSet ambient(vars.begin(), vars.end());
    std::vector<VarSet> vsets = compute_vars(f, ambient);
    REQUIRE(disjoint(support(gd.cofactor), vsets[phi]));
    ++done;
  }
}

TEST_CASE("normalization produces the exact alternating shape") {
  SplitMix64 rng(31337);
  for (int it = 0; it < 300; ++it) {
    int n = 2 + static_cast<int>(rng.below(6));
    std::vector<VarId> vars = small_vars(n);
    Formula f = testutil::random_ml_formula(vars, rng, 3);
    int delta = std::max(1, product_depth(f));
    int s = f.size();
    Formula g = normalize_to_alternating(f, delta);
    REQUIRE(alternation_shape_ok(g, delta));
    REQUIRE(evaluate_to_polynomial(g) == evaluate_to_polynomial(f));
    // size bound: (delta + 1)^2 * s
    REQUIRE(g.size() <= (delta + 1) * (delta + 1) * s);
    // idempotent: a normalized formula renormalizes to itself shape-wise
    Formula h = normalize_to_alternating(g, delta);
    REQUIRE(alternation_shape_ok(h, delta));
    REQUIRE(evaluate_to_polynomial(h) == evaluate_to_polynomial(g));
  }
}

TEST_CASE("normalization pads shallow formulas up to the requested depth") {
  Formula f;
  f.set_root(f.add_input(yvar(1)));
  for (int delta = 1; delta <= 4; ++delta) {
    Formula g = normalize_to_alternating(f, delta);
    REQUIRE(alternation_shape_ok(g, delta));
    REQUIRE(evaluate_to_polynomial(g) == Polynomial::variable(yvar(1)));
  }
  REQUIRE_THROWS_AS(normalize_to_alternating(f, -1), BadDepth);
}

TEST_CASE("normalization rejects formulas deeper than the target") {
  Formula f;
  int a = f.add_input(yvar(1));
  int b = f.add_input(zvar(1));
  int c = f.add_input(yvar(2));
  int p1 = f.add_prod({a, b});
  int s1 = f.add_sum({p1});
  int p2 = f.add_prod({s1, c});
  f.set_root(f.add_sum({p2}));
  REQUIRE(product_depth(f) == 2);
  REQUIRE_THROWS_AS(normalize_to_alternating(f, 1), DepthExceeded);
  REQUIRE(alternation_shape_ok(normalize_to_alternating(f, 2), 2));
}

TEST_CASE("pruning removes zero constants without changing the polynomial") {
  Formula f;
  int a = f.add_input(yvar(1));
  int z = f.add_const(0);
  int b = f.add_input(zvar(1));
  int p = f.add_prod({z, b});       // collapses to 0
  int s = f.add_sum({a, p, z});     // zero children drop out
  f.set_root(s);
  Formula g = prune_zeros(f);
  REQUIRE(evaluate_to_polynomial(g) == Polynomial::variable(yvar(1)));
  for (int i = 0; i < g.gate_count(); ++i) {
    const Gate& gg = g.gate(i);
    if (g.size() > 1)
      REQUIRE(!(gg.kind == GateKind::Const && gg.constant == 0));
  }
  // all-zero formula collapses to a lone zero constant
  Formula h;
  h.set_root(h.add_const(0));
  Formula hp = prune_zeros(h);
  REQUIRE(hp.size() == 1);
  REQUIRE(evaluate_to_polynomial(hp).is_zero());
}

TEST_CASE("pruning after zeroing a gate preserves the remainder polynomial") {
  SplitMix64 rng(8080);
  for (int it = 0; it < 200; ++it) {
    int n = 2 + static_cast<int>(rng.below(6));
    std::vector<VarId> vars = small_vars(n);
    Formula f = testutil::random_ml_formula(vars, rng, 3);
    int phi = static_cast<int>(rng.below(f.gate_count()));
    Formula z = replace_with_zero(f, phi);
    Formula pz = prune_zeros(z);
    REQUIRE(evaluate_to_polynomial(pz) == evaluate_to_polynomial(z));
  }
}

TEST_CASE("s-expression text round trips") {
  SplitMix64 rng(4242);
  for (int it = 0; it < 300; ++it) {
    int n = 1 + static_cast<int>(rng.below(6));
    std::vector<VarId> vars = small_vars(n);
    Formula f = testutil::random_ml_formula(vars, rng, 3);
    Formula g = parse_formula_sexp(formula_to_sexp(f));
    REQUIRE(evaluate_to_polynomial(g) == evaluate_to_polynomial(f));
    REQUIRE(formula_to_sexp(g) == formula_to_sexp(f));
  }
  REQUIRE_THROWS_AS(parse_formula_sexp("(+ y[1]"), ParseError);
  REQUIRE_THROWS_AS(parse_formula_sexp(""), ParseError);
}

TEST_CASE("subformula extraction matches gate evaluation") {
  SplitMix64 rng(616);
  for (int it = 0; it < 100; ++it) {
    std::vector<VarId> vars = small_vars(5);
    Formula f = testutil::random_ml_formula(vars, rng, 3);
    int g = static_cast<int>(rng.below(f.gate_count()));
    Formula sub = extract_subformula(f, g);
    REQUIRE(evaluate_to_polynomial(sub) == evaluate_gate(f, g));
  }
}

TEST_CASE("evaluation at a point agrees with the symbolic polynomial") {
  SplitMix64 rng(2718);
  for (int it = 0; it < 200; ++it) {
    std::vector<VarId> vars = small_vars(6);
    Formula f = testutil::random_ml_formula(vars, rng, 3);
    std::map<VarId, std::uint64_t> at;
    for (VarId v : vars) at[v] = rng.below(kDefaultPrime);
    REQUIRE(evaluate_at_point(f, at) ==
            poly_eval(evaluate_to_polynomial(f), at));
  }
}
