#pragma once

#include <functional>
#include <vector>

#include "immlab/formula.hpp"

namespace immlab {

// Merges adjacent sum-into-sum and product-into-product gates. Preserves the
// computed polynomial and syntactic multilinearity.
inline Formula flatten(const Formula& f) {
  Formula out(f.modulus());
  std::function<int(int)> build = [&](int g) -> int {
    const Gate& gg = f.gate(g);
    switch (gg.kind) {
      case GateKind::Input:
        return out.add_input(gg.var);
      case GateKind::Const:
        return out.add_const(gg.constant);
      case GateKind::Sum:
      case GateKind::Prod: {
        std::vector<int> kids;
        std::function<void(int)> collect = [&](int c) {
          if (f.gate(c).kind == gg.kind) {
            for (int cc : f.gate(c).children) collect(cc);
          } else {
            kids.push_back(build(c));
          }
        };
        for (int c : gg.children) collect(c);
        return gg.kind == GateKind::Sum ? out.add_sum(std::move(kids))
                                        : out.add_prod(std::move(kids));
      }
    }
    throw Error("bad gate kind");
  };
  out.set_root(build(f.root()));
  return out;
}

// True iff f has the (sigma-pi)^delta sigma shape: root is a sum, sum and
// product gates strictly alternate, every root-to-leaf path has exactly
// delta product gates, and the bottom gate above every leaf is a sum.
inline bool alternation_shape_ok(const Formula& f, int delta) {
  std::function<bool(int, GateKind, int)> visit = [&](int g, GateKind expect,
                                                      int prods_left) -> bool {
    const Gate& gg = f.gate(g);
    if (gg.kind == GateKind::Input || gg.kind == GateKind::Const)
      // Leaves sit directly under the bottom sum: all products consumed and
      // the expected kind here is Prod (the bottom sum already passed).
      return prods_left == 0 && expect == GateKind::Prod;
    if (gg.kind != expect) return false;
    if (gg.kind == GateKind::Prod) {
      if (prods_left == 0) return false;
      --prods_left;
    }
    GateKind next = gg.kind == GateKind::Sum ? GateKind::Prod : GateKind::Sum;
    for (int c : gg.children)
      if (!visit(c, next, prods_left)) return false;
    return true;
  };
  return visit(f.root(), GateKind::Sum, delta);
}

// Rewrites a syntactically multilinear formula of product-depth <= delta into
// (sigma-pi)^delta sigma shape computing the same polynomial. Procedure:
// flatten adjacent same-kind gates, then rebuild top-down, padding every path
// to exactly delta products with unary gates.
inline Formula normalize_to_alternating(const Formula& f, int delta) {
  if (delta < 0) throw BadDepth("delta must be >= 0");
  if (product_depth(f) > delta)
    throw DepthExceeded("product depth " + std::to_string(product_depth(f)) +
                        " exceeds delta " + std::to_string(delta));
  MlWitness w = check_syntactic_multilinear(f);
  if (!w.ok)
    throw NotSyntacticMultilinear("gate " + std::to_string(w.gate) +
                                  " shares " + var_name(w.shared));
  Formula flat = flatten(f);
  Formula out(f.modulus());

  std::function<int(int)> copy_leaf = [&](int g) -> int {
    const Gate& gg = flat.gate(g);
    return gg.kind == GateKind::Input ? out.add_input(gg.var)
                                      : out.add_const(gg.constant);
  };

  // Returns a sum gate rooting a (sigma-pi)^k sigma subtree for flat gate g;
  // g has product depth <= k.
  std::function<int(int, int)> norm_sigma = [&](int g, int k) -> int {
    const Gate& gg = flat.gate(g);
    if (k == 0) {
      // product depth 0: a leaf or a sum of leaves
      if (gg.kind == GateKind::Input || gg.kind == GateKind::Const)
        return out.add_sum({copy_leaf(g)});
      if (gg.kind != GateKind::Sum) throw DepthExceeded("product under k=0");
      std::vector<int> kids;
      for (int c : gg.children) kids.push_back(copy_leaf(c));
      return out.add_sum(std::move(kids));
    }
    auto prod_of = [&](int pg) -> int {
      // pg is a product gate: one pi whose children are normalized sums
      std::vector<int> kids;
      for (int c : flat.gate(pg).children) kids.push_back(norm_sigma(c, k - 1));
      return out.add_prod(std::move(kids));
    };
    switch (gg.kind) {
      case GateKind::Input:
      case GateKind::Const:
        return out.add_sum({out.add_prod({norm_sigma(g, k - 1)})});
      case GateKind::Prod:
        return out.add_sum({prod_of(g)});
      case GateKind::Sum: {
        std::vector<int> kids;
        for (int c : gg.children) {
          if (flat.gate(c).kind == GateKind::Prod)
            kids.push_back(prod_of(c));
          else  // leaf child (flatten leaves no sum-under-sum)
            kids.push_back(out.add_prod({norm_sigma(c, k - 1)}));
        }
        return out.add_sum(std::move(kids));
      }
    }
    throw Error("bad gate kind");
  };
  out.set_root(norm_sigma(flat.root(), delta));
  return out;
}

// Expands a multilinear circuit into a tree-shaped formula computing the same
// polynomial, duplicating shared subtrees once per use.
inline Formula circuit_to_formula(const Circuit& c) {
  Formula out(c.modulus());
  std::function<int(int)> copy = [&](int g) -> int {
    const Gate& gg = c.gate(g);
    switch (gg.kind) {
      case GateKind::Input:
        return out.add_input(gg.var);
      case GateKind::Const:
        return out.add_const(gg.constant);
      case GateKind::Sum:
      case GateKind::Prod: {
        std::vector<int> kids;
        kids.reserve(gg.children.size());
        for (int cc : gg.children) kids.push_back(copy(cc));
        return gg.kind == GateKind::Sum ? out.add_sum(std::move(kids))
                                        : out.add_prod(std::move(kids));
      }
    }
    throw Error("bad gate kind");
  };
  out.set_root(copy(c.root()));
  return out;
}

// Copy of f with gate phi replaced by the constant 0.
inline Formula replace_with_zero(const Formula& f, int phi) {
  Formula out(f.modulus());
  std::function<int(int)> copy = [&](int g) -> int {
    if (g == phi) return out.add_const(0);
    const Gate& gg = f.gate(g);
    switch (gg.kind) {
      case GateKind::Input:
        return out.add_input(gg.var);
      case GateKind::Const:
        return out.add_const(gg.constant);
      case GateKind::Sum:
      case GateKind::Prod: {
        std::vector<int> kids;
        for (int cc : gg.children) kids.push_back(copy(cc));
        return gg.kind == GateKind::Sum ? out.add_sum(std::move(kids))
                                        : out.add_prod(std::move(kids));
      }
    }
    throw Error("bad gate kind");
  };
  out.set_root(copy(f.root()));
  return out;
}

struct GateDecomposition {
  Polynomial cofactor;  // A, supported outside Vars(phi)
  Polynomial gate_poly; // g, the polynomial of phi
  Formula zeroed;       // B = f with phi replaced by 0
};

// f = A*g + B where g is the polynomial of gate phi, B is f with phi zeroed
// out, and A is the product of the sibling subtrees at each product ancestor
// of phi (empty product = 1). Requires a tree-shaped syntactically
// multilinear formula.
inline GateDecomposition zero_gate_decompose(const Formula& f, int phi) {
  if (!f.is_tree()) throw Error("zero_gate_decompose: formula must be a tree");
  std::vector<int> parent = f.parent_map();
  Polynomial a = Polynomial::constant(1, f.modulus());
  for (int g = phi; parent[g] != -1; g = parent[g]) {
    int par = parent[g];
    if (f.gate(par).kind == GateKind::Prod) {
      for (int sib : f.gate(par).children)
        if (sib != g) a = poly_mul(a, evaluate_gate(f, sib), true);
    }
  }
  return {std::move(a), evaluate_gate(f, phi), replace_with_zero(f, phi)};
}

// Removes constant-0 children from sums and collapses products with a 0
// child, bottom-up. Returns either a formula with no Const-0 gates or a lone
// Const 0 root. Normalized shapes stay normalized (whole subtrees vanish,
// surviving paths keep their length).
inline Formula prune_zeros(const Formula& f) {
  Formula out(f.modulus());
  // returns -1 for a subtree that computes the constant 0 syntactically
  std::function<int(int)> build = [&](int g) -> int {
    const Gate& gg = f.gate(g);
    switch (gg.kind) {
      case GateKind::Input:
        return out.add_input(gg.var);
      case GateKind::Const:
        return gg.constant == 0 ? -1 : out.add_const(gg.constant);
      case GateKind::Sum: {
        std::vector<int> kids;
        for (int c : gg.children) {
          int k = build(c);
          if (k != -1) kids.push_back(k);
        }
        if (kids.empty()) return -1;
        return out.add_sum(std::move(kids));
      }
      case GateKind::Prod: {
        std::vector<int> kids;
        for (int c : gg.children) {
          int k = build(c);
          if (k == -1) return -1;
          kids.push_back(k);
        }
        return out.add_prod(std::move(kids));
      }
    }
    throw Error("bad gate kind");
  };
  int root = build(f.root());
  if (root == -1) root = out.add_const(0);
  out.set_root(root);
  return out.compacted();
}

// Wraps a non-sum root in a unary sum (the Vars definition assumes a sum
// root).
inline Formula ensure_sum_root(const Formula& f) {
  if (f.gate(f.root()).kind == GateKind::Sum) return f;
  Formula out = f;
  out.set_root(out.add_sum({out.root()}));
  return out;
}

// The subtree rooted at gate g as a standalone formula.
inline Formula extract_subformula(const Formula& f, int g) {
  Formula out(f.modulus());
  std::function<int(int)> copy = [&](int h) -> int {
    const Gate& gg = f.gate(h);
    switch (gg.kind) {
      case GateKind::Input:
        return out.add_input(gg.var);
      case GateKind::Const:
        return out.add_const(gg.constant);
      case GateKind::Sum:
      case GateKind::Prod: {
        std::vector<int> kids;
        for (int cc : gg.children) kids.push_back(copy(cc));
        return gg.kind == GateKind::Sum ? out.add_sum(std::move(kids))
                                        : out.add_prod(std::move(kids));
      }
    }
    throw Error("bad gate kind");
  };
  out.set_root(copy(g));
  return out;
}

}  // namespace immlab
