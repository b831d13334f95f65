#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <type_traits>
#include <vector>

#include "immlab/formula.hpp"
#include "immlab/transform.hpp"

namespace immlab {

// One factor of a decomposition term: a polynomial together with its
// ascribed variable set (the factor "owns" those variables; its support is
// contained in them).
struct Factor {
  Polynomial poly;
  VarSet vars;
};

// Product of >= 1 factors whose ascribed sets are nonempty, pairwise
// disjoint, and partition the ambient variable set.
struct TProductTerm {
  std::vector<Factor> factors;

  int t() const { return static_cast<int>(factors.size()); }
};

// L_1 ... L_{r'} * G: at most r affine factors whose ascribed sets jointly
// cover >= support_threshold variables, times an arbitrary tail G. The tail's
// ascribed set may be empty only when G is constant.
struct RSimpleTerm {
  std::vector<Factor> linears;
  Factor tail;
  int r = 0;
  int support_threshold = 0;

  int r_prime() const { return static_cast<int>(linears.size()); }
};

template <class Term>
inline Polynomial term_polynomial(const Term& term, std::uint64_t modulus) {
  Polynomial p = Polynomial::constant(1, modulus);
  if constexpr (std::is_same_v<Term, TProductTerm>) {
    for (const Factor& f : term.factors) p = poly_mul(p, f.poly, true);
  } else {
    for (const Factor& f : term.linears) p = poly_mul(p, f.poly, true);
    p = poly_mul(p, term.tail.poly, true);
  }
  return p;
}

struct DecompParams {
  int t = 1;                  // Case-1 fan-in threshold
  int r = 1;                  // affine-factor budget of simple terms
  int support_threshold = 400;  // Case-2 Vars trigger
  int p_bound = 400;          // Vars cap below which Case 3 fires
};

// t = max(1, ceil(D d^{1/D} / 1000)), r = max(1, ceil(D d^{1/D} / 400)),
// support_threshold = p_bound = 400 r.
inline DecompParams default_params(int d, int delta) {
  if (delta < 1 || (1LL << delta) > d)
    throw BadDepth("default_params: need 1 <= delta <= log2(d)");
  double x = delta * std::pow(static_cast<double>(d), 1.0 / delta);
  DecompParams p;
  p.t = std::max(1, static_cast<int>(std::ceil(x / 1000.0 - 1e-9)));
  p.r = std::max(1, static_cast<int>(std::ceil(x / 400.0 - 1e-9)));
  p.support_threshold = 400 * p.r;
  p.p_bound = 400 * p.r;
  return p;
}

struct Decomposition {
  std::vector<TProductTerm> products;
  std::vector<RSimpleTerm> simples;
  int source_size = 0;
};

// --- term verification ------------------------------------------------------

struct VerifyResult {
  bool ok = true;
  std::string diagnostics;
};

namespace detail {

inline bool check_partition(const std::vector<const VarSet*>& sets,
                            const VarSet& ambient, std::string* diag) {
  VarSet seen;
  for (const VarSet* s : sets) {
    VarId shared;
    if (first_common(seen, *s, &shared)) {
      *diag = "ascribed sets overlap at " + var_name(shared);
      return false;
    }
    seen.insert(s->begin(), s->end());
  }
  if (seen != ambient) {
    *diag = "ascribed sets do not partition the ambient variable set";
    return false;
  }
  return true;
}

inline bool check_containment(const Factor& f, std::string* diag) {
  for (const VarId& v : support(f.poly))
    if (!f.vars.count(v)) {
      *diag = "factor supported outside its ascribed set: " + var_name(v);
      return false;
    }
  return true;
}

}  // namespace detail

inline VerifyResult verify_term(const TProductTerm& term,
                                const VarSet& ambient) {
  VerifyResult r;
  if (term.factors.empty()) return {false, "term has no factors"};
  std::vector<const VarSet*> sets;
  for (const Factor& f : term.factors) {
    if (f.vars.empty()) return {false, "empty ascribed set in product term"};
    std::string diag;
    if (!detail::check_containment(f, &diag)) return {false, diag};
    sets.push_back(&f.vars);
  }
  std::string diag;
  if (!detail::check_partition(sets, ambient, &diag)) return {false, diag};
  return r;
}

inline VerifyResult verify_term(const RSimpleTerm& term, const VarSet& ambient) {
  if (term.r_prime() > term.r)
    return {false, "r' = " + std::to_string(term.r_prime()) + " exceeds r = " +
                       std::to_string(term.r)};
  std::size_t covered = 0;
  std::vector<const VarSet*> sets;
  for (const Factor& f : term.linears) {
    if (!f.poly.is_affine()) return {false, "non-affine linear factor"};
    std::string diag;
    if (!detail::check_containment(f, &diag)) return {false, diag};
    covered += f.vars.size();
    sets.push_back(&f.vars);
  }
  if (covered < static_cast<std::size_t>(term.support_threshold))
    return {false, "linear factors cover " + std::to_string(covered) +
                       " < threshold " +
                       std::to_string(term.support_threshold)};
  std::string diag;
  if (!detail::check_containment(term.tail, &diag)) return {false, diag};
  if (term.tail.vars.empty() && !term.tail.poly.is_constant())
    return {false, "non-constant tail with empty ascribed set"};
  sets.push_back(&term.tail.vars);
  if (!detail::check_partition(sets, ambient, &diag)) return {false, diag};
  return {};
}

// --- the decomposition ------------------------------------------------------

namespace detail {

// Distance of each gate from the leaves; in the exact alternating shape all
// children of a gate share one layer, so child[0] is representative.
inline std::vector<int> gate_layers(const Formula& f) {
  std::vector<int> layer(f.gate_count(), 0);
  std::vector<char> done(f.gate_count(), 0);
  std::function<void(int)> visit = [&](int g) {
    if (done[g]) return;
    done[g] = 1;
    const Gate& gg = f.gate(g);
    if (gg.children.empty()) {
      layer[g] = 0;
      return;
    }
    for (int c : gg.children) visit(c);
    layer[g] = layer[gg.children[0]] + 1;
  };
  visit(f.root());
  return layer;
}

// Lowest-id product gates at distance 2 from the leaves.
inline std::vector<int> layer2_gates(const Formula& f) {
  std::vector<int> layer = gate_layers(f);
  std::vector<char> reach(f.gate_count(), 0);
  std::function<void(int)> mark = [&](int g) {
    if (reach[g]) return;
    reach[g] = 1;
    for (int c : f.gate(g).children) mark(c);
  };
  mark(f.root());
  std::vector<int> out;
  for (int g = 0; g < f.gate_count(); ++g)
    if (reach[g] && layer[g] == 2 && f.gate(g).kind == GateKind::Prod)
      out.push_back(g);
  return out;
}

// Factors for the product gate phi: one factor per child with its Vars as
// the ascribed set, plus `extra` ascribed `extra_vars` (ambient minus
// Vars(phi)). Children with empty Vars (constant, non-final children) are
// folded into the last factor; if extra_vars is empty the extra polynomial is
// constant and is folded in too.
inline TProductTerm product_term_for_gate(const Formula& f, int phi,
                                          const std::vector<VarSet>& vars,
                                          const Polynomial& extra,
                                          const VarSet& extra_vars) {
  TProductTerm term;
  Polynomial pending = Polynomial::constant(1, f.modulus());
  for (int c : f.gate(phi).children) {
    Polynomial p = evaluate_gate(f, c);
    if (vars[c].empty())
      pending = poly_mul(pending, p, true);
    else
      term.factors.push_back({std::move(p), vars[c]});
  }
  if (extra_vars.empty())
    pending = poly_mul(pending, extra, true);
  else
    term.factors.push_back({extra, extra_vars});
  if (term.factors.empty()) {
    // fully constant gate: one factor owning everything there is to own
    term.factors.push_back({pending, extra_vars});
    return term;
  }
  if (!(pending == Polynomial::constant(1, f.modulus())))
    term.factors.back().poly =
        poly_mul(term.factors.back().poly, pending, true);
  return term;
}

inline double t_bound(double n, double p, int delta) {
  return (delta - 1) * (std::pow(n / p, 1.0 / (delta - 1)) - 1.0);
}

}  // namespace detail

// Rewrites f (an exact alternating sum-product formula over `ambient`, all
// layer-2 product gates bounded by p_bound in |Vars|) as a sum of product
// terms, each with at least (delta-1)((n/p_bound)^{1/(delta-1)} - 1) factors.
// Recurses on the widest child of each top product gate.
inline std::vector<TProductTerm> inner_depth_recursion(const Formula& f,
                                                       const VarSet& ambient,
                                                       int p_bound) {
  int delta = product_depth(f);
  if (delta < 2)
    throw PreconditionViolated("inner_depth_recursion: depth must be >= 2");
  if (!alternation_shape_ok(f, delta))
    throw ShapeError("inner_depth_recursion: not in alternating shape");
  std::vector<VarSet> vars = compute_vars(f, ambient);
  for (int phi : detail::layer2_gates(f))
    if (vars[phi].size() > static_cast<std::size_t>(p_bound))
      throw PreconditionViolated("layer-2 gate " + std::to_string(phi) +
                                 " has |Vars| = " +
                                 std::to_string(vars[phi].size()) + " > " +
                                 std::to_string(p_bound));
  double n = static_cast<double>(ambient.size());
  double bound = detail::t_bound(n, p_bound, delta);
  std::vector<TProductTerm> out;
  Polynomial one = Polynomial::constant(1, f.modulus());
  for (int psi : f.gate(f.root()).children) {
    // psi is a top product gate (possibly unary)
    if (delta == 2) {
      TProductTerm term = detail::product_term_for_gate(
          f, psi, vars, one, set_minus(ambient, vars[psi]));
      if (term.t() < bound)
        throw Error("inner recursion: base-case term has " +
                    std::to_string(term.t()) + " factors < bound");
      out.push_back(std::move(term));
      continue;
    }
    // pick the child with the largest |Vars| (ties: lowest gate id)
    const std::vector<int>& kids = f.gate(psi).children;
    int widest = kids[0];
    for (int c : kids)
      if (vars[c].size() > vars[widest].size()) widest = c;
    Formula sub = extract_subformula(f, widest);
    std::vector<TProductTerm> inner =
        inner_depth_recursion(sub, vars[widest], p_bound);
    // remaining siblings become extra factors of every inner term
    std::vector<Factor> siblings;
    Polynomial pending = one;
    for (int c : kids) {
      if (c == widest) continue;
      Polynomial p = evaluate_gate(f, c);
      if (vars[c].empty())
        pending = poly_mul(pending, p, true);
      else
        siblings.push_back({std::move(p), vars[c]});
    }
    for (TProductTerm& h : inner) {
      TProductTerm term = h;
      for (const Factor& s : siblings) term.factors.push_back(s);
      if (!(pending == one))
        term.factors.back().poly =
            poly_mul(term.factors.back().poly, pending, true);
      if (term.t() < bound)
        throw Error("inner recursion: term has " + std::to_string(term.t()) +
                    " factors < bound");
      out.push_back(std::move(term));
    }
  }
  return out;
}

// Rewrites f as a sum of product terms and simple terms, exactly:
//   Case 1  some layer-2 gate has fan-in >= t: split off a product term and
//           recurse on the remainder.
//   Case 2  some layer-2 gate has |Vars| >= support_threshold: split off a
//           simple term (the gate's affine children as the L_i) and recurse.
//   Case 3  all layer-2 gates are narrow: the inner depth recursion finishes
//           the job in one step (depth 1: the top summands are already
//           product terms).
// The ambient set defaults to the support of f.
inline Decomposition decompose(const Formula& f, const DecompParams& params,
                               const VarSet& ambient_in = {}) {
  if (!f.is_tree()) throw ShapeError("decompose: formula must be a tree");
  int delta = product_depth(f);
  if (delta < 1 || !alternation_shape_ok(f, delta))
    throw ShapeError("decompose: formula not in alternating shape");
  VarSet ambient =
      ambient_in.empty() ? compute_supp(f)[f.root()] : ambient_in;
  Decomposition result;
  result.source_size = f.size();

  Formula cur = f;
  for (;;) {
    Polynomial cur_poly = evaluate_to_polynomial(cur);
    if (cur_poly.is_zero()) break;
    if (cur_poly.is_constant() || !alternation_shape_ok(cur, delta)) {
      // remainder degenerated to a constant (or lost its shape by pruning a
      // whole level): emit it as a single-factor term and stop
      TProductTerm term;
      term.factors.push_back({cur_poly, ambient});
      result.products.push_back(std::move(term));
      break;
    }
    std::vector<VarSet> vars = compute_vars(cur, ambient);
    std::vector<int> l2 = detail::layer2_gates(cur);
    int case1 = -1, case2 = -1;
    for (int g : l2) {
      if (case1 == -1 &&
          cur.gate(g).children.size() >= static_cast<std::size_t>(params.t))
        case1 = g;
      if (case2 == -1 &&
          vars[g].size() >= static_cast<std::size_t>(params.support_threshold))
        case2 = g;
    }
    if (case1 != -1) {
      GateDecomposition gd = zero_gate_decompose(cur, case1);
      result.products.push_back(detail::product_term_for_gate(
          cur, case1, vars, gd.cofactor, set_minus(ambient, vars[case1])));
      cur = prune_zeros(gd.zeroed);
      continue;
    }
    if (case2 != -1) {
      GateDecomposition gd = zero_gate_decompose(cur, case2);
      RSimpleTerm term;
      term.r = params.r;
      term.support_threshold = params.support_threshold;
      for (int c : cur.gate(case2).children)
        term.linears.push_back({evaluate_gate(cur, c), vars[c]});
      term.tail = {gd.cofactor, set_minus(ambient, vars[case2])};
      result.simples.push_back(std::move(term));
      cur = prune_zeros(gd.zeroed);
      continue;
    }
    // Case 3
    int cur_delta = product_depth(cur);
    if (cur_delta >= 2) {
      for (TProductTerm& t : inner_depth_recursion(cur, ambient, params.p_bound))
        result.products.push_back(std::move(t));
    } else {
      // depth 1: each top summand is a product of affine factors already
      Polynomial one = Polynomial::constant(1, cur.modulus());
      for (int psi : cur.gate(cur.root()).children)
        result.products.push_back(detail::product_term_for_gate(
            cur, psi, vars, one, set_minus(ambient, vars[psi])));
    }
    break;
  }
  return result;
}

inline Polynomial decomposition_sum(const Decomposition& d,
                                    std::uint64_t modulus) {
  Polynomial acc(modulus);
  for (const TProductTerm& t : d.products)
    acc = poly_add(acc, term_polynomial(t, modulus));
  for (const RSimpleTerm& t : d.simples)
    acc = poly_add(acc, term_polynomial(t, modulus));
  return acc;
}

}  // namespace immlab
