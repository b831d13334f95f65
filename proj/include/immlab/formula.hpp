#pragma once

#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "immlab/polynomial.hpp"

namespace immlab {

enum class GateKind { Input, Const, Sum, Prod };

struct Gate {
  GateKind kind = GateKind::Const;
  VarId var{};                 // Input only
  std::uint64_t constant = 0;  // Const only
  std::vector<int> children;   // Sum/Prod, fan-in >= 1
};

// Gate store for formulas and circuits alike. Gate ids are stable indices
// assigned at construction. A Formula proper is tree-shaped (every non-root
// gate has exactly one parent); a Circuit allows shared gates. is_tree()
// distinguishes the two.
class Formula {
 public:
  explicit Formula(std::uint64_t modulus = kDefaultPrime)
      : modulus_(modulus) {}

  std::uint64_t modulus() const { return modulus_; }

  int add_input(VarId v) {
    gates_.push_back({GateKind::Input, v, 0, {}});
    return static_cast<int>(gates_.size()) - 1;
  }
  int add_const(std::uint64_t c) {
    gates_.push_back({GateKind::Const, {}, c % modulus_, {}});
    return static_cast<int>(gates_.size()) - 1;
  }
  int add_sum(std::vector<int> children) {
    if (children.empty()) throw Error("sum gate needs fan-in >= 1");
    gates_.push_back({GateKind::Sum, {}, 0, std::move(children)});
    return static_cast<int>(gates_.size()) - 1;
  }
  int add_prod(std::vector<int> children) {
    if (children.empty()) throw Error("product gate needs fan-in >= 1");
    gates_.push_back({GateKind::Prod, {}, 0, std::move(children)});
    return static_cast<int>(gates_.size()) - 1;
  }

  void set_root(int g) { root_ = g; }
  int root() const { return root_; }
  const Gate& gate(int g) const { return gates_[g]; }
  int gate_count() const { return static_cast<int>(gates_.size()); }

  // Size per the convention used throughout: number of gates reachable from
  // the root, input gates included. Shared gates count once.
  int size() const {
    std::vector<char> seen(gates_.size(), 0);
    int count = 0;
    std::function<void(int)> visit = [&](int g) {
      if (seen[g]) return;
      seen[g] = 1;
      ++count;
      for (int c : gates_[g].children) visit(c);
    };
    if (root_ >= 0) visit(root_);
    return count;
  }

  bool is_tree() const {
    std::vector<int> parents(gates_.size(), 0);
    for (const Gate& g : gates_)
      for (int c : g.children) ++parents[c];
    for (std::size_t i = 0; i < gates_.size(); ++i)
      if (parents[i] > 1) return false;
    return true;
  }

  // Parent of every gate; -1 for the root / unreachable gates. Trees only.
  std::vector<int> parent_map() const {
    std::vector<int> par(gates_.size(), -1);
    for (int g = 0; g < gate_count(); ++g)
      for (int c : gates_[g].children) {
        if (par[c] != -1) throw Error("parent_map: not a tree");
        par[c] = g;
      }
    return par;
  }

  // Drops gates unreachable from the root, preserving relative order.
  Formula compacted() const {
    Formula out(modulus_);
    std::vector<int> remap(gates_.size(), -1);
    std::function<int(int)> visit = [&](int g) -> int {
      if (remap[g] != -1) return remap[g];
      const Gate& gg = gates_[g];
      std::vector<int> kids;
      kids.reserve(gg.children.size());
      for (int c : gg.children) kids.push_back(visit(c));
      int id;
      switch (gg.kind) {
        case GateKind::Input: id = out.add_input(gg.var); break;
        case GateKind::Const: id = out.add_const(gg.constant); break;
        case GateKind::Sum: id = out.add_sum(std::move(kids)); break;
        case GateKind::Prod: id = out.add_prod(std::move(kids)); break;
        default: throw Error("bad gate kind");
      }
      remap[g] = id;
      return id;
    };
    out.set_root(visit(root_));
    return out;
  }

 private:
  std::vector<Gate> gates_;
  int root_ = -1;
  std::uint64_t modulus_;
};

// Circuits share the representation; fan-out is unrestricted.
using Circuit = Formula;

// --- analyses --------------------------------------------------------------

// Supp per gate: bottom-up union of input-variable sets.
inline std::vector<VarSet> compute_supp(const Formula& f) {
  std::vector<VarSet> supp(f.gate_count());
  std::vector<char> done(f.gate_count(), 0);
  std::function<void(int)> visit = [&](int g) {
    if (done[g]) return;
    done[g] = 1;
    const Gate& gg = f.gate(g);
    if (gg.kind == GateKind::Input) {
      supp[g].insert(gg.var);
    } else {
      for (int c : gg.children) {
        visit(c);
        supp[g].insert(supp[c].begin(), supp[c].end());
      }
    }
  };
  visit(f.root());
  return supp;
}

// Maximum number of product gates on a root-to-leaf path, per gate.
inline std::vector<int> product_depths(const Formula& f) {
  std::vector<int> pd(f.gate_count(), 0);
  std::vector<char> done(f.gate_count(), 0);
  std::function<void(int)> visit = [&](int g) {
    if (done[g]) return;
    done[g] = 1;
    const Gate& gg = f.gate(g);
    int m = 0;
    for (int c : gg.children) {
      visit(c);
      m = std::max(m, pd[c]);
    }
    pd[g] = m + (gg.kind == GateKind::Prod ? 1 : 0);
  };
  visit(f.root());
  return pd;
}

inline int product_depth(const Formula& f) {
  return product_depths(f)[f.root()];
}

struct MlWitness {
  bool ok = true;
  int gate = -1;       // violating product gate
  VarId shared{};      // a variable shared between two of its children
};

// Syntactic multilinearity: every product gate has pairwise Supp-disjoint
// children.
inline MlWitness check_syntactic_multilinear(const Formula& f) {
  std::vector<VarSet> supp = compute_supp(f);
  std::vector<char> seen(f.gate_count(), 0);
  MlWitness w;
  std::function<bool(int)> visit = [&](int g) -> bool {
    if (seen[g]) return true;
    seen[g] = 1;
    const Gate& gg = f.gate(g);
    if (gg.kind == GateKind::Prod) {
      VarSet acc;
      for (int c : gg.children) {
        VarId shared;
        if (first_common(acc, supp[c], &shared)) {
          w = {false, g, shared};
          return false;
        }
        acc.insert(supp[c].begin(), supp[c].end());
      }
    }
    for (int c : gg.children)
      if (!visit(c)) return false;
    return true;
  };
  visit(f.root());
  return w;
}

// Vars per gate, top-down. The root must be a sum gate with Vars = ambient;
// sum children inherit; product children get Vars = Supp except the last,
// which takes the remainder. Tree-shaped, syntactically multilinear formulas
// only.
inline std::vector<VarSet> compute_vars(const Formula& f, const VarSet& ambient) {
  if (!f.is_tree()) throw Error("compute_vars: formula must be a tree");
  MlWitness w = check_syntactic_multilinear(f);
  if (!w.ok)
    throw NotSyntacticMultilinear("gate " + std::to_string(w.gate) +
                                  " shares " + var_name(w.shared));
  if (f.gate(f.root()).kind != GateKind::Sum)
    throw Error("compute_vars: root must be a sum gate");
  std::vector<VarSet> supp = compute_supp(f);
  std::vector<VarSet> vars(f.gate_count());
  std::function<void(int)> visit = [&](int g) {
    const Gate& gg = f.gate(g);
    if (gg.kind == GateKind::Sum) {
      for (int c : gg.children) {
        vars[c] = vars[g];
        visit(c);
      }
    } else if (gg.kind == GateKind::Prod) {
      VarSet used;
      for (std::size_t i = 0; i + 1 < gg.children.size(); ++i) {
        int c = gg.children[i];
        vars[c] = supp[c];
        used.insert(vars[c].begin(), vars[c].end());
      }
      int last = gg.children.back();
      vars[last] = set_minus(vars[g], used);
      for (int c : gg.children) visit(c);
    }
  };
  vars[f.root()] = ambient;
  visit(f.root());
  return vars;
}

// The exact polynomial computed by a gate. Products are strict: overlapping
// child supports with a genuinely non-multilinear result raise
// MultilinearityViolation. Memoized, so circuits evaluate each gate once.
inline Polynomial evaluate_gate(const Formula& f, int gate) {
  std::vector<Polynomial> memo(f.gate_count(), Polynomial(f.modulus()));
  std::vector<char> done(f.gate_count(), 0);
  std::function<const Polynomial&(int)> visit =
      [&](int g) -> const Polynomial& {
    if (done[g]) return memo[g];
    const Gate& gg = f.gate(g);
    switch (gg.kind) {
      case GateKind::Input:
        memo[g] = Polynomial::variable(gg.var, f.modulus());
        break;
      case GateKind::Const:
        memo[g] = Polynomial::constant(static_cast<std::int64_t>(gg.constant),
                                       f.modulus());
        break;
      case GateKind::Sum: {
        Polynomial acc(f.modulus());
        for (int c : gg.children) acc = poly_add(acc, visit(c));
        memo[g] = std::move(acc);
        break;
      }
      case GateKind::Prod: {
        Polynomial acc = Polynomial::constant(1, f.modulus());
        for (int c : gg.children) acc = poly_mul(acc, visit(c), true);
        memo[g] = std::move(acc);
        break;
      }
    }
    done[g] = 1;
    return memo[g];
  };
  return visit(gate);
}

inline Polynomial evaluate_to_polynomial(const Formula& f) {
  return evaluate_gate(f, f.root());
}

// Point evaluation of the formula without expanding it; linear in size.
inline std::uint64_t evaluate_at_point(
    const Formula& f, const std::map<VarId, std::uint64_t>& assignment) {
  Field fld(f.modulus());
  std::vector<std::uint64_t> memo(f.gate_count(), 0);
  std::vector<char> done(f.gate_count(), 0);
  std::function<std::uint64_t(int)> visit = [&](int g) -> std::uint64_t {
    if (done[g]) return memo[g];
    const Gate& gg = f.gate(g);
    std::uint64_t v = 0;
    switch (gg.kind) {
      case GateKind::Input: {
        auto it = assignment.find(gg.var);
        if (it == assignment.end())
          throw MissingAssignment("no value for " + var_name(gg.var));
        v = it->second % f.modulus();
        break;
      }
      case GateKind::Const:
        v = gg.constant;
        break;
      case GateKind::Sum:
        for (int c : gg.children) v = fld.add(v, visit(c));
        break;
      case GateKind::Prod:
        v = 1;
        for (int c : gg.children) v = fld.mul(v, visit(c));
        break;
    }
    done[g] = 1;
    memo[g] = v;
    return v;
  };
  return visit(f.root());
}

// --- s-expression text format ----------------------------------------------
//
//   expr := (+ expr expr ...) | (* expr expr ...) | var | integer
//
// with the variable syntax of the polynomial format.

inline std::string formula_to_sexp(const Formula& f) {
  std::ostringstream os;
  std::function<void(int)> print = [&](int g) {
    const Gate& gg = f.gate(g);
    switch (gg.kind) {
      case GateKind::Input:
        os << var_name(gg.var);
        break;
      case GateKind::Const:
        os << gg.constant;
        break;
      case GateKind::Sum:
      case GateKind::Prod:
        os << "(" << (gg.kind == GateKind::Sum ? "+" : "*");
        for (int c : gg.children) {
          os << " ";
          print(c);
        }
        os << ")";
        break;
    }
  };
  print(f.root());
  return os.str();
}

inline Formula parse_formula_sexp(const std::string& text,
                                  std::uint64_t modulus = kDefaultPrime) {
  Formula f(modulus);
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' ||
                               text[i] == '\n' || text[i] == '\r'))
      ++i;
  };
  std::function<int()> parse_expr = [&]() -> int {
    skip_ws();
    if (i >= text.size()) throw ParseError("unexpected end of s-expression");
    char c = text[i];
    if (c == '(') {
      ++i;
      skip_ws();
      if (i >= text.size() || (text[i] != '+' && text[i] != '*'))
        throw ParseError("expected '+' or '*' after '('");
      bool is_sum = text[i] == '+';
      ++i;
      std::vector<int> children;
      for (;;) {
        skip_ws();
        if (i >= text.size()) throw ParseError("unterminated s-expression");
        if (text[i] == ')') {
          ++i;
          break;
        }
        children.push_back(parse_expr());
      }
      if (children.empty()) throw ParseError("empty gate in s-expression");
      return is_sum ? f.add_sum(std::move(children))
                    : f.add_prod(std::move(children));
    }
    if (c == 'x' || c == 'y' || c == 'z')
      return f.add_input(parse_var_impl(text, &i));
    if ((c >= '0' && c <= '9') || c == '-') {
      std::size_t start = i;
      if (c == '-') ++i;
      while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
      if (i == start + (c == '-' ? 1 : 0))
        throw ParseError("bad integer in s-expression");
      Field fld(modulus);
      return f.add_const(fld.reduce(std::stoll(text.substr(start, i - start))));
    }
    throw ParseError(std::string("unexpected character '") + c +
                     "' in s-expression");
  };
  int root = parse_expr();
  skip_ws();
  if (i != text.size()) throw ParseError("trailing characters after formula");
  f.set_root(root);
  return f;
}

}  // namespace immlab
