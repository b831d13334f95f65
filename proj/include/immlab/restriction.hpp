#pragma once

#include <cstdint>
#include <vector>

#include "immlab/formula.hpp"
#include "immlab/imm.hpp"
#include "immlab/polynomial.hpp"
#include "immlab/rng.hpp"

namespace immlab {

enum class TargetKind { Zero, One, YVar, ZVar };

struct Target {
  TargetKind kind = TargetKind::Zero;
  int index = 0;  // j for YVar/ZVar

  bool operator==(const Target&) const = default;
};

// A restriction rho: X -> {y_j} u {z_j} u {0,1}, fully determined by the
// path pi and the marked-layer bits a.
struct RestrictionRho {
  int d = 0;
  std::vector<int> pi;       // pi(1..d), values in {1,2}; pi(0) = 1 implicit
  std::vector<int> a;        // bits a_1..a_d
  std::vector<int> marked;   // A = {i | a_i = 1}, ascending
  std::vector<int> b;        // b_i = [pi(i-1) != pi(i)]
  std::vector<Target> map;   // indexed by X-variable index (4d entries)
  int y_count = 0;           // |Y| = ceil(|A|/2)
  int z_count = 0;           // |Z| = floor(|A|/2)
  int m = 0;                 // min(|Y|,|Z|) = |Z|

  int pi_at(int i) const { return i == 0 ? 1 : pi[i - 1]; }

  Target apply(VarId v) const {
    if (v.ns != Ns::X || v.index >= map.size())
      throw Error("restriction: not an in-range X variable: " + var_name(v));
    return map[v.index];
  }

  VarSet y_set() const {
    VarSet s;
    for (int j = 1; j <= y_count; ++j) s.insert(yvar(j));
    return s;
  }
  VarSet z_set() const {
    VarSet s;
    for (int j = 1; j <= z_count; ++j) s.insert(zvar(j));
    return s;
  }
};

// Deterministic body of the sampling algorithm given pi and a.
//
// Unmarked layers collapse to the identity matrix I (b_i = 0) or the flip
// matrix E (b_i = 1). The j-th smallest marked layer carries y_{ceil(j/2)}
// on its path edge for odd j (with a 1 beside it in the same row), and
// z_{j/2} for even j (with a 1 above/below it in the same column).
inline RestrictionRho restriction_from(const std::vector<int>& pi,
                                       const std::vector<int>& a) {
  if (pi.size() != a.size() || pi.empty())
    throw LengthMismatch("restriction_from: |pi| != |a| or empty");
  RestrictionRho r;
  r.d = static_cast<int>(pi.size());
  r.pi = pi;
  r.a = a;
  for (int v : pi)
    if (v != 1 && v != 2) throw Error("restriction_from: pi entries in {1,2}");
  for (int v : a)
    if (v != 0 && v != 1) throw Error("restriction_from: a entries in {0,1}");
  for (int i = 1; i <= r.d; ++i)
    if (a[i - 1]) r.marked.push_back(i);
  r.b.resize(r.d);
  r.map.assign(4 * r.d, Target{TargetKind::Zero, 0});
  int mark_rank = 0;
  for (int i = 1; i <= r.d; ++i) {
    int prev = r.pi_at(i - 1), cur = r.pi_at(i);
    r.b[i - 1] = prev != cur ? 1 : 0;
    auto set = [&](int u, int v, Target t) { r.map[xvar(i, u, v).index] = t; };
    if (!a[i - 1]) {
      // M^(i) = I or E
      if (r.b[i - 1] == 0) {
        set(1, 1, {TargetKind::One, 0});
        set(2, 2, {TargetKind::One, 0});
      } else {
        set(1, 2, {TargetKind::One, 0});
        set(2, 1, {TargetKind::One, 0});
      }
    } else {
      ++mark_rank;
      int other_prev = 3 - prev, other_cur = 3 - cur;
      if (mark_rank % 2 == 1) {
        set(prev, cur, {TargetKind::YVar, (mark_rank + 1) / 2});
        set(prev, other_cur, {TargetKind::One, 0});
      } else {
        set(prev, cur, {TargetKind::ZVar, mark_rank / 2});
        set(other_prev, cur, {TargetKind::One, 0});
      }
    }
  }
  int n_marked = static_cast<int>(r.marked.size());
  r.y_count = (n_marked + 1) / 2;
  r.z_count = n_marked / 2;
  r.m = r.z_count;
  return r;
}

// Sampling order (documented for reproducibility): pi(1..d) first, one bit
// per coordinate (bit + 1), then a_1..a_d, one bit per coordinate.
inline RestrictionRho sample_restriction(int d, SplitMix64& rng) {
  if (d < 1) throw Error("sample_restriction: d must be >= 1");
  std::vector<int> pi(d), a(d);
  for (int i = 0; i < d; ++i) pi[i] = 1 + rng.bit();
  for (int i = 0; i < d; ++i) a[i] = rng.bit();
  return restriction_from(pi, a);
}

// Substitution: every X variable of p is replaced by its target. Injectivity
// into Y u Z keeps the result multilinear.
inline Polynomial apply_to_polynomial(const Polynomial& p,
                                      const RestrictionRho& rho) {
  Polynomial out(p.modulus());
  for (const auto& [mono, coeff] : p.terms()) {
    VarSet image;
    bool zero = false;
    for (const VarId& v : mono.vars) {
      Target t = rho.apply(v);
      switch (t.kind) {
        case TargetKind::Zero: zero = true; break;
        case TargetKind::One: break;
        case TargetKind::YVar: image.insert(yvar(t.index)); break;
        case TargetKind::ZVar: image.insert(zvar(t.index)); break;
      }
      if (zero) break;
    }
    if (!zero) out.add_term(Monomial(image), coeff);
  }
  return out;
}

// Leaf substitution; semantically matches apply_to_polynomial.
inline Formula apply_to_formula(const Formula& f, const RestrictionRho& rho) {
  Formula out(f.modulus());
  std::function<int(int)> copy = [&](int g) -> int {
    const Gate& gg = f.gate(g);
    switch (gg.kind) {
      case GateKind::Input: {
        if (gg.var.ns != Ns::X) return out.add_input(gg.var);
        Target t = rho.apply(gg.var);
        switch (t.kind) {
          case TargetKind::Zero: return out.add_const(0);
          case TargetKind::One: return out.add_const(1);
          case TargetKind::YVar: return out.add_input(yvar(t.index));
          case TargetKind::ZVar: return out.add_input(zvar(t.index));
        }
        throw Error("bad target");
      }
      case GateKind::Const:
        return out.add_const(gg.constant);
      case GateKind::Sum:
      case GateKind::Prod: {
        std::vector<int> kids;
        for (int c : gg.children) kids.push_back(copy(c));
        return gg.kind == GateKind::Sum ? out.add_sum(std::move(kids))
                                        : out.add_prod(std::move(kids));
      }
    }
    throw Error("bad gate kind");
  };
  out.set_root(copy(f.root()));
  return out;
}

// IMM_d restricted by rho in closed form:
//   prod_{i=1}^m (1 + y_i z_i)                   if |A| = 2m
//   prod_{i=1}^m (1 + y_i z_i) * (1 + y_{m+1})   if |A| = 2m + 1
inline Polynomial imm_restricted_closed_form(
    const RestrictionRho& rho, std::uint64_t modulus = kDefaultPrime) {
  Polynomial p = Polynomial::constant(1, modulus);
  for (int i = 1; i <= rho.m; ++i) {
    Polynomial factor = Polynomial::constant(1, modulus);
    factor.add_term(Monomial(VarSet{yvar(i), zvar(i)}), 1);
    p = poly_mul(p, factor, true);
  }
  if (rho.y_count > rho.z_count) {
    Polynomial factor = Polynomial::constant(1, modulus);
    factor.add_term(Monomial(VarSet{yvar(rho.m + 1)}), 1);
    p = poly_mul(p, factor, true);
  }
  return p;
}

// A total (or partial, chi = -1) coloring of the X variables of a d-layer
// instance. Colors are 0-based.
struct Coloring {
  int d = 0;
  int colors = 0;
  std::vector<int> chi;  // indexed by X-variable index; -1 = uncolored

  int color_of(VarId v) const {
    if (v.ns != Ns::X || v.index >= chi.size())
      throw Error("coloring: out of range variable");
    return chi[v.index];
  }
};

inline Coloring coloring_from_partition(int d,
                                        const std::vector<VarSet>& classes) {
  Coloring c{d, static_cast<int>(classes.size()),
             std::vector<int>(4 * d, -1)};
  for (std::size_t i = 0; i < classes.size(); ++i)
    for (const VarId& v : classes[i]) {
      if (v.ns != Ns::X) throw Error("coloring: classes must hold X variables");
      if (c.chi[v.index] != -1) throw Error("coloring: classes overlap");
      c.chi[v.index] = static_cast<int>(i);
    }
  return c;
}

// One color per layer (layer i monochrome with its own color).
inline Coloring layer_coloring(int d) {
  Coloring c{d, d, std::vector<int>(4 * d, 0)};
  for (int i = 0; i < 4 * d; ++i) c.chi[i] = i / 4;
  return c;
}

// Per-color statistics of the path defined by pi under rho.
struct PathColorStats {
  std::vector<int> path_colors;            // C_pi^d, ascending
  std::vector<std::vector<int>> layers;    // per color: path layers with it
  std::vector<int> y_hits, z_hits;         // per color: |rho(pi_gamma) cap Y/Z|
  std::vector<bool> imbalanced;            // ||Y hits| - |Z hits|| >= 1
  std::vector<bool> odd_image;             // |rho(pi_gamma)| odd
  int imbalance_count = 0;                 // ell
};

inline PathColorStats path_color_stats(const RestrictionRho& rho,
                                       const Coloring& chi) {
  if (chi.d != rho.d) throw LengthMismatch("coloring and restriction d differ");
  PathColorStats s;
  s.layers.assign(chi.colors, {});
  s.y_hits.assign(chi.colors, 0);
  s.z_hits.assign(chi.colors, 0);
  std::vector<char> seen(chi.colors, 0);
  for (int i = 1; i <= rho.d; ++i) {
    VarId edge = xvar(i, rho.pi_at(i - 1), rho.pi_at(i));
    int color = chi.color_of(edge);
    if (color < 0)
      throw Error("path edge " + var_name(edge) + " is uncolored");
    seen[color] = 1;
    s.layers[color].push_back(i);
    Target t = rho.apply(edge);
    if (t.kind == TargetKind::YVar) ++s.y_hits[color];
    if (t.kind == TargetKind::ZVar) ++s.z_hits[color];
  }
  s.imbalanced.assign(chi.colors, false);
  s.odd_image.assign(chi.colors, false);
  for (int c = 0; c < chi.colors; ++c) {
    if (seen[c]) s.path_colors.push_back(c);
    s.imbalanced[c] = s.y_hits[c] != s.z_hits[c];
    s.odd_image[c] = (s.y_hits[c] + s.z_hits[c]) % 2 == 1;
    if (s.imbalanced[c]) ++s.imbalance_count;
  }
  return s;
}

// |U|_rho|: the number of Y u Z images of U (injectivity makes this a plain
// count of U variables mapped to a variable).
inline int touched_variable_count(const RestrictionRho& rho, const VarSet& u) {
  int count = 0;
  for (const VarId& v : u) {
    Target t = rho.apply(v);
    if (t.kind == TargetKind::YVar || t.kind == TargetKind::ZVar) ++count;
  }
  return count;
}

}  // namespace immlab
