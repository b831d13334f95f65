#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "immlab/formula.hpp"
#include "immlab/polynomial.hpp"

namespace immlab {

inline constexpr int kDefaultImmCap = 20;  // imm_polynomial has 2^d monomials

// The iterated 2x2 matrix product polynomial: sum of the (1,1) and (1,2)
// entries of M^(1)...M^(d), i.e. one monomial per source path of the layered
// graph G_d.
inline Polynomial imm_polynomial(int d, std::uint64_t modulus = kDefaultPrime,
                                 int cap = kDefaultImmCap) {
  if (d < 1) throw Error("imm_polynomial: d must be >= 1");
  if (d > cap)
    throw CapExceeded("imm_polynomial: d = " + std::to_string(d) +
                      " exceeds cap " + std::to_string(cap));
  Polynomial p(modulus);
  for (std::uint64_t path = 0; path < (1ULL << d); ++path) {
    VarSet mono;
    int prev = 1;
    for (int i = 1; i <= d; ++i) {
      int cur = 1 + static_cast<int>((path >> (i - 1)) & 1);
      mono.insert(xvar(i, prev, cur));
      prev = cur;
    }
    p.add_term(Monomial(mono), 1);
  }
  return p;
}

// The labeled DAG G_d: layers V^(0),...,V^(d) of two vertices each, all
// edges between consecutive layers, edge (v^(i)_j, v^(i+1)_k) labeled
// x^(i+1)_{j,k}.
struct LabeledDAG {
  int d;

  struct Edge {
    int layer;  // edge from V^(layer-1) to V^(layer), layer in [d]
    int from;   // j in {1,2}
    int to;     // k in {1,2}
    VarId label;
  };
  std::vector<Edge> edges;  // exactly 4d
};

inline LabeledDAG imm_graph(int d) {
  if (d < 1) throw Error("imm_graph: d must be >= 1");
  LabeledDAG g{d, {}};
  g.edges.reserve(4 * d);
  for (int i = 1; i <= d; ++i)
    for (int j = 1; j <= 2; ++j)
      for (int k = 1; k <= 2; ++k) g.edges.push_back({i, j, k, xvar(i, j, k)});
  return g;
}

// Contiguous blocks B_1,...,B_t covering [d], sizes near-equal
// (ceil(d/t) or floor(d/t)).
struct BlockScheme {
  int d = 0;
  int t = 0;
  std::vector<std::pair<int, int>> boundaries;  // inclusive [lo, hi] per block
};

inline BlockScheme self_reduction_blocks(int d, int t) {
  if (t < 1 || t > d) throw Error("self_reduction_blocks: need 1 <= t <= d");
  BlockScheme s{d, t, {}};
  int base = d / t, extra = d % t;
  int lo = 1;
  for (int i = 0; i < t; ++i) {
    int len = base + (i < extra ? 1 : 0);
    s.boundaries.emplace_back(lo, lo + len - 1);
    lo += len;
  }
  return s;
}

// Entry (u,v) of the product of the block matrices M^(lo)...M^(hi), as a
// polynomial: sum over u->v paths of the edge-label products.
inline Polynomial block_entry_polynomial(int lo, int hi, int u, int v,
                                         std::uint64_t modulus = kDefaultPrime) {
  int len = hi - lo + 1;
  Polynomial p(modulus);
  for (std::uint64_t path = 0; path < (1ULL << (len - 1)); ++path) {
    VarSet mono;
    int prev = u;
    for (int i = 0; i < len; ++i) {
      int cur = i + 1 == len ? v : 1 + static_cast<int>((path >> i) & 1);
      mono.insert(xvar(lo + i, prev, cur));
      prev = cur;
    }
    p.add_term(Monomial(mono), 1);
  }
  return p;
}

namespace detail {

// Block count for one divide-and-conquer level: ceil(d^(1/delta)), clamped to
// [2, d] so the recursion depth is exactly delta.
inline int dc_block_count(int len, int delta) {
  int t = static_cast<int>(std::ceil(std::pow(static_cast<double>(len),
                                              1.0 / delta) - 1e-9));
  if (t < 2) t = 2;
  if (t > len) t = len;
  return t;
}

// Builds the (u,v) block-product entry over layers [lo,hi] with product depth
// exactly depth. memo is null for formulas (duplicate freely) and a table for
// circuits (share gates).
inline int dc_entry(Formula& out, int lo, int hi, int u, int v, int depth,
                    std::map<std::tuple<int, int, int, int, int>, int>* memo) {
  if (memo) {
    auto it = memo->find({lo, hi, u, v, depth});
    if (it != memo->end()) return it->second;
  }
  int len = hi - lo + 1;
  int result;
  if (len == 1 && depth > 1) {
    // unary padding keeps every path at exactly `depth` products
    result = out.add_sum(
        {out.add_prod({dc_entry(out, lo, hi, u, v, depth - 1, memo)})});
  } else if (depth == 1) {
    // direct sum-of-paths expansion (one sigma-pi level)
    std::vector<int> prods;
    for (std::uint64_t path = 0; path < (1ULL << (len - 1)); ++path) {
      std::vector<int> leaves;
      int prev = u;
      for (int i = 0; i < len; ++i) {
        int cur = i + 1 == len ? v : 1 + static_cast<int>((path >> i) & 1);
        leaves.push_back(out.add_input(xvar(lo + i, prev, cur)));
        prev = cur;
      }
      prods.push_back(out.add_prod(std::move(leaves)));
    }
    result = out.add_sum(std::move(prods));
  } else {
    int t = dc_block_count(len, depth);
    BlockScheme blocks = self_reduction_blocks(len, t);
    std::vector<int> prods;
    // interior connection points w_1..w_{t-1} range over {1,2}
    for (std::uint64_t w = 0; w < (1ULL << (t - 1)); ++w) {
      std::vector<int> entries;
      int prev = u;
      for (int k = 0; k < t; ++k) {
        int cur = k + 1 == t ? v : 1 + static_cast<int>((w >> k) & 1);
        auto [blo, bhi] = blocks.boundaries[k];
        entries.push_back(dc_entry(out, lo + blo - 1, lo + bhi - 1, prev, cur,
                                   depth - 1, memo));
        prev = cur;
      }
      prods.push_back(out.add_prod(std::move(entries)));
    }
    result = out.add_sum(std::move(prods));
  }
  if (memo) (*memo)[{lo, hi, u, v, depth}] = result;
  return result;
}

// Top level: IMM_d = sum over (u_1..u_t) of P^(1)_{1,u_1} ... P^(t)_{u_{t-1},u_t}
// with u_0 = 1, summing over both final endpoints.
inline int dc_top(Formula& out, int d, int delta,
                  std::map<std::tuple<int, int, int, int, int>, int>* memo) {
  if (delta == 1) {
    std::vector<int> prods;
    for (std::uint64_t path = 0; path < (1ULL << d); ++path) {
      std::vector<int> leaves;
      int prev = 1;
      for (int i = 1; i <= d; ++i) {
        int cur = 1 + static_cast<int>((path >> (i - 1)) & 1);
        leaves.push_back(out.add_input(xvar(i, prev, cur)));
        prev = cur;
      }
      prods.push_back(out.add_prod(std::move(leaves)));
    }
    return out.add_sum(std::move(prods));
  }
  int t = dc_block_count(d, delta);
  BlockScheme blocks = self_reduction_blocks(d, t);
  std::vector<int> prods;
  for (std::uint64_t w = 0; w < (1ULL << t); ++w) {
    std::vector<int> entries;
    int prev = 1;
    for (int k = 0; k < t; ++k) {
      int cur = 1 + static_cast<int>((w >> k) & 1);
      auto [blo, bhi] = blocks.boundaries[k];
      entries.push_back(dc_entry(out, blo, bhi, prev, cur, delta - 1, memo));
      prev = cur;
    }
    prods.push_back(out.add_prod(std::move(entries)));
  }
  return out.add_sum(std::move(prods));
}

// Leaf-count estimate for the construction above, used to refuse infeasible
// (d, delta) requests before allocating anything.
inline double dc_leaf_estimate(int len, int depth, bool top) {
  if (len == 1 && depth > 1) return dc_leaf_estimate(len, depth - 1, top);
  if (depth == 1) {
    double paths = std::ldexp(1.0, top ? len : len - 1);
    return paths * len;
  }
  int t = dc_block_count(len, depth);
  BlockScheme blocks = self_reduction_blocks(len, t);
  double per_assignment = 0;
  for (auto [lo, hi] : blocks.boundaries)
    per_assignment += dc_leaf_estimate(hi - lo + 1, depth - 1, false);
  return std::ldexp(1.0, top ? t : t - 1) * per_assignment;
}

}  // namespace detail

inline constexpr double kDcLeafBudget = 2.0e7;

inline void check_dc_params(int d, int delta) {
  if (d < 2) throw BadDepth("build_dc: d must be >= 2");
  if (delta < 1 || (1LL << delta) > d)  // 2^delta <= d, i.e. delta <= log2(d)
    throw BadDepth("build_dc: need 1 <= delta <= log2(d)");
  if (detail::dc_leaf_estimate(d, delta, true) > kDcLeafBudget)
    throw BudgetExceeded("build_dc: construction would exceed the leaf budget");
}

// The divide-and-conquer (sigma-pi)^delta formula for IMM_d: syntactically
// multilinear, product depth exactly delta.
inline Formula build_dc_formula(int d, int delta,
                                std::uint64_t modulus = kDefaultPrime) {
  check_dc_params(d, delta);
  Formula out(modulus);
  out.set_root(detail::dc_top(out, d, delta, nullptr));
  return out;
}

// Same construction with block-product entries shared (a DAG).
inline Circuit build_dc_circuit(int d, int delta,
                                std::uint64_t modulus = kDefaultPrime) {
  check_dc_params(d, delta);
  Circuit out(modulus);
  std::map<std::tuple<int, int, int, int, int>, int> memo;
  out.set_root(detail::dc_top(out, d, delta, &memo));
  return out;
}

inline int leaf_count(const Formula& f) {
  std::vector<char> seen(f.gate_count(), 0);
  int count = 0;
  std::function<void(int)> visit = [&](int g) {
    if (seen[g]) return;
    seen[g] = 1;
    const Gate& gg = f.gate(g);
    if (gg.kind == GateKind::Input || gg.kind == GateKind::Const) ++count;
    for (int c : gg.children) visit(c);
  };
  visit(f.root());
  return count;
}

struct SizeRow {
  int d = 0;
  int delta = 0;
  long long formula_size = -1;  // -1: over budget, skipped
  long long circuit_size = -1;
  long long leaves = -1;
};

// Exact size accounting for the divide-and-conquer constructions; rows over
// the leaf budget are emitted with -1 sizes.
inline std::vector<SizeRow> size_table(const std::vector<int>& d_list,
                                       const std::vector<int>& delta_list) {
  std::vector<SizeRow> rows;
  for (int d : d_list)
    for (int delta : delta_list) {
      if (delta < 1 || (1LL << delta) > d) continue;
      SizeRow row{d, delta, -1, -1, -1};
      if (detail::dc_leaf_estimate(d, delta, true) <= kDcLeafBudget) {
        Formula f = build_dc_formula(d, delta);
        Circuit c = build_dc_circuit(d, delta);
        row.formula_size = f.size();
        row.circuit_size = c.size();
        row.leaves = leaf_count(f);
      }
      rows.push_back(row);
    }
  return rows;
}

}  // namespace immlab
