#pragma once

#include <vector>

#include "immlab/formula.hpp"
#include "immlab/rng.hpp"

namespace immlab::testutil {

// Random syntactically multilinear formula over (a subset of) `vars` with a
// sum root: sums branch freely over the same variable set, products split it
// among their children.
inline int random_ml_gate(Formula& f, const std::vector<VarId>& vars,
                          SplitMix64& rng, int depth, bool force_sum) {
  if (depth == 0 || vars.size() <= 1) {
    if (vars.empty() || rng.below(8) == 0)
      return f.add_const(1 + rng.below(5));
    return f.add_input(vars[rng.below(vars.size())]);
  }
  int kind = force_sum ? 0 : static_cast<int>(rng.below(2));
  if (kind == 0) {
    int fan = 1 + static_cast<int>(rng.below(3));
    std::vector<int> kids;
    for (int i = 0; i < fan; ++i)
      kids.push_back(random_ml_gate(f, vars, rng, depth - 1, false));
    return f.add_sum(std::move(kids));
  }
  // product: random split of vars into fan-in parts (some may get none)
  int fan = 2 + static_cast<int>(rng.below(2));
  std::vector<std::vector<VarId>> parts(fan);
  for (const VarId& v : vars) parts[rng.below(fan)].push_back(v);
  std::vector<int> kids;
  for (int i = 0; i < fan; ++i)
    kids.push_back(random_ml_gate(f, parts[i], rng, depth - 1, false));
  return f.add_prod(std::move(kids));
}

inline Formula random_ml_formula(const std::vector<VarId>& vars,
                                 SplitMix64& rng, int depth = 4,
                                 std::uint64_t modulus = kDefaultPrime) {
  Formula f(modulus);
  f.set_root(random_ml_gate(f, vars, rng, depth, true));
  return f;
}

// Random multilinear polynomial over vars (each subset kept with prob 1/2,
// coefficient uniform nonzero), never identically zero.
inline Polynomial random_test_poly(const std::vector<VarId>& vars,
                                   SplitMix64& rng,
                                   std::uint64_t modulus = kDefaultPrime) {
  Polynomial p(modulus);
  std::uint64_t subsets = std::uint64_t{1} << vars.size();
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    if (rng.bit() == 0) continue;
    VarSet s;
    for (std::size_t b = 0; b < vars.size(); ++b)
      if (mask & (std::uint64_t{1} << b)) s.insert(vars[b]);
    p.add_term(Monomial(s), 1 + rng.below(modulus - 1));
  }
  if (p.is_zero()) p.add_term(Monomial{}, 1);
  return p;
}

// Determinant by recursive minor expansion; rank = largest k with a
// nonsingular k x k minor. Brute-force oracle for matrices up to 6 x 6.
inline std::uint64_t minor_det(const std::vector<std::vector<std::uint64_t>>& a,
                               const std::vector<int>& rows,
                               const std::vector<int>& cols, const Field& f) {
  std::size_t n = rows.size();
  if (n == 1) return a[rows[0]][cols[0]];
  std::uint64_t det = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<int> sub_rows(rows.begin() + 1, rows.end());
    std::vector<int> sub_cols;
    for (std::size_t k = 0; k < n; ++k)
      if (k != j) sub_cols.push_back(cols[k]);
    std::uint64_t cofactor =
        f.mul(a[rows[0]][cols[j]], minor_det(a, sub_rows, sub_cols, f));
    det = j % 2 == 0 ? f.add(det, cofactor) : f.sub(det, cofactor);
  }
  return det;
}

inline int minor_rank(const std::vector<std::vector<std::uint64_t>>& a,
                      std::uint64_t modulus) {
  if (a.empty() || a[0].empty()) return 0;
  Field f(modulus);
  int nrows = static_cast<int>(a.size());
  int ncols = static_cast<int>(a[0].size());
  int best = 0;
  for (int k = std::min(nrows, ncols); k >= 1; --k) {
    // all k-subsets of rows and columns
    std::vector<int> rsel(k), csel(k);
    std::function<bool(int, int)> pick_rows = [&](int idx, int start) -> bool {
      if (idx == k) {
        std::function<bool(int, int)> pick_cols = [&](int jdx,
                                                      int cstart) -> bool {
          if (jdx == k) return minor_det(a, rsel, csel, f) != 0;
          for (int c = cstart; c < ncols; ++c) {
            csel[jdx] = c;
            if (pick_cols(jdx + 1, c + 1)) return true;
          }
          return false;
        };
        return pick_cols(0, 0);
      }
      for (int rr = start; rr < nrows; ++rr) {
        rsel[idx] = rr;
        if (pick_rows(idx + 1, rr + 1)) return true;
      }
      return false;
    };
    if (pick_rows(0, 0)) {
      best = k;
      break;
    }
  }
  return best;
}

}  // namespace immlab::testutil
