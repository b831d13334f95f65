#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "immlab/errors.hpp"
#include "immlab/field.hpp"
#include "immlab/polynomial.hpp"

namespace immlab {

// Coefficient matrix M(p) of a multilinear polynomial over Y u Z: rows are
// indexed by subsets of the active Y variables, columns by subsets of the
// active Z variables, entry = coefficient of the corresponding monomial.
// Only variables actually appearing in p are used; dropping inactive
// variables duplicates rows/columns (rank 1 tensor factor) and so preserves
// rank.
struct CoeffMatrix {
  std::vector<VarId> y_vars;  // ascending
  std::vector<VarId> z_vars;  // ascending
  std::vector<std::vector<std::uint64_t>> entries;  // 2^|Y| x 2^|Z|
  std::uint64_t modulus = kDefaultPrime;

  std::size_t rows() const { return entries.size(); }
  std::size_t cols() const { return entries.empty() ? 0 : entries[0].size(); }
};

inline constexpr std::size_t kMaxMatrixCells = std::size_t{1} << 26;

// Matrix over the ACTIVE variables: declared Y/Z variables absent from p are
// dropped (their rows/columns duplicate existing ones, so rank is preserved).
inline CoeffMatrix coefficient_matrix(const Polynomial& p, const VarSet& y,
                                      const VarSet& z) {
  VarSet ys, zs;
  for (const VarId& v : support(p)) {
    if (y.count(v)) ys.insert(v);
    else if (z.count(v)) zs.insert(v);
    else throw SupportLeak("coefficient_matrix: variable " + var_name(v) +
                           " outside the declared Y/Z sets");
  }
  CoeffMatrix m;
  m.modulus = p.modulus();
  m.y_vars.assign(ys.begin(), ys.end());
  m.z_vars.assign(zs.begin(), zs.end());
  if (m.y_vars.size() > 30 || m.z_vars.size() > 30 ||
      (std::size_t{1} << m.y_vars.size()) * (std::size_t{1} << m.z_vars.size()) >
          kMaxMatrixCells)
    throw CapExceeded("coefficient_matrix: matrix would exceed cell cap");
  std::size_t nrows = std::size_t{1} << m.y_vars.size();
  std::size_t ncols = std::size_t{1} << m.z_vars.size();
  m.entries.assign(nrows, std::vector<std::uint64_t>(ncols, 0));
  std::map<VarId, int> ypos, zpos;
  for (std::size_t i = 0; i < m.y_vars.size(); ++i) ypos[m.y_vars[i]] = int(i);
  for (std::size_t i = 0; i < m.z_vars.size(); ++i) zpos[m.z_vars[i]] = int(i);
  for (const auto& [mono, coeff] : p.terms()) {
    std::size_t row = 0, col = 0;
    for (const VarId& v : mono.vars) {
      if (ys.count(v)) row |= std::size_t{1} << ypos.at(v);
      else col |= std::size_t{1} << zpos.at(v);
    }
    m.entries[row][col] = coeff;
  }
  return m;
}

// Convenience overload: classify by variable namespace (Y vs Z).
inline CoeffMatrix coefficient_matrix(const Polynomial& p) {
  VarSet ys, zs;
  for (const VarId& v : support(p)) {
    if (v.ns == Ns::Y) ys.insert(v);
    else if (v.ns == Ns::Z) zs.insert(v);
    else throw SupportLeak("coefficient_matrix: non-Y/Z variable " +
                           var_name(v) + " in support");
  }
  return coefficient_matrix(p, ys, zs);
}

// Gaussian elimination over GF(modulus). Bit-packed fast path for modulus 2.
inline int matrix_rank(std::vector<std::vector<std::uint64_t>> a,
                       std::uint64_t modulus) {
  if (a.empty() || a[0].empty()) return 0;
  std::size_t nrows = a.size(), ncols = a[0].size();
  if (modulus == 2) {
    std::size_t words = (ncols + 63) / 64;
    std::vector<std::vector<std::uint64_t>> bits(
        nrows, std::vector<std::uint64_t>(words, 0));
    for (std::size_t i = 0; i < nrows; ++i)
      for (std::size_t j = 0; j < ncols; ++j)
        if (a[i][j] & 1) bits[i][j / 64] |= std::uint64_t{1} << (j % 64);
    int rank = 0;
    std::size_t row = 0;
    for (std::size_t col = 0; col < ncols && row < nrows; ++col) {
      std::size_t w = col / 64;
      std::uint64_t mask = std::uint64_t{1} << (col % 64);
      std::size_t pivot = row;
      while (pivot < nrows && !(bits[pivot][w] & mask)) ++pivot;
      if (pivot == nrows) continue;
      std::swap(bits[row], bits[pivot]);
      for (std::size_t i = 0; i < nrows; ++i)
        if (i != row && (bits[i][w] & mask))
          for (std::size_t k = w; k < words; ++k) bits[i][k] ^= bits[row][k];
      ++row;
      ++rank;
    }
    return rank;
  }
  Field f(modulus);
  int rank = 0;
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols && row < nrows; ++col) {
    std::size_t pivot = row;
    while (pivot < nrows && a[pivot][col] == 0) ++pivot;
    if (pivot == nrows) continue;
    std::swap(a[row], a[pivot]);
    std::uint64_t inv = f.inv(a[row][col]);
    for (std::size_t k = col; k < ncols; ++k) a[row][k] = f.mul(a[row][k], inv);
    for (std::size_t i = 0; i < nrows; ++i) {
      if (i == row || a[i][col] == 0) continue;
      std::uint64_t factor = a[i][col];
      for (std::size_t k = col; k < ncols; ++k)
        a[i][k] = f.sub(a[i][k], f.mul(factor, a[row][k]));
    }
    ++row;
    ++rank;
  }
  return rank;
}

inline int rank(const CoeffMatrix& m) {
  return matrix_rank(m.entries, m.modulus);
}

inline int rank(const Polynomial& p) { return rank(coefficient_matrix(p)); }

// rank(M(prod g_i)) = prod rank(M(g_i)) when the g_i have pairwise disjoint
// supports (the big matrix is a Kronecker product up to row/column
// permutation). Throws on overlap instead of silently multiplying.
inline std::int64_t rank_of_product(const std::vector<Polynomial>& factors) {
  VarSet seen;
  std::int64_t result = 1;
  for (const Polynomial& g : factors) {
    VarSet s = support(g);
    VarId shared;
    if (first_common(seen, s, &shared))
      throw OverlapError("rank_of_product: factors share " + var_name(shared));
    for (const VarId& v : s) seen.insert(v);
    result *= rank(g);
  }
  return result;
}

struct RankReport {
  int rank = 0;
  std::size_t rows = 0, cols = 0;
  int active_y = 0, active_z = 0;
};

inline RankReport rank_report(const Polynomial& p) {
  CoeffMatrix m = coefficient_matrix(p);
  RankReport r;
  r.rank = rank(m);
  r.rows = m.rows();
  r.cols = m.cols();
  r.active_y = static_cast<int>(m.y_vars.size());
  r.active_z = static_cast<int>(m.z_vars.size());
  return r;
}

// Evaluate the same integer polynomial under a second prime and require the
// ranks to agree; catches accidental characteristic-specific collapses.
inline int rank_cross_checked(const Polynomial& p, std::uint64_t other_prime) {
  int r1 = rank(p);
  Polynomial q(other_prime);
  for (const auto& [mono, coeff] : p.terms()) q.add_term(mono, coeff);
  int r2 = rank(q);
  if (r1 != r2)
    throw PrimeDisagreement("rank differs across primes: " +
                            std::to_string(r1) + " vs " + std::to_string(r2));
  return r1;
}

}  // namespace immlab
