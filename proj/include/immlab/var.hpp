#pragma once

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "immlab/errors.hpp"

namespace immlab {

// Variable namespaces. X holds the matrix entries x^{(i)}_{u,v}; Y and Z
// hold the fresh variables introduced by restrictions.
enum class Ns : std::uint8_t { X = 0, Y = 1, Z = 2 };

struct VarId {
  Ns ns = Ns::X;
  std::uint32_t index = 0;

  auto operator<=>(const VarId&) const = default;
};

// X-namespace encoding: x^{(i)}_{u,v} -> 4(i-1) + 2(u-1) + (v-1),
// i >= 1, u,v in {1,2}.
inline VarId xvar(int i, int u, int v) {
  if (i < 1 || u < 1 || u > 2 || v < 1 || v > 2)
    throw Error("xvar: bad coordinates");
  return {Ns::X, static_cast<std::uint32_t>(4 * (i - 1) + 2 * (u - 1) + (v - 1))};
}

inline VarId yvar(int j) {
  if (j < 1) throw Error("yvar: index must be >= 1");
  return {Ns::Y, static_cast<std::uint32_t>(j)};
}

inline VarId zvar(int j) {
  if (j < 1) throw Error("zvar: index must be >= 1");
  return {Ns::Z, static_cast<std::uint32_t>(j)};
}

struct XCoords {
  int layer;  // i in [d]
  int u;      // row in {1,2}
  int v;      // col in {1,2}
};

inline XCoords x_coords(VarId x) {
  if (x.ns != Ns::X) throw Error("x_coords: not an X variable");
  return {static_cast<int>(x.index / 4) + 1,
          static_cast<int>((x.index % 4) / 2) + 1,
          static_cast<int>(x.index % 2) + 1};
}

inline std::string var_name(VarId v) {
  switch (v.ns) {
    case Ns::X: {
      XCoords c = x_coords(v);
      return "x[" + std::to_string(c.layer) + "][" + std::to_string(c.u) +
             "][" + std::to_string(c.v) + "]";
    }
    case Ns::Y:
      return "y[" + std::to_string(v.index) + "]";
    case Ns::Z:
      return "z[" + std::to_string(v.index) + "]";
  }
  throw Error("var_name: bad namespace");
}

// Parses "x[i][u][v]", "y[j]" or "z[j]".
VarId parse_var(const std::string& s);

// std::set iterates in (namespace, index) order, which is the canonical
// variable order everywhere in the toolkit.
using VarSet = std::set<VarId>;

inline bool disjoint(const VarSet& a, const VarSet& b) {
  const VarSet& small = a.size() <= b.size() ? a : b;
  const VarSet& big = a.size() <= b.size() ? b : a;
  for (const VarId& v : small)
    if (big.count(v)) return false;
  return true;
}

// First common element, if any.
inline bool first_common(const VarSet& a, const VarSet& b, VarId* out) {
  const VarSet& small = a.size() <= b.size() ? a : b;
  const VarSet& big = a.size() <= b.size() ? b : a;
  for (const VarId& v : small)
    if (big.count(v)) {
      *out = v;
      return true;
    }
  return false;
}

inline VarSet set_union(const VarSet& a, const VarSet& b) {
  VarSet r = a;
  r.insert(b.begin(), b.end());
  return r;
}

inline VarSet set_minus(const VarSet& a, const VarSet& b) {
  VarSet r;
  for (const VarId& v : a)
    if (!b.count(v)) r.insert(v);
  return r;
}

// All 4d X variables of a d-layer instance.
inline VarSet full_x_set(int d) {
  VarSet r;
  for (int i = 1; i <= d; ++i)
    for (int u = 1; u <= 2; ++u)
      for (int v = 1; v <= 2; ++v) r.insert(xvar(i, u, v));
  return r;
}

inline VarId parse_var_impl(const std::string& s, std::size_t* pos) {
  auto fail = [&]() -> VarId { throw ParseError("bad variable syntax: " + s); };
  std::size_t i = *pos;
  if (i >= s.size()) return fail();
  char ns = s[i++];
  auto read_index = [&]() -> int {
    if (i >= s.size() || s[i] != '[') throw ParseError("expected '[' in " + s);
    ++i;
    std::size_t start = i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
    if (i == start || i >= s.size() || s[i] != ']')
      throw ParseError("bad index in " + s);
    int val = std::stoi(s.substr(start, i - start));
    ++i;
    return val;
  };
  VarId result;
  if (ns == 'x') {
    int layer = read_index(), u = read_index(), v = read_index();
    result = xvar(layer, u, v);
  } else if (ns == 'y') {
    result = yvar(read_index());
  } else if (ns == 'z') {
    result = zvar(read_index());
  } else {
    return fail();
  }
  *pos = i;
  return result;
}

inline VarId parse_var(const std::string& s) {
  std::size_t pos = 0;
  VarId v = parse_var_impl(s, &pos);
  if (pos != s.size()) throw ParseError("trailing characters in variable: " + s);
  return v;
}

}  // namespace immlab
