#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "immlab/field.hpp"
#include "immlab/var.hpp"

namespace immlab {

// A multilinear monomial: a canonically ordered set of distinct variables.
struct Monomial {
  std::vector<VarId> vars;  // sorted, no repeats

  Monomial() = default;
  explicit Monomial(VarSet s) : vars(s.begin(), s.end()) {}
  explicit Monomial(std::vector<VarId> v) : vars(std::move(v)) {
    std::sort(vars.begin(), vars.end());
    for (std::size_t i = 1; i < vars.size(); ++i)
      if (vars[i] == vars[i - 1])
        throw MultilinearityViolation("repeated variable in monomial: " +
                                      var_name(vars[i]));
  }

  bool empty() const { return vars.empty(); }

  auto operator<=>(const Monomial&) const = default;

  // Merge of two monomials; nullopt if they share a variable.
  static std::optional<Monomial> mul(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.vars.reserve(a.vars.size() + b.vars.size());
    std::size_t i = 0, j = 0;
    while (i < a.vars.size() && j < b.vars.size()) {
      if (a.vars[i] == b.vars[j]) return std::nullopt;
      r.vars.push_back(a.vars[i] < b.vars[j] ? a.vars[i++] : b.vars[j++]);
    }
    while (i < a.vars.size()) r.vars.push_back(a.vars[i++]);
    while (j < b.vars.size()) r.vars.push_back(b.vars[j++]);
    return r;
  }
};

// Sparse multilinear polynomial over GF(p), canonical form: no zero
// coefficients are ever stored, so equality is term-map equality.
class Polynomial {
 public:
  explicit Polynomial(std::uint64_t modulus = kDefaultPrime)
      : field_(modulus) {}

  static Polynomial constant(std::int64_t c,
                             std::uint64_t modulus = kDefaultPrime) {
    Polynomial p(modulus);
    p.add_term(Monomial{}, p.field_.reduce(c));
    return p;
  }

  static Polynomial variable(VarId v, std::uint64_t modulus = kDefaultPrime) {
    Polynomial p(modulus);
    p.add_term(Monomial{VarSet{v}}, 1);
    return p;
  }

  const Field& field() const { return field_; }
  std::uint64_t modulus() const { return field_.modulus(); }
  const std::map<Monomial, std::uint64_t>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
  }

  // Total degree <= 1.
  bool is_affine() const {
    for (const auto& [m, c] : terms_)
      if (m.vars.size() > 1) return false;
    return true;
  }

  // Accumulate c * m; keeps canonical form.
  void add_term(const Monomial& m, std::uint64_t c) {
    c %= modulus();
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second = field_.add(it->second, c);
      if (it->second == 0) terms_.erase(it);
    }
  }

  bool operator==(const Polynomial& o) const {
    return modulus() == o.modulus() && terms_ == o.terms_;
  }

 private:
  Field field_;
  std::map<Monomial, std::uint64_t> terms_;
};

inline void check_same_modulus(const Polynomial& p, const Polynomial& q) {
  if (p.modulus() != q.modulus())
    throw Error("polynomial moduli differ");
}

inline Polynomial poly_add(const Polynomial& p, const Polynomial& q) {
  check_same_modulus(p, q);
  Polynomial r = p;
  for (const auto& [m, c] : q.terms()) r.add_term(m, c);
  return r;
}

inline Polynomial poly_neg(const Polynomial& p) {
  Polynomial r(p.modulus());
  for (const auto& [m, c] : p.terms()) r.add_term(m, p.field().neg(c));
  return r;
}

inline Polynomial poly_sub(const Polynomial& p, const Polynomial& q) {
  return poly_add(p, poly_neg(q));
}

inline VarSet support(const Polynomial& p) {
  VarSet s;
  for (const auto& [m, c] : p.terms()) s.insert(m.vars.begin(), m.vars.end());
  return s;
}

// Exact product. With strict_multilinear set, supports must be disjoint up
// front; without it, the product must still come out multilinear (a repeated
// variable in any monomial pair is an error either way, since monomials
// cannot carry degree 2).
inline Polynomial poly_mul(const Polynomial& p, const Polynomial& q,
                           bool strict_multilinear = true) {
  check_same_modulus(p, q);
  if (strict_multilinear) {
    VarId shared;
    VarSet sp = support(p), sq = support(q);
    if (first_common(sp, sq, &shared))
      throw MultilinearityViolation("strict product: shared variable " +
                                    var_name(shared));
  }
  Polynomial r(p.modulus());
  for (const auto& [mp, cp] : p.terms())
    for (const auto& [mq, cq] : q.terms()) {
      auto m = Monomial::mul(mp, mq);
      if (!m)
        throw MultilinearityViolation(
            "product is not multilinear (repeated variable)");
      r.add_term(*m, p.field().mul(cp, cq));
    }
  return r;
}

inline Polynomial poly_scale(const Polynomial& p, std::uint64_t c) {
  Polynomial r(p.modulus());
  for (const auto& [m, cc] : p.terms()) r.add_term(m, p.field().mul(cc, c));
  return r;
}

// Exact coefficient; 0 if the monomial is absent.
inline std::uint64_t coefficient(const Polynomial& p, const Monomial& m) {
  auto it = p.terms().find(m);
  return it == p.terms().end() ? 0 : it->second;
}

// Exact evaluation mod p. The assignment must cover support(p).
inline std::uint64_t poly_eval(const Polynomial& p,
                               const std::map<VarId, std::uint64_t>& assignment) {
  const Field& f = p.field();
  std::uint64_t acc = 0;
  for (const auto& [m, c] : p.terms()) {
    std::uint64_t term = c;
    for (const VarId& v : m.vars) {
      auto it = assignment.find(v);
      if (it == assignment.end())
        throw MissingAssignment("no value for " + var_name(v));
      term = f.mul(term, it->second % f.modulus());
    }
    acc = f.add(acc, term);
  }
  return acc;
}

// --- text format ----------------------------------------------------------
//
//   poly   := term (('+'|'-') term)*   (optional leading '-')
//   term   := coeff | [coeff '*'] var ('*' var)*
//   coeff  := decimal integer (reduced mod p at parse time)
//   var    := x[i][u][v] | y[j] | z[j]
//
// print/parse round-trips exactly on canonical forms.

inline std::string poly_to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    if (!first) os << " + ";
    first = false;
    if (m.empty()) {
      os << c;
    } else {
      if (c != 1) os << c << "*";
      bool fv = true;
      for (const VarId& v : m.vars) {
        if (!fv) os << "*";
        fv = false;
        os << var_name(v);
      }
    }
  }
  return os.str();
}

inline Polynomial parse_poly(const std::string& text,
                             std::uint64_t modulus = kDefaultPrime) {
  Polynomial result(modulus);
  Field f(modulus);
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' ||
                               text[i] == '\n' || text[i] == '\r'))
      ++i;
  };
  skip_ws();
  if (i == text.size()) throw ParseError("empty polynomial");
  bool negate = false;
  if (text[i] == '-') {
    negate = true;
    ++i;
  }
  for (;;) {
    skip_ws();
    // one term
    std::uint64_t coeff = 1;
    bool saw_coeff = false;
    VarSet vars;
    for (;;) {
      skip_ws();
      if (i < text.size() && text[i] >= '0' && text[i] <= '9') {
        std::size_t start = i;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
        std::uint64_t v = std::stoull(text.substr(start, i - start)) % modulus;
        coeff = f.mul(coeff, v);
        saw_coeff = true;
      } else if (i < text.size() &&
                 (text[i] == 'x' || text[i] == 'y' || text[i] == 'z')) {
        VarId v = parse_var_impl(text, &i);
        if (vars.count(v))
          throw MultilinearityViolation("repeated variable in input term");
        vars.insert(v);
      } else {
        throw ParseError("expected coefficient or variable at offset " +
                         std::to_string(i));
      }
      skip_ws();
      if (i < text.size() && text[i] == '*') {
        ++i;
        continue;
      }
      break;
    }
    if (vars.empty() && !saw_coeff)
      throw ParseError("empty term in polynomial");
    result.add_term(Monomial(vars), negate ? f.neg(coeff) : coeff);
    skip_ws();
    if (i == text.size()) break;
    if (text[i] == '+') {
      negate = false;
      ++i;
    } else if (text[i] == '-') {
      negate = true;
      ++i;
    } else {
      throw ParseError("expected '+' or '-' at offset " + std::to_string(i));
    }
  }
  return result;
}

}  // namespace immlab
