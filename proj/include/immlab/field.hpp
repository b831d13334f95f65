#pragma once

#include <cstdint>

#include "immlab/errors.hpp"

namespace immlab {

// Default modulus: 2^31 - 1 (Mersenne prime, single-word arithmetic).
inline constexpr std::uint64_t kDefaultPrime = 2147483647ULL;

// Arithmetic in GF(p) for a runtime prime p. Values are canonical
// representatives in [0, p).
class Field {
 public:
  explicit Field(std::uint64_t p = kDefaultPrime) : p_(p) {
    if (p < 2) throw Error("field modulus must be >= 2");
  }

  std::uint64_t modulus() const { return p_; }

  std::uint64_t reduce(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    if (r < 0) r += static_cast<std::int64_t>(p_);
    return static_cast<std::uint64_t>(r);
  }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }

  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    return a >= b ? a - b : a + p_ - b;
  }

  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p_ - a; }

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(a) * b) % p_);
  }

  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t r = 1 % p_;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  std::uint64_t inv(std::uint64_t a) const {
    if (a == 0) throw Error("division by zero in GF(p)");
    return pow(a, p_ - 2);
  }

  bool operator==(const Field&) const = default;

 private:
  std::uint64_t p_;
};

}  // namespace immlab
