#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "zakdd/errors.hpp"

namespace zakdd {

using i64 = std::int64_t;

// Least non-negative residue of value mod modulus; safe for negative values.
inline i64 mod_reduce(i64 value, i64 modulus) {
  i64 r = value % modulus;
  return r < 0 ? r + modulus : r;
}

// Floor division for positive divisors (truncating division rounds toward
// zero, which is wrong for the quasi-periodic phase bookkeeping).
inline i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  if (a % b != 0 && (a < 0) != (b < 0)) --q;
  return q;
}

struct Egcd {
  i64 g, x, y;  // g = gcd(a, b) = a*x + b*y
};

inline Egcd egcd(i64 a, i64 b) {
  i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    i64 q = a / b;
    i64 t = b;
    b = a - q * b;
    a = t;
    t = x1; x1 = x0 - q * x1; x0 = t;
    t = y1; y1 = y0 - q * y1; y0 = t;
  }
  return {a, x0, y0};
}

// Multiplicative inverse of a mod m. Throws NoInverse when gcd(a, m) != 1.
inline i64 mod_inverse(i64 a, i64 m) {
  Egcd e = egcd(mod_reduce(a, m), m);
  require(e.g == 1, Errc::NoInverse,
          std::to_string(a) + " has no inverse mod " + std::to_string(m));
  return mod_reduce(e.x, m);
}

inline i64 gcd64(i64 a, i64 b) { return std::gcd(a, b); }

}  // namespace zakdd
