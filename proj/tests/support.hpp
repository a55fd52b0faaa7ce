#pragma once

// Shared helpers for the test suites: seeded random polynomials and small
// brute-force oracles that avoid the library code paths under test.

#include <cstdint>
#include <random>
#include <vector>

#include "misiu/misiu.hpp"

namespace misiu::test {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x5eed2024ULL);
  return gen;
}

inline long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }

/// Random coefficient, biased toward multiples of p so polygons have shape.
inline BigInt random_coeff(unsigned long p, long magnitude = 50) {
  BigInt c = uniform(-magnitude, magnitude);
  const long e = uniform(0, 4);
  for (long i = 0; i < e; ++i) c *= p;
  return c;
}

/// Nonzero polynomial with exactly the given degree.
inline IntPoly random_poly(std::size_t degree, unsigned long p = 2, long magnitude = 50) {
  std::vector<BigInt> c(degree + 1);
  for (auto& x : c) x = random_coeff(p, magnitude);
  while (c.back() == 0) c.back() = random_coeff(p, magnitude);
  return IntPoly(std::move(c));
}

/// Plain dense product used as an independent oracle.
inline IntPoly naive_mul(const IntPoly& f, const IntPoly& g) {
  if (f.is_zero() || g.is_zero()) return {};
  std::vector<BigInt> out(f.size() + g.size() - 1);
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) out[i + j] += f[i] * g[j];
  }
  return IntPoly(std::move(out));
}

}  // namespace misiu::test
