#pragma once

/**
 * @file modp.hpp
 * @brief Polynomials over F_q and distinct-degree factorization.
 *
 * Only factor-degree multisets are produced; no equal-degree splitting.
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "misiu/errors.hpp"
#include "misiu/poly.hpp"

namespace misiu {

/// Residue arithmetic needs q < 2^32 so products fit in 64 bits.
inline constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 32;

class ModPoly {
 public:
  ModPoly() = default;
  ModPoly(std::uint64_t q, std::vector<std::uint64_t> coeffs) : q_(q), coeffs_(std::move(coeffs)) {
    if (q < 2 || q >= kMaxModulus) throw std::invalid_argument("modulus must lie in [2, 2^32)");
    for (auto& c : coeffs_) c %= q_;
    normalize();
  }

  std::uint64_t modulus() const { return q_; }
  const std::vector<std::uint64_t>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  Degree degree() const { return coeffs_.empty() ? Degree{} : Degree{coeffs_.size() - 1}; }
  std::size_t size() const { return coeffs_.size(); }
  std::uint64_t operator[](std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : 0; }
  std::uint64_t leading() const { return coeffs_.empty() ? 0 : coeffs_.back(); }

  friend bool operator==(const ModPoly&, const ModPoly&) = default;

 private:
  void normalize() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  std::uint64_t q_ = 2;
  std::vector<std::uint64_t> coeffs_;
};

namespace modp {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t q) { return a * b % q; }

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t q) {
  std::uint64_t out = 1 % q;
  a %= q;
  while (e) {
    if (e & 1) out = mulmod(out, a, q);
    a = mulmod(a, a, q);
    e >>= 1;
  }
  return out;
}

/// Inverse in F_q (q prime).
inline std::uint64_t inverse(std::uint64_t a, std::uint64_t q) {
  if (a % q == 0) throw std::domain_error("inverse of zero mod q");
  return powmod(a, q - 2, q);
}

inline ModPoly add(const ModPoly& f, const ModPoly& g) {
  const std::uint64_t q = f.modulus();
  std::vector<std::uint64_t> out(std::max(f.size(), g.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (f[i] + g[i]) % q;
  return ModPoly(q, std::move(out));
}

inline ModPoly sub(const ModPoly& f, const ModPoly& g) {
  const std::uint64_t q = f.modulus();
  std::vector<std::uint64_t> out(std::max(f.size(), g.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (f[i] + q - g[i]) % q;
  return ModPoly(q, std::move(out));
}

inline ModPoly mul(const ModPoly& f, const ModPoly& g) {
  const std::uint64_t q = f.modulus();
  if (f.is_zero() || g.is_zero()) return ModPoly(q, {});
  std::vector<std::uint64_t> out(f.size() + g.size() - 1, 0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    for (std::size_t j = 0; j < g.size(); ++j) out[i + j] = (out[i + j] + f[i] * g[j]) % q;
  }
  return ModPoly(q, std::move(out));
}

/// Quotient and remainder of f by nonzero g.
inline std::pair<ModPoly, ModPoly> divmod(const ModPoly& f, const ModPoly& g) {
  const std::uint64_t q = f.modulus();
  if (g.is_zero()) throw ZeroPolynomial("division by zero polynomial mod q");
  if (f.size() < g.size()) return {ModPoly(q, {}), f};
  std::vector<std::uint64_t> rem = f.coeffs();
  std::vector<std::uint64_t> quot(f.size() - g.size() + 1, 0);
  const std::uint64_t inv = inverse(g.leading(), q);
  const std::size_t dg = g.size() - 1;
  for (std::size_t k = quot.size(); k-- > 0;) {
    const std::uint64_t c = mulmod(rem[k + dg], inv, q);
    quot[k] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dg; ++j) rem[k + j] = (rem[k + j] + q - mulmod(c, g[j], q)) % q;
  }
  rem.resize(dg);
  return {ModPoly(q, std::move(quot)), ModPoly(q, std::move(rem))};
}

inline ModPoly rem(const ModPoly& f, const ModPoly& g) { return divmod(f, g).second; }

inline ModPoly monic(const ModPoly& f) {
  if (f.is_zero()) return f;
  const std::uint64_t q = f.modulus();
  const std::uint64_t inv = inverse(f.leading(), q);
  std::vector<std::uint64_t> out = f.coeffs();
  for (auto& c : out) c = mulmod(c, inv, q);
  return ModPoly(q, std::move(out));
}

/// Monic gcd (zero if both inputs are zero).
inline ModPoly gcd(ModPoly a, ModPoly b) {
  while (!b.is_zero()) {
    ModPoly r = rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

inline ModPoly derivative(const ModPoly& f) {
  const std::uint64_t q = f.modulus();
  if (f.size() <= 1) return ModPoly(q, {});
  std::vector<std::uint64_t> out(f.size() - 1);
  for (std::size_t i = 1; i < f.size(); ++i) out[i - 1] = mulmod(f[i], i % q, q);
  return ModPoly(q, std::move(out));
}

/// base^e mod modulus.
inline ModPoly powmod(const ModPoly& base, std::uint64_t e, const ModPoly& modulus) {
  const std::uint64_t q = base.modulus();
  ModPoly out = rem(ModPoly(q, {1}), modulus);
  ModPoly b = rem(base, modulus);
  while (e) {
    if (e & 1) out = rem(mul(out, b), modulus);
    e >>= 1;
    if (e) b = rem(mul(b, b), modulus);
  }
  return out;
}

inline bool is_squarefree(const ModPoly& f) {
  const ModPoly df = derivative(f);
  if (df.is_zero()) return f.size() <= 1;
  return gcd(f, df).size() == 1;
}

}  // namespace modp

/// Coefficientwise reduction; throws DegreeDrop when q divides the leading term.
inline ModPoly reduce_mod(const IntPoly& f, std::uint64_t q) {
  if (q < 2 || q >= kMaxModulus) throw std::invalid_argument("modulus must lie in [2, 2^32)");
  std::vector<std::uint64_t> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    out[i] = mpz_fdiv_ui(f[i].get_mpz_t(), static_cast<unsigned long>(q));
  }
  ModPoly r(q, std::move(out));
  if (r.size() != f.size()) {
    throw DegreeDrop("q = " + std::to_string(q) + " divides the leading coefficient");
  }
  return r;
}

struct DegreeMultiset {
  std::uint64_t q = 0;
  std::vector<std::pair<std::size_t, std::size_t>> entries;  // (factor degree, count), ascending
  bool squarefree = true;

  std::size_t total_degree() const {
    std::size_t t = 0;
    for (auto [deg, count] : entries) t += deg * count;
    return t;
  }

  friend bool operator==(const DegreeMultiset&, const DegreeMultiset&) = default;
};

/// Distinct-degree factorization: peels off gcd(f, x^(q^e) - x) for e = 1, 2, ...
inline DegreeMultiset ddf(const ModPoly& f) {
  const std::uint64_t q = f.modulus();
  if (f.size() < 2) throw std::invalid_argument("ddf requires degree >= 1");
  if (!modp::is_squarefree(f)) throw NotSquarefree("f is not squarefree mod " + std::to_string(q));
  DegreeMultiset out{q, {}, true};
  ModPoly rest = modp::monic(f);
  const ModPoly x(q, {0, 1});
  ModPoly frob = x;  // x^(q^e) mod rest
  for (std::size_t e = 1; rest.size() > 1; ++e) {
    if (2 * e > rest.size() - 1) {
      const std::size_t deg = rest.size() - 1;
      out.entries.emplace_back(deg, 1);
      break;
    }
    frob = modp::powmod(frob, q, rest);
    const ModPoly g = modp::gcd(rest, modp::sub(frob, x));
    if (g.size() > 1) {
      out.entries.emplace_back(e, (g.size() - 1) / e);
      rest = modp::divmod(rest, g).first;
      frob = modp::rem(frob, rest);
    }
  }
  return out;
}

/// Bitmask of subset sums of the factor degrees; entry k true if some
/// sub-multiset of factors has total degree k.
inline std::vector<bool> subset_sums(const DegreeMultiset& ms) {
  const std::size_t total = ms.total_degree();
  std::vector<bool> reach(total + 1, false);
  reach[0] = true;
  for (auto [deg, count] : ms.entries) {
    for (std::size_t c = 0; c < count; ++c) {
      for (std::size_t k = total + 1; k-- > deg;) {
        if (reach[k - deg]) reach[k] = true;
      }
    }
  }
  return reach;
}

/// Intersection over primes of the subset sums; any factor of f over Q has a
/// degree in this set.
inline std::vector<std::size_t> possible_factor_degrees(const std::vector<DegreeMultiset>& multisets) {
  if (multisets.empty()) throw NoUsablePrime("possible_factor_degrees needs at least one prime");
  std::vector<bool> acc = subset_sums(multisets.front());
  for (std::size_t i = 1; i < multisets.size(); ++i) {
    const auto next = subset_sums(multisets[i]);
    if (next.size() != acc.size()) throw Error("degree multisets disagree on the total degree");
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] = acc[k] && next[k];
  }
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < acc.size(); ++k) {
    if (acc[k]) out.push_back(k);
  }
  return out;
}

}  // namespace misiu
