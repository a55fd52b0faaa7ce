#pragma once

/**
 * @file poly.hpp
 * @brief Dense univariate polynomials over arbitrary-precision integers.
 *
 * Coefficients are stored in ascending order, index i holding the
 * coefficient of b^i. The highest stored coefficient is always nonzero; the
 * zero polynomial has no coefficients and degree minus infinity.
 *
 * Values are immutable once built, so they can be shared between threads.
 */

#include <gmp.h>
#include <gmpxx.h>

#include <algorithm>
#include <atomic>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "misiu/errors.hpp"

namespace misiu {

static_assert(GMP_NAIL_BITS == 0, "Kronecker packing assumes nail-free limbs");

using BigInt = mpz_class;

/// Polynomial degree; the default-constructed value is minus infinity.
class Degree {
 public:
  constexpr Degree() = default;
  constexpr explicit Degree(std::size_t value) : value_(value) {}

  static constexpr Degree minus_infinity() { return Degree{}; }

  constexpr bool is_minus_infinity() const { return !value_.has_value(); }
  constexpr bool is_finite() const { return value_.has_value(); }

  /// Throws ZeroPolynomial when called on minus infinity.
  std::size_t value() const {
    if (!value_) throw ZeroPolynomial("degree of the zero polynomial is -infinity");
    return *value_;
  }

  friend constexpr Degree operator+(Degree a, Degree b) {
    if (!a.value_ || !b.value_) return Degree{};
    return Degree{*a.value_ + *b.value_};
  }
  // std::optional orders nullopt below every engaged value, which is exactly
  // how -infinity should compare.
  friend constexpr auto operator<=>(const Degree&, const Degree&) = default;

  std::string to_string() const {
    return value_ ? std::to_string(*value_) : std::string("-inf");
  }

 private:
  std::optional<std::size_t> value_;
};

inline std::ostream& operator<<(std::ostream& os, const Degree& d) { return os << d.to_string(); }

/// Size guard: products whose (degree + 1) * coefficient bit length would
/// exceed max_degree_bits, or whose degree exceeds max_degree, are refused.
struct SizeLimits {
  std::uint64_t max_degree = std::uint64_t{1} << 22;
  std::uint64_t max_degree_bits = std::uint64_t{1} << 34;
};

namespace detail {
inline std::atomic<std::uint64_t> g_max_degree{SizeLimits{}.max_degree};
inline std::atomic<std::uint64_t> g_max_degree_bits{SizeLimits{}.max_degree_bits};
}  // namespace detail

inline void set_size_limits(const SizeLimits& limits) {
  detail::g_max_degree.store(limits.max_degree);
  detail::g_max_degree_bits.store(limits.max_degree_bits);
}

inline SizeLimits size_limits() {
  return SizeLimits{detail::g_max_degree.load(), detail::g_max_degree_bits.load()};
}

/// Restores the previous limits on scope exit.
class ScopedSizeLimits {
 public:
  explicit ScopedSizeLimits(const SizeLimits& limits) : saved_(size_limits()) {
    set_size_limits(limits);
  }
  ~ScopedSizeLimits() { set_size_limits(saved_); }
  ScopedSizeLimits(const ScopedSizeLimits&) = delete;
  ScopedSizeLimits& operator=(const ScopedSizeLimits&) = delete;

 private:
  SizeLimits saved_;
};

inline void guard_size(std::uint64_t degree, std::uint64_t coeff_bits, const char* what) {
  const SizeLimits limits = size_limits();
  const unsigned __int128 volume =
      static_cast<unsigned __int128>(degree + 1) * static_cast<unsigned __int128>(coeff_bits);
  if (degree > limits.max_degree || volume > limits.max_degree_bits) {
    throw ResourceGuardError(std::string(what) + ": result of degree " + std::to_string(degree) +
                             " with ~" + std::to_string(coeff_bits) +
                             "-bit coefficients exceeds the size cap");
  }
}

inline std::size_t bit_length(const BigInt& x) {
  return sgn(x) == 0 ? 0 : mpz_sizeinbase(x.get_mpz_t(), 2);
}

inline std::size_t ceil_log2(std::size_t n) {
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  return bits;
}

class IntPoly {
 public:
  IntPoly() = default;

  /// Ascending coefficients; trailing zeros are stripped.
  explicit IntPoly(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

  IntPoly(std::initializer_list<long> coeffs) {
    coeffs_.reserve(coeffs.size());
    for (long c : coeffs) coeffs_.emplace_back(c);
    normalize();
  }

  static IntPoly constant(const BigInt& c) { return IntPoly(std::vector<BigInt>{c}); }

  static IntPoly monomial(const BigInt& c, std::size_t k) {
    if (sgn(c) == 0) return {};
    std::vector<BigInt> coeffs(k + 1);
    coeffs[k] = c;
    return IntPoly(std::move(coeffs));
  }

  const std::vector<BigInt>& coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  bool is_zero() const { return coeffs_.empty(); }

  Degree degree() const { return coeffs_.empty() ? Degree{} : Degree{coeffs_.size() - 1}; }

  /// Coefficient of b^i; zero beyond the stored range.
  const BigInt& operator[](std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : zero(); }

  const BigInt& leading() const {
    if (coeffs_.empty()) throw ZeroPolynomial("leading coefficient of the zero polynomial");
    return coeffs_.back();
  }

  /// Index of the lowest nonzero coefficient (the multiplicity of b as a factor).
  std::size_t lowest_index() const {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (sgn(coeffs_[i]) != 0) return i;
    }
    throw ZeroPolynomial("lowest index of the zero polynomial");
  }

  std::size_t max_bits() const {
    std::size_t bits = 0;
    for (const auto& c : coeffs_) bits = std::max(bits, bit_length(c));
    return bits;
  }

  friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.coeffs_ == b.coeffs_; }

  friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    const IntPoly& longer = a.size() >= b.size() ? a : b;
    const IntPoly& shorter = a.size() >= b.size() ? b : a;
    std::vector<BigInt> out = longer.coeffs_;
    for (std::size_t i = 0; i < shorter.size(); ++i) out[i] += shorter.coeffs_[i];
    return IntPoly(std::move(out));
  }

  friend IntPoly operator-(const IntPoly& a) {
    std::vector<BigInt> out = a.coeffs_;
    for (auto& c : out) c = -c;
    return IntPoly(std::move(out));
  }

  friend IntPoly operator-(const IntPoly& a, const IntPoly& b) {
    std::vector<BigInt> out = a.coeffs_;
    if (out.size() < b.size()) out.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b.coeffs_[i];
    return IntPoly(std::move(out));
  }

  friend IntPoly operator*(const BigInt& c, const IntPoly& a) {
    if (sgn(c) == 0) return {};
    std::vector<BigInt> out = a.coeffs_;
    for (auto& x : out) x *= c;
    return IntPoly(std::move(out));
  }

  friend IntPoly operator*(const IntPoly& a, const IntPoly& b);

 private:
  static const BigInt& zero() {
    static const BigInt z{0};
    return z;
  }

  void normalize() {
    while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
  }

  std::vector<BigInt> coeffs_;
};

/// b
inline IntPoly variable() { return IntPoly{0, 1}; }

namespace detail {

constexpr std::size_t kLimbBits = GMP_NUMB_BITS;
constexpr std::size_t kKroneckerThreshold = 12;

/// Packs signed coefficients as sum c_i 2^(i * slot_limbs * 64).
inline BigInt kronecker_pack(const std::vector<BigInt>& coeffs, std::size_t slot_limbs) {
  const std::size_t total = coeffs.size() * slot_limbs;
  BigInt pos;
  BigInt neg;
  mp_limb_t* pos_limbs = mpz_limbs_write(pos.get_mpz_t(), static_cast<mp_size_t>(total));
  mp_limb_t* neg_limbs = mpz_limbs_write(neg.get_mpz_t(), static_cast<mp_size_t>(total));
  std::fill_n(pos_limbs, total, mp_limb_t{0});
  std::fill_n(neg_limbs, total, mp_limb_t{0});
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    mpz_srcptr z = coeffs[i].get_mpz_t();
    const int sign = mpz_sgn(z);
    if (sign == 0) continue;
    const mp_limb_t* src = mpz_limbs_read(z);
    mp_limb_t* dst = (sign > 0 ? pos_limbs : neg_limbs) + i * slot_limbs;
    std::copy_n(src, mpz_size(z), dst);
  }
  mpz_limbs_finish(pos.get_mpz_t(), static_cast<mp_size_t>(total));
  mpz_limbs_finish(neg.get_mpz_t(), static_cast<mp_size_t>(total));
  return pos - neg;
}

/// Inverse of kronecker_pack for `count` balanced digits of slot_limbs limbs.
inline std::vector<BigInt> kronecker_unpack(const BigInt& packed, std::size_t count,
                                            std::size_t slot_limbs) {
  std::vector<BigInt> out(count);
  mpz_srcptr z = packed.get_mpz_t();
  const int sign = mpz_sgn(z);
  const std::size_t n = mpz_size(z);
  const mp_limb_t* src = mpz_limbs_read(z);
  const std::size_t slot_bits = slot_limbs * kLimbBits;
  BigInt modulus;
  mpz_setbit(modulus.get_mpz_t(), slot_bits);
  bool carry = false;
  for (std::size_t i = 0; i < count; ++i) {
    BigInt chunk;
    const std::size_t start = i * slot_limbs;
    if (start < n) {
      const std::size_t avail = std::min(slot_limbs, n - start);
      mp_limb_t* dst = mpz_limbs_write(chunk.get_mpz_t(), static_cast<mp_size_t>(avail));
      std::copy_n(src + start, avail, dst);
      mpz_limbs_finish(chunk.get_mpz_t(), static_cast<mp_size_t>(avail));
    }
    if (carry) chunk += 1;
    // chunk lies in [0, 2^slot_bits]; the upper half encodes negative digits.
    if (sgn(chunk) != 0 && mpz_sizeinbase(chunk.get_mpz_t(), 2) >= slot_bits) {
      chunk -= modulus;
      carry = true;
    } else {
      carry = false;
    }
    out[i] = sign < 0 ? BigInt(-chunk) : chunk;
  }
  return out;
}

}  // namespace detail

inline IntPoly mul_schoolbook(const IntPoly& f, const IntPoly& g) {
  if (f.is_zero() || g.is_zero()) return {};
  guard_size(f.size() + g.size() - 2, f.max_bits() + g.max_bits(), "mul");
  std::vector<BigInt> out(f.size() + g.size() - 1);
  for (std::size_t i = 0; i < f.size(); ++i) {
    mpz_srcptr a = f[i].get_mpz_t();
    if (mpz_sgn(a) == 0) continue;
    for (std::size_t j = 0; j < g.size(); ++j) {
      mpz_addmul(out[i + j].get_mpz_t(), a, g[j].get_mpz_t());
    }
  }
  return IntPoly(std::move(out));
}

/// Multiplication through a single big-integer product (Kronecker substitution).
inline IntPoly mul_kronecker(const IntPoly& f, const IntPoly& g) {
  if (f.is_zero() || g.is_zero()) return {};
  const std::size_t fbits = f.max_bits();
  const std::size_t gbits = g.max_bits();
  const std::size_t coeff_bits = fbits + gbits + ceil_log2(std::min(f.size(), g.size())) + 2;
  guard_size(f.size() + g.size() - 2, coeff_bits, "mul");
  const std::size_t slot_limbs = (coeff_bits + detail::kLimbBits - 1) / detail::kLimbBits;
  const BigInt a = detail::kronecker_pack(f.coeffs(), slot_limbs);
  BigInt product;
  if (&f == &g) {
    product = a * a;
  } else {
    product = a * detail::kronecker_pack(g.coeffs(), slot_limbs);
  }
  return IntPoly(detail::kronecker_unpack(product, f.size() + g.size() - 1, slot_limbs));
}

inline IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  if (std::min(a.size(), b.size()) < detail::kKroneckerThreshold) return mul_schoolbook(a, b);
  return mul_kronecker(a, b);
}

inline IntPoly mul(const IntPoly& f, const IntPoly& g) { return f * g; }

inline IntPoly pow(const IntPoly& f, unsigned long k) {
  IntPoly result = IntPoly::constant(1);
  if (k == 0) return result;
  IntPoly base = f;
  bool first = true;
  while (true) {
    if (k & 1UL) {
      result = first ? base : result * base;
      first = false;
    }
    k >>= 1;
    if (k == 0) break;
    base = base * base;
  }
  return result;
}

/// Returns q with f == q * g, or throws NotDivisible.
inline IntPoly exact_div(const IntPoly& f, const IntPoly& g) {
  if (g.is_zero()) throw ZeroPolynomial("exact_div by the zero polynomial");
  if (f.is_zero()) return {};
  const std::size_t df = f.size() - 1;
  const std::size_t dg = g.size() - 1;
  if (df < dg) throw NotDivisible("exact_div: dividend degree below divisor degree");
  std::vector<BigInt> rem = f.coeffs();
  std::vector<BigInt> quot(df - dg + 1);
  mpz_srcptr lead = g.leading().get_mpz_t();
  for (std::size_t k = df - dg + 1; k-- > 0;) {
    mpz_ptr top = rem[k + dg].get_mpz_t();
    if (mpz_sgn(top) == 0) continue;
    if (!mpz_divisible_p(top, lead)) {
      throw NotDivisible("exact_div: leading coefficient does not divide at b^" +
                         std::to_string(k + dg));
    }
    mpz_ptr q = quot[k].get_mpz_t();
    mpz_divexact(q, top, lead);
    for (std::size_t j = 0; j < dg; ++j) {
      mpz_submul(rem[k + j].get_mpz_t(), q, g[j].get_mpz_t());
    }
    mpz_set_ui(top, 0);
  }
  for (std::size_t i = 0; i < dg; ++i) {
    if (sgn(rem[i]) != 0) throw NotDivisible("exact_div: nonzero remainder");
  }
  return IntPoly(std::move(quot));
}

inline IntPoly exact_div(const IntPoly& f, const BigInt& c) {
  if (sgn(c) == 0) throw ZeroPolynomial("exact_div by zero");
  std::vector<BigInt> out = f.coeffs();
  for (auto& x : out) {
    if (!mpz_divisible_p(x.get_mpz_t(), c.get_mpz_t())) {
      throw NotDivisible("exact_div: scalar does not divide every coefficient");
    }
    mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), c.get_mpz_t());
  }
  return IntPoly(std::move(out));
}

/// Nonnegative gcd of the coefficients; 0 for the zero polynomial.
inline BigInt content(const IntPoly& f) {
  BigInt g = 0;
  for (const auto& c : f.coeffs()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

inline IntPoly derivative(const IntPoly& f) {
  if (f.size() <= 1) return {};
  std::vector<BigInt> out(f.size() - 1);
  for (std::size_t i = 1; i < f.size(); ++i) out[i - 1] = f[i] * static_cast<unsigned long>(i);
  return IntPoly(std::move(out));
}

/// Divides by b^k; the k lowest coefficients must vanish.
inline IntPoly shift_down(const IntPoly& f, std::size_t k) {
  if (k == 0 || f.is_zero()) return f;
  for (std::size_t i = 0; i < std::min(k, f.size()); ++i) {
    if (sgn(f[i]) != 0) throw NotDivisible("shift_down: b^k does not divide");
  }
  if (k >= f.size()) return {};
  return IntPoly(std::vector<BigInt>(f.coeffs().begin() + static_cast<std::ptrdiff_t>(k),
                                     f.coeffs().end()));
}

inline BigInt evaluate(const IntPoly& f, const BigInt& x) {
  BigInt acc = 0;
  for (std::size_t i = f.size(); i-- > 0;) acc = acc * x + f[i];
  return acc;
}

/// Human-readable rendering, highest degree first, e.g. "27*b^3 + 81*b^2".
inline std::string to_string(const IntPoly& f, const std::string& var = "b") {
  if (f.is_zero()) return "0";
  std::string out;
  for (std::size_t i = f.size(); i-- > 0;) {
    const BigInt& c = f[i];
    if (sgn(c) == 0) continue;
    BigInt mag = abs(c);
    if (out.empty()) {
      if (sgn(c) < 0) out += "-";
    } else {
      out += sgn(c) < 0 ? " - " : " + ";
    }
    if (i == 0 || mag != 1) {
      out += mag.get_str();
      if (i > 0) out += "*";
    }
    if (i >= 1) out += var;
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const IntPoly& f) { return os << to_string(f); }

/// {"degree": n | null, "coeffs": [decimal strings, ascending]}
inline nlohmann::ordered_json to_json(const IntPoly& f) {
  nlohmann::ordered_json j;
  if (f.is_zero()) {
    j["degree"] = nullptr;
  } else {
    j["degree"] = f.size() - 1;
  }
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : f.coeffs()) arr.push_back(c.get_str());
  j["coeffs"] = std::move(arr);
  return j;
}

inline IntPoly poly_from_json(const nlohmann::ordered_json& j) {
  std::vector<BigInt> coeffs;
  for (const auto& c : j.at("coeffs")) coeffs.emplace_back(c.get<std::string>(), 10);
  IntPoly f(std::move(coeffs));
  const auto& deg = j.at("degree");
  const bool consistent = deg.is_null() ? f.is_zero() : (!f.is_zero() && deg.get<std::size_t>() == f.size() - 1);
  if (!consistent) throw Error("poly_from_json: degree field does not match coefficients");
  return f;
}

}  // namespace misiu
