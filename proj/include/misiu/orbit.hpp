#pragma once

/**
 * @file orbit.hpp
 * @brief Forward orbit of [1,1] under [x,y] -> [(b+1)d x y^(d-1), x^d + (d-1) y^d]
 *        and the Misiurewicz polynomials G_m in Z[b] for the portrait (m,1).
 *
 * The parameter b is related to the family parameter a of
 * phi_a(z) = a z / (z^d + d - 1) by a = (b+1)d. The substitution is affine,
 * so degree and irreducibility over Q carry over to the Z[a] polynomial,
 * which is never built here.
 *
 * With sigma_m = (b+1)d s_{m-1}^d and tau_m = s_m - sigma_m,
 *
 *   bd G_m = (b+1)^d d^d s_{m-1}^{d(d-1)}
 *            - (bd+1) (s_m^d - sigma_m^d) / (s_m - sigma_m)
 *
 * and G_m = tau_{m+1} / (bd tau_m). Both routes are implemented and must agree.
 */

#include <cstdint>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "misiu/errors.hpp"
#include "misiu/poly.hpp"

namespace misiu {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    if (n % q == 0) return false;
  }
  return true;
}

/// Checked integer power; throws std::overflow_error past 63 bits.
inline std::int64_t ipow(std::int64_t base, std::uint64_t exp) {
  std::int64_t out = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (__builtin_mul_overflow(out, base, &out)) throw std::overflow_error("ipow overflow");
  }
  return out;
}

/// D_m = 1 + d + ... + d^(m-1) = (d^m - 1)/(d - 1).
inline std::int64_t repunit(std::int64_t d, std::uint64_t m) { return (ipow(d, m) - 1) / (d - 1); }

struct FamilyParams {
  std::uint64_t d = 3;
  std::uint64_t m = 1;
  std::uint64_t p = 0;  // 0 means "same as d"

  std::uint64_t polygon_prime() const { return p == 0 ? d : p; }

  void validate() const {
    if (d < 3 || !is_prime(d)) throw std::invalid_argument("d must be a prime >= 3");
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    if (!is_prime(polygon_prime())) throw std::invalid_argument("p must be prime");
  }
};

inline void require_family_degree(std::uint64_t d) {
  if (d < 3 || !is_prime(d)) throw std::invalid_argument("d must be a prime >= 3, got " + std::to_string(d));
}

struct DegreePrediction {
  std::int64_t deg_r = 0;
  std::int64_t deg_s = 0;
  std::int64_t i = 0;  // n = d*i + j
  std::int64_t j = 0;  // j in {2, ..., d+1}
  friend bool operator==(const DegreePrediction&, const DegreePrediction&) = default;
};

/// Closed-form deg r_n, deg s_n for n >= 2.
inline DegreePrediction expected_degrees(std::int64_t d, std::int64_t n) {
  if (n < 2) throw std::invalid_argument("expected_degrees requires n >= 2");
  const std::int64_t j = (n - 2) % d + 2;
  const std::int64_t i = (n - j) / d;
  const std::int64_t deg_s =
      (ipow(d, static_cast<std::uint64_t>(n + d - 1)) - ipow(d, static_cast<std::uint64_t>(j - 1))) /
      (ipow(d, static_cast<std::uint64_t>(d)) - 1);
  return {deg_s - (d - j), deg_s, i, j};
}

struct SigmaTauDegrees {
  std::int64_t deg_sigma = 0;
  std::int64_t deg_tau = 0;
  friend bool operator==(const SigmaTauDegrees&, const SigmaTauDegrees&) = default;
};

/// Closed-form deg sigma_m, deg tau_m for m >= 2.
inline SigmaTauDegrees expected_sigma_tau_degrees(std::int64_t d, std::int64_t m) {
  if (m < 2) throw std::invalid_argument("expected_sigma_tau_degrees requires m >= 2");
  const std::int64_t top = ipow(d, static_cast<std::uint64_t>(m + d - 1));
  const std::int64_t denom = ipow(d, static_cast<std::uint64_t>(d)) - 1;
  if (m % d == 2 % d) {
    return {(top - ipow(d, static_cast<std::uint64_t>(d + 1))) / denom + 1, (top - d) / denom};
  }
  const std::int64_t j = expected_degrees(d, m).j;
  const std::int64_t deg = (top - ipow(d, static_cast<std::uint64_t>(j - 1))) / denom + 1;
  return {deg, deg};
}

enum class Route { direct, via_tau, literal };

inline std::string to_string(Route r) {
  switch (r) {
    case Route::direct: return "direct";
    case Route::via_tau: return "via_tau";
    case Route::literal: return "literal";
  }
  return "?";
}

struct MisiurewiczPoly {
  std::uint64_t d = 0;
  std::uint64_t m = 0;
  IntPoly poly;
  Route construction_route = Route::direct;
};

/// F_0 .. F_{d-1} with bd G_m = -(F_0 + ... + F_{d-1}).
struct DecompositionTerms {
  std::vector<IntPoly> terms;
};

struct OrbitEntry {
  IntPoly r;
  IntPoly s;
};

struct OrbitTable {
  std::uint64_t d = 0;
  std::vector<OrbitEntry> entries;  // index n = 0..N
};

/// Test hook: perturbs s_n by +1 in its constant coefficient.
struct FaultInjection {
  std::optional<std::size_t> corrupt_s;
};

/// Memoized orbit and Misiurewicz objects for one d. Thread-safe: each object
/// is computed once, concurrent requests wait on the same shared future.
class Family {
 public:
  explicit Family(std::uint64_t d, FaultInjection fault = {}) : d_(d), fault_(fault) {
    require_family_degree(d);
  }

  Family(const Family&) = delete;
  Family& operator=(const Family&) = delete;

  std::uint64_t d() const { return d_; }

  const IntPoly& r(std::size_t n) {
    return memo(Kind::r, n, [this, n] {
      if (n == 0) return IntPoly::constant(1);
      return base_linear() * r(n - 1) * pow(s(n - 1), d_ - 1);
    });
  }

  const IntPoly& s(std::size_t n) {
    return memo(Kind::s, n, [this, n] {
      IntPoly out = n == 0 ? IntPoly::constant(1)
                           : pow(r(n - 1), d_) + BigInt(d_ - 1) * pow(s(n - 1), d_);
      if (fault_.corrupt_s && *fault_.corrupt_s == n) out = out + IntPoly::constant(1);
      return out;
    });
  }

  /// sigma_m = (b+1) d s_{m-1}^d, m >= 1.
  const IntPoly& sigma(std::size_t m) {
    require_m(m);
    return memo(Kind::sigma, m, [this, m] { return base_linear() * pow(s(m - 1), d_); });
  }

  /// tau_m = s_m - sigma_m, m >= 1.
  const IntPoly& tau(std::size_t m) {
    require_m(m);
    return memo(Kind::tau, m, [this, m] { return s(m) - sigma(m); });
  }

  const IntPoly& misiurewicz(std::size_t m, Route route = Route::direct) {
    require_m(m);
    switch (route) {
      case Route::direct: return memo(Kind::g_direct, m, [this, m] { return build_direct(m); });
      case Route::via_tau: return memo(Kind::g_via_tau, m, [this, m] { return build_via_tau(m); });
      case Route::literal: return memo(Kind::g_literal, m, [this, m] { return build_literal(m); });
    }
    throw std::logic_error("unknown route");
  }

  DecompositionTerms decomposition_terms(std::size_t m) {
    require_m(m);
    const IntPoly& sg = sigma(m);
    const IntPoly& tu = tau(m);
    const IntPoly bd1{1, static_cast<long>(d_)};
    DecompositionTerms out;
    for (std::uint64_t k = 0; k + 1 < d_; ++k) {
      out.terms.push_back(binomial(d_, k) * (bd1 * pow(sg, k) * pow(tu, d_ - 1 - k)));
    }
    out.terms.push_back(IntPoly::monomial(BigInt(d_ * (d_ - 1)), 1) * pow(sg, d_ - 1));
    return out;
  }

  OrbitTable table(std::size_t n_max) {
    OrbitTable out{d_, {}};
    for (std::size_t n = 0; n <= n_max; ++n) out.entries.push_back({r(n), s(n)});
    return out;
  }

 private:
  enum class Kind { r, s, sigma, tau, g_direct, g_via_tau, g_literal };

  static void require_m(std::size_t m) {
    if (m < 1) throw std::invalid_argument("m must be >= 1");
  }

  static BigInt binomial(std::uint64_t n, std::uint64_t k) {
    BigInt out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
  }

  /// (b+1) d
  IntPoly base_linear() const {
    const long d = static_cast<long>(d_);
    return IntPoly{d, d};
  }

  /// b d
  IntPoly bd() const { return IntPoly::monomial(BigInt(d_), 1); }

  /// (b+1)^d d^d s_{m-1}^{d(d-1)}
  IntPoly leading_term(std::size_t m) {
    return pow(base_linear(), d_) * pow(s(m - 1), d_ * (d_ - 1));
  }

  IntPoly build_direct(std::size_t m) {
    const IntPoly& sm = s(m);
    const IntPoly& sg = sigma(m);
    // (s^d - sigma^d)/(s - sigma) as the geometric sum, via Horner.
    IntPoly geometric = IntPoly::constant(1);
    IntPoly sigma_power = IntPoly::constant(1);
    for (std::uint64_t k = 1; k < d_; ++k) {
      sigma_power = sigma_power * sg;
      geometric = geometric * sm + sigma_power;
    }
    const IntPoly bd1{1, static_cast<long>(d_)};
    return exact_div(leading_term(m) - bd1 * geometric, bd());
  }

  IntPoly build_literal(std::size_t m) {
    const IntPoly& sm = s(m);
    const IntPoly& sg = sigma(m);
    const IntPoly quotient = exact_div(pow(sm, d_) - pow(sg, d_), sm - sg);
    const IntPoly bd1{1, static_cast<long>(d_)};
    return exact_div(leading_term(m) - bd1 * quotient, bd());
  }

  IntPoly build_via_tau(std::size_t m) { return exact_div(exact_div(tau(m + 1), tau(m)), bd()); }

  template <class Compute>
  const IntPoly& memo(Kind kind, std::size_t index, Compute&& compute) {
    std::promise<IntPoly> promise;
    std::shared_future<IntPoly> future;
    bool owner = false;
    {
      std::lock_guard lock(mutex_);
      auto [it, inserted] = cache_.try_emplace({kind, index});
      if (inserted) {
        it->second = promise.get_future().share();
        owner = true;
      }
      future = it->second;
    }
    if (owner) {
      try {
        promise.set_value(compute());
      } catch (...) {
        promise.set_exception(std::current_exception());
      }
    }
    // The cached copy keeps the shared state, and thus the reference, alive.
    return future.get();
  }

  std::uint64_t d_;
  FaultInjection fault_;
  std::mutex mutex_;
  std::map<std::pair<Kind, std::size_t>, std::shared_future<IntPoly>> cache_;
};

inline OrbitTable orbit(std::uint64_t d, std::size_t n_max) {
  Family family(d);
  return family.table(n_max);
}

inline std::pair<IntPoly, IntPoly> sigma_tau(std::uint64_t d, std::size_t m) {
  Family family(d);
  return {family.sigma(m), family.tau(m)};
}

inline MisiurewiczPoly misiurewicz_direct(std::uint64_t d, std::size_t m) {
  Family family(d);
  return {d, m, family.misiurewicz(m, Route::direct), Route::direct};
}

inline MisiurewiczPoly misiurewicz_via_tau(std::uint64_t d, std::size_t m) {
  Family family(d);
  return {d, m, family.misiurewicz(m, Route::via_tau), Route::via_tau};
}

inline DecompositionTerms decomposition_terms(std::uint64_t d, std::size_t m) {
  Family family(d);
  return family.decomposition_terms(m);
}

}  // namespace misiu
