#pragma once

/**
 * @file newton.hpp
 * @brief p-adic valuations of coefficients and Newton polygons.
 *
 * The Newton polygon N_p(f) of f = sum a_i b^i is the lower convex hull of
 * the points (i, ord_p(a_i)) with a_i != 0. The principal polygon keeps only
 * the edges of negative slope, starting at the first nonzero coefficient; the
 * x-coordinate of that initial point is the multiplicity of b as a factor
 * ("leading gap") and is never represented as an edge.
 *
 * An edge of run l and height change h constrains the Q_p factorization: every
 * Q_p-irreducible factor whose roots have valuation -h/l has degree divisible
 * by l / gcd(h, l).
 */

#include <algorithm>
#include <compare>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "misiu/errors.hpp"
#include "misiu/poly.hpp"

namespace misiu {

/// ord_p of an integer; +infinity for zero.
class Valuation {
 public:
  constexpr Valuation() = default;  // +infinity
  constexpr explicit Valuation(std::uint64_t v) : value_(v) {}

  static constexpr Valuation infinity() { return Valuation{}; }

  constexpr bool is_infinite() const { return !value_.has_value(); }
  constexpr bool is_finite() const { return value_.has_value(); }

  std::uint64_t value() const {
    if (!value_) throw Error("value() of an infinite valuation");
    return *value_;
  }

  friend constexpr Valuation operator+(Valuation a, Valuation b) {
    if (!a.value_ || !b.value_) return Valuation{};
    return Valuation{*a.value_ + *b.value_};
  }

  friend constexpr bool operator==(const Valuation&, const Valuation&) = default;

  friend constexpr std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
    if (!a.value_ || !b.value_) {
      return static_cast<int>(!a.value_) <=> static_cast<int>(!b.value_);
    }
    return *a.value_ <=> *b.value_;
  }

  std::string to_string() const { return value_ ? std::to_string(*value_) : "inf"; }

 private:
  std::optional<std::uint64_t> value_;
};

inline Valuation ord_p(const BigInt& x, unsigned long p) {
  if (sgn(x) == 0) return Valuation::infinity();
  if (p == 2) return Valuation{mpz_scan1(x.get_mpz_t(), 0)};
  BigInt rest;
  const BigInt prime{p};
  const auto e = mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), prime.get_mpz_t());
  return Valuation{static_cast<std::uint64_t>(e)};
}

inline std::vector<Valuation> coeff_valuations(const IntPoly& f, unsigned long p) {
  std::vector<Valuation> out;
  out.reserve(f.size());
  for (const auto& c : f.coeffs()) out.push_back(ord_p(c, p));
  return out;
}

/// V_p(f): the minimum coefficient valuation (Gauss valuation).
inline Valuation min_valuation(const IntPoly& f, unsigned long p) {
  if (f.is_zero()) throw ZeroPolynomial("V_p of the zero polynomial");
  Valuation best = Valuation::infinity();
  for (const auto& c : f.coeffs()) best = std::min(best, ord_p(c, p));
  return best;
}

struct LatticePoint {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend constexpr bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

/// One polygon edge: run dx > 0, height change dy (negative = descending).
struct Edge {
  std::int64_t dx = 0;
  std::int64_t dy = 0;
  friend constexpr bool operator==(const Edge&, const Edge&) = default;

  /// Smallest degree a Q_p factor attached to this edge can have.
  std::int64_t reduced_run() const {
    return dx / std::gcd(dx, dy < 0 ? -dy : dy);
  }
};

namespace detail {

// Slope comparison a.dy/a.dx < b.dy/b.dx for positive runs.
inline bool slope_less(const Edge& a, const Edge& b) {
  return static_cast<__int128>(a.dy) * b.dx < static_cast<__int128>(b.dy) * a.dx;
}

inline bool slope_equal(const Edge& a, const Edge& b) {
  return static_cast<__int128>(a.dy) * b.dx == static_cast<__int128>(b.dy) * a.dx;
}

inline std::vector<Edge> edges_of(const std::vector<LatticePoint>& vertices) {
  std::vector<Edge> out;
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    out.push_back({vertices[i].x - vertices[i - 1].x, vertices[i].y - vertices[i - 1].y});
  }
  return out;
}

inline void validate_convex(const std::vector<LatticePoint>& vertices, bool principal) {
  if (vertices.empty()) throw Error("polygon needs at least one vertex");
  const auto edges = edges_of(vertices);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].dx <= 0) throw Error("polygon vertices must have strictly increasing x");
    if (principal && edges[i].dy >= 0) throw Error("principal polygon edges must descend");
    if (i > 0 && !slope_less(edges[i - 1], edges[i])) {
      throw Error("polygon slopes must strictly increase");
    }
  }
}

inline std::vector<LatticePoint> vertices_from_edges(LatticePoint start, std::vector<Edge> edges) {
  std::stable_sort(edges.begin(), edges.end(), slope_less);
  std::vector<LatticePoint> out{start};
  std::optional<Edge> pending;
  auto flush = [&] {
    if (!pending) return;
    out.push_back({out.back().x + pending->dx, out.back().y + pending->dy});
    pending.reset();
  };
  for (const Edge& e : edges) {
    if (pending && slope_equal(*pending, e)) {
      pending->dx += e.dx;
      pending->dy += e.dy;
    } else {
      flush();
      pending = e;
    }
  }
  flush();
  return out;
}

inline std::string render_vertices(const std::vector<LatticePoint>& vertices) {
  std::string out = "L(";
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (i) out += ",";
    out += "(" + std::to_string(vertices[i].x) + "," + std::to_string(vertices[i].y) + ")";
  }
  return out + ")";
}

}  // namespace detail

/// Full Newton polygon: its vertices, left to right, collinear points removed.
class NewtonPolygon {
 public:
  NewtonPolygon() = default;
  explicit NewtonPolygon(std::vector<LatticePoint> vertices) : vertices_(std::move(vertices)) {
    detail::validate_convex(vertices_, false);
  }

  const std::vector<LatticePoint>& vertices() const { return vertices_; }
  std::vector<Edge> edges() const { return detail::edges_of(vertices_); }
  LatticePoint initial_point() const { return vertices_.front(); }
  std::string to_string() const { return detail::render_vertices(vertices_); }

  friend bool operator==(const NewtonPolygon&, const NewtonPolygon&) = default;

 private:
  std::vector<LatticePoint> vertices_;
};

/// N_p^-(f): negative-slope edges from the initial point (i_1, v_{i_1}).
class PrincipalPolygon {
 public:
  PrincipalPolygon() = default;
  explicit PrincipalPolygon(std::vector<LatticePoint> vertices) : vertices_(std::move(vertices)) {
    detail::validate_convex(vertices_, true);
  }

  const std::vector<LatticePoint>& vertices() const { return vertices_; }
  std::vector<Edge> edges() const { return detail::edges_of(vertices_); }
  LatticePoint initial_point() const { return vertices_.front(); }
  std::int64_t leading_gap() const { return vertices_.front().x; }
  std::string to_string() const { return detail::render_vertices(vertices_); }

  friend bool operator==(const PrincipalPolygon&, const PrincipalPolygon&) = default;

 private:
  std::vector<LatticePoint> vertices_;
};

inline NewtonPolygon newton_polygon(const IntPoly& f, unsigned long p) {
  if (f.is_zero()) throw ZeroPolynomial("Newton polygon of the zero polynomial");
  std::vector<LatticePoint> hull;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Valuation v = ord_p(f[i], p);
    if (v.is_infinite()) continue;
    const LatticePoint pt{static_cast<std::int64_t>(i), static_cast<std::int64_t>(v.value())};
    while (hull.size() >= 2) {
      const LatticePoint& a = hull[hull.size() - 2];
      const LatticePoint& b = hull.back();
      const __int128 cross = static_cast<__int128>(b.x - a.x) * (pt.y - a.y) -
                             static_cast<__int128>(b.y - a.y) * (pt.x - a.x);
      if (cross > 0) break;
      hull.pop_back();
    }
    hull.push_back(pt);
  }
  return NewtonPolygon(std::move(hull));
}

inline PrincipalPolygon principal_part(const NewtonPolygon& full) {
  const auto& v = full.vertices();
  std::vector<LatticePoint> out{v.front()};
  for (std::size_t i = 1; i < v.size() && v[i].y < v[i - 1].y; ++i) out.push_back(v[i]);
  return PrincipalPolygon(std::move(out));
}

inline PrincipalPolygon principal_polygon(const IntPoly& f, unsigned long p) {
  return principal_part(newton_polygon(f, p));
}

/// Minkowski-style sum: initial points add, edges are merged by slope.
template <class Polygon>
Polygon polygon_sum(std::span<const Polygon> polys) {
  LatticePoint start{0, 0};
  std::vector<Edge> edges;
  for (const auto& poly : polys) {
    start.x += poly.initial_point().x;
    start.y += poly.initial_point().y;
    const auto e = poly.edges();
    edges.insert(edges.end(), e.begin(), e.end());
  }
  return Polygon(detail::vertices_from_edges(start, std::move(edges)));
}

template <class Polygon>
Polygon polygon_sum(std::initializer_list<Polygon> polys) {
  return polygon_sum(std::span<const Polygon>(polys.begin(), polys.size()));
}

struct SegmentConstraint {
  std::int64_t rise = 0;            // valuation drop across the edge
  std::int64_t run = 0;             // horizontal length
  std::int64_t reduced_run = 0;     // run / gcd(rise, run)
  std::int64_t lattice_length = 0;  // gcd(rise, run)
  friend constexpr bool operator==(const SegmentConstraint&, const SegmentConstraint&) = default;
};

inline std::vector<SegmentConstraint> segment_constraints(const PrincipalPolygon& poly) {
  std::vector<SegmentConstraint> out;
  for (const Edge& e : poly.edges()) {
    const std::int64_t rise = -e.dy;
    const std::int64_t g = std::gcd(rise, e.dx);
    out.push_back({rise, e.dx, e.dx / g, g});
  }
  return out;
}

struct FactorDegreeBound {
  std::int64_t bound = 0;
  std::int64_t leading_gap = 0;
};

/// Largest degree of a Q_p-irreducible factor forced by some principal edge.
/// A multi-period edge only guarantees a factor of degree reduced_run.
inline FactorDegreeBound qp_factor_degree_bound(const IntPoly& f, unsigned long p) {
  const PrincipalPolygon poly = principal_polygon(f, p);
  FactorDegreeBound out{0, poly.leading_gap()};
  for (const auto& c : segment_constraints(poly)) out.bound = std::max(out.bound, c.reduced_run);
  return out;
}

/// Degrees d(g) a Q_p-factor g of f can have given only the polygon edges:
/// the sumset over edges of the multiples of reduced_run up to run. Entry k of
/// the result is true when degree k is compatible.
inline std::vector<bool> polygon_compatible_degrees(std::span<const Edge> edges) {
  std::int64_t total = 0;
  for (const Edge& e : edges) total += e.dx;
  std::vector<bool> reach(static_cast<std::size_t>(total) + 1, false);
  reach[0] = true;
  std::int64_t span_so_far = 0;
  for (const Edge& e : edges) {
    const std::int64_t step = e.reduced_run();
    std::vector<bool> next(reach.size(), false);
    for (std::int64_t base = 0; base <= span_so_far; ++base) {
      if (!reach[static_cast<std::size_t>(base)]) continue;
      for (std::int64_t add = 0; add <= e.dx; add += step) next[static_cast<std::size_t>(base + add)] = true;
    }
    span_so_far += e.dx;
    reach = std::move(next);
  }
  return reach;
}

namespace detail {

inline constexpr std::size_t kMaxPowerBoundK = 8;
inline constexpr std::size_t kMaxPowerBoundDegree = 24;

inline std::uint64_t factorial_ord(std::uint64_t n, unsigned long p) {
  std::uint64_t e = 0;
  for (std::uint64_t q = p; q <= n; q *= p) {
    e += n / q;
    if (q > n / p) break;
  }
  return e;
}

}  // namespace detail

/// Lower bound for v_i(f^k): minimum over nondecreasing k-tuples
/// 0 <= a_1 <= ... <= a_k <= deg f with sum i of
/// ord_p(k! / N(a)) + sum_j v_{a_j}(f), where N(a) is the number of
/// order-preserving permutations (product of multiplicity factorials).
inline Valuation power_valuation_bound(const IntPoly& f, unsigned long p, std::size_t k,
                                       std::size_t i) {
  if (f.is_zero()) throw ZeroPolynomial("power_valuation_bound of the zero polynomial");
  const std::size_t n = f.size() - 1;
  if (k == 0) throw Error("power_valuation_bound requires k >= 1");
  if (i > k * n) throw Error("power_valuation_bound requires i <= k * deg f");
  if (k > detail::kMaxPowerBoundK || n > detail::kMaxPowerBoundDegree) {
    throw ResourceGuardError("power_valuation_bound: enumeration capped at k <= 8, deg f <= 24");
  }
  const auto vals = coeff_valuations(f, p);
  const std::uint64_t k_fact = detail::factorial_ord(k, p);
  Valuation best = Valuation::infinity();
  std::vector<std::size_t> tuple(k, 0);

  // Depth-first enumeration: position pos takes values >= tuple[pos-1].
  auto recurse = [&](auto&& self, std::size_t pos, std::size_t lo, std::size_t remaining) -> void {
    if (pos == k) {
      if (remaining != 0) return;
      Valuation total{0};
      std::uint64_t mult_ord = 0;
      std::size_t run = 1;
      for (std::size_t j = 0; j < k; ++j) {
        total = total + vals[tuple[j]];
        if (j + 1 < k && tuple[j + 1] == tuple[j]) {
          ++run;
        } else {
          mult_ord += detail::factorial_ord(run, p);
          run = 1;
        }
      }
      if (total.is_infinite()) return;
      best = std::min(best, Valuation{k_fact - mult_ord} + total);
      return;
    }
    const std::size_t slots = k - pos;
    for (std::size_t a = lo; a <= n && a * slots <= remaining; ++a) {
      if (remaining - a > n * (slots - 1)) continue;
      tuple[pos] = a;
      self(self, pos + 1, a, remaining - a);
    }
  };
  recurse(recurse, 0, 0, i);
  return best;
}

/// {"p", "leading_gap", "vertices": [[x,y],...], "segments": [...]}
inline nlohmann::ordered_json to_json(const PrincipalPolygon& poly, unsigned long p) {
  nlohmann::ordered_json j;
  j["p"] = p;
  j["leading_gap"] = poly.leading_gap();
  auto vertices = nlohmann::ordered_json::array();
  for (const auto& v : poly.vertices()) vertices.push_back({v.x, v.y});
  j["vertices"] = std::move(vertices);
  auto segments = nlohmann::ordered_json::array();
  for (const auto& c : segment_constraints(poly)) {
    segments.push_back(nlohmann::ordered_json{{"rise", c.rise},
                                              {"run", c.run},
                                              {"reduced_run", c.reduced_run},
                                              {"lattice_length", c.lattice_length}});
  }
  j["segments"] = std::move(segments);
  return j;
}

/// Full polygon; edges carry the signed height change dy.
inline nlohmann::ordered_json to_json(const NewtonPolygon& poly, unsigned long p) {
  nlohmann::ordered_json j;
  j["p"] = p;
  j["leading_gap"] = poly.initial_point().x;
  auto vertices = nlohmann::ordered_json::array();
  for (const auto& v : poly.vertices()) vertices.push_back({v.x, v.y});
  j["vertices"] = std::move(vertices);
  auto edges = nlohmann::ordered_json::array();
  for (const Edge& e : poly.edges()) {
    edges.push_back(nlohmann::ordered_json{{"run", e.dx}, {"dy", e.dy}, {"reduced_run", e.reduced_run()}});
  }
  j["edges"] = std::move(edges);
  return j;
}

/// One vertex per row: "x,y".
inline std::string to_csv(const std::vector<LatticePoint>& vertices) {
  std::string out = "x,y\n";
  for (const auto& v : vertices) out += std::to_string(v.x) + "," + std::to_string(v.y) + "\n";
  return out;
}

struct PadicRoot {
  std::int64_t valuation = 0;  // root = p^valuation * unit
  BigInt unit;                 // the unit part modulo p^precision
};

/// Simple roots of f in Q_p, found per integer-slope edge of N_p(f): the
/// edge with slope s holds the roots of valuation -s; rescaling b = p^(-s) y
/// turns them into unit roots whose residues mod p are Hensel-lifted to
/// p^precision. The root b = 0 is reported when b divides f exactly once.
inline std::vector<PadicRoot> padic_simple_roots(const IntPoly& f, unsigned long p,
                                                 std::size_t precision) {
  if (f.is_zero()) throw ZeroPolynomial("p-adic roots of the zero polynomial");
  if (precision < 1) throw Error("padic_simple_roots requires precision >= 1");
  std::vector<PadicRoot> roots;
  const std::size_t gap = f.lowest_index();
  if (gap >= 2) throw PrecisionTooLow("b = 0 is a repeated root");
  if (gap == 1) roots.push_back({0, BigInt(0)});
  const IntPoly h = shift_down(f, gap);
  if (h.size() <= 1) return roots;

  const BigInt prime{p};
  BigInt modulus;
  mpz_pow_ui(modulus.get_mpz_t(), prime.get_mpz_t(), precision);
  const std::size_t n = h.size() - 1;
  const NewtonPolygon poly = newton_polygon(h, p);
  for (const Edge& e : poly.edges()) {
    if (e.dy % e.dx != 0) continue;
    const std::int64_t slope = e.dy / e.dx;
    const std::int64_t lambda = -slope;
    // g(y) = p^(-c) * h(p^lambda y), with c chosen to make g primitive at p.
    std::vector<BigInt> scaled(h.size());
    for (std::size_t i = 0; i <= n; ++i) {
      const std::int64_t shift = lambda >= 0 ? lambda * static_cast<std::int64_t>(i)
                                             : -lambda * static_cast<std::int64_t>(n - i);
      BigInt factor;
      mpz_pow_ui(factor.get_mpz_t(), prime.get_mpz_t(), static_cast<unsigned long>(shift));
      scaled[i] = h[i] * factor;
    }
    IntPoly g(std::move(scaled));
    BigInt strip;
    mpz_pow_ui(strip.get_mpz_t(), prime.get_mpz_t(), min_valuation(g, p).value());
    g = exact_div(g, strip);
    const IntPoly dg = derivative(g);
    for (unsigned long r = 1; r < p; ++r) {
      const BigInt x0{r};
      if (!mpz_divisible_ui_p(BigInt(evaluate(g, x0)).get_mpz_t(), p)) continue;
      if (mpz_divisible_ui_p(BigInt(evaluate(dg, x0)).get_mpz_t(), p)) {
        throw PrecisionTooLow("residue " + std::to_string(r) + " is a repeated root for slope " +
                              std::to_string(slope));
      }
      // Newton iteration doubles the p-adic precision each step.
      BigInt x = x0;
      BigInt mod = prime;
      while (mod < modulus) {
        mod = mod * mod;
        if (mod > modulus) mod = modulus;
        BigInt fx = evaluate(g, x) % mod;
        BigInt dfx = evaluate(dg, x) % mod;
        BigInt inv;
        if (mpz_invert(inv.get_mpz_t(), dfx.get_mpz_t(), mod.get_mpz_t()) == 0) {
          throw PrecisionTooLow("derivative lost invertibility while lifting");
        }
        x = x - fx * inv;
        mpz_mod(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
      }
      BigInt check = evaluate(g, x);
      if (!mpz_divisible_p(check.get_mpz_t(), modulus.get_mpz_t())) {
        throw Error("Hensel lift failed to converge");
      }
      roots.push_back({lambda, x});
    }
  }
  return roots;
}

inline std::size_t padic_root_count(const IntPoly& f, unsigned long p, std::size_t precision = 20) {
  return padic_simple_roots(f, p, precision).size();
}

}  // namespace misiu
