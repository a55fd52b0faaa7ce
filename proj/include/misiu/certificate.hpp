#pragma once

/**
 * @file certificate.hpp
 * @brief Irreducibility certificates over Q from Newton polygons at p = d
 *        and factor-degree multisets modulo auxiliary primes.
 *
 * A factor g of f over Q factors further over Q_p, so deg g must be a sum
 * of Q_p-factor degrees. The Newton polygon restricts those degrees
 * (polygon_compatible_degrees), and every usable auxiliary prime q restricts
 * them again to subset sums of the degrees of f mod q. When only 0 and deg f
 * survive, f is irreducible over Q.
 *
 * Content and the factor b^gap are split off first and recorded.
 */

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "misiu/errors.hpp"
#include "misiu/modp.hpp"
#include "misiu/newton.hpp"
#include "misiu/orbit.hpp"
#include "misiu/poly.hpp"

namespace misiu {

enum class Verdict { IrreducibleOverQ, IrreducibleOverQd, LargeFactorOnly, Inconclusive, Reducible };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::IrreducibleOverQ: return "IrreducibleOverQ";
    case Verdict::IrreducibleOverQd: return "IrreducibleOverQd";
    case Verdict::LargeFactorOnly: return "LargeFactorOnly";
    case Verdict::Inconclusive: return "Inconclusive";
    case Verdict::Reducible: return "Reducible";
  }
  return "?";
}

struct SkippedPrime {
  std::uint64_t q = 0;
  std::string reason;  // "degree_drop" or "not_squarefree"
};

struct CertifyOptions {
  std::vector<std::uint64_t> primes;  // explicit auxiliary primes; empty = scan
  std::size_t usable_primes = 8;
  std::size_t widened_usable_primes = 32;
  std::uint64_t scan_limit = 100000;  // largest auxiliary prime tried when scanning
  std::size_t precision = 20;         // p-adic root lifting precision
};

struct IrreducibilityCertificate {
  std::uint64_t d = 0;
  std::uint64_t m = 0;
  std::uint64_t p = 0;  // polygon prime
  std::size_t degree = 0;
  BigInt content;            // signed, leading coefficient of the primitive part is > 0
  std::size_t leading_gap = 0;
  std::size_t primitive_degree = 0;  // degree after removing b^leading_gap
  std::int64_t polygon_bound = 0;
  std::vector<Edge> polygon_edges;  // full N_p edges of the primitive part
  std::vector<std::size_t> polygon_compatible;
  std::vector<DegreeMultiset> per_prime;
  std::vector<SkippedPrime> skipped;
  std::vector<std::size_t> candidate_degrees;
  std::vector<std::size_t> excluded_degrees;
  std::optional<std::size_t> padic_simple_roots;
  std::int64_t large_factor_lower_bound = 0;
  bool irreducible_over_qd = false;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::string> narrative;
};

namespace detail {

inline std::vector<std::size_t> mask_to_list(const std::vector<bool>& mask) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < mask.size(); ++k) {
    if (mask[k]) out.push_back(k);
  }
  return out;
}

inline bool only_trivial(const std::vector<std::size_t>& degrees, std::size_t n) {
  return degrees.size() == 2 && degrees[0] == 0 && degrees[1] == n;
}

inline std::vector<std::size_t> intersect_sorted(const std::vector<std::size_t>& a,
                                                 const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline std::string join(const std::vector<std::size_t>& v) {
  std::string out = "{";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out + "}";
}

inline std::string render_multiset(const DegreeMultiset& ms) {
  std::string out;
  for (auto [deg, count] : ms.entries) {
    for (std::size_t c = 0; c < count; ++c) {
      if (!out.empty()) out += "+";
      out += std::to_string(deg);
    }
  }
  return out;
}

inline std::uint64_t next_prime(std::uint64_t n) {
  do {
    ++n;
  } while (!is_prime(n));
  return n;
}

/// The verdict rule shared by certify and the auditor.
inline Verdict decide(std::size_t degree, std::size_t leading_gap, std::size_t primitive_degree,
                      bool polygon_exact, const std::vector<std::size_t>& candidates,
                      std::int64_t polygon_bound) {
  if (degree == 1) return Verdict::IrreducibleOverQ;
  if (leading_gap > 0) return Verdict::Reducible;
  if (polygon_exact || only_trivial(candidates, primitive_degree)) return Verdict::IrreducibleOverQ;
  if (2 * polygon_bound > static_cast<std::int64_t>(primitive_degree)) return Verdict::LargeFactorOnly;
  return Verdict::Inconclusive;
}

}  // namespace detail

/// Certifies a nonconstant integer polynomial; p is the polygon prime and is
/// never used as an auxiliary prime.
inline IrreducibilityCertificate certify_polynomial(const IntPoly& f, std::uint64_t p,
                                                    const CertifyOptions& options = {}) {
  if (f.is_zero() || f.size() < 2) throw std::invalid_argument("certify requires degree >= 1");
  if (!is_prime(p)) throw std::invalid_argument("polygon prime must be prime");
  IrreducibilityCertificate cert;
  cert.p = p;
  cert.degree = f.size() - 1;

  cert.content = content(f);
  if (sgn(f.leading()) < 0) cert.content = -cert.content;
  const IntPoly primitive = exact_div(f, cert.content);
  cert.leading_gap = primitive.lowest_index();
  const IntPoly core = shift_down(primitive, cert.leading_gap);
  cert.primitive_degree = core.size() - 1;
  cert.narrative.push_back("content " + cert.content.get_str() + " removed");
  if (cert.leading_gap > 0) {
    cert.narrative.push_back("b^" + std::to_string(cert.leading_gap) + " split off");
  }

  const FactorDegreeBound bound = qp_factor_degree_bound(f, static_cast<unsigned long>(p));
  cert.polygon_bound = bound.bound;
  cert.narrative.push_back("principal " + std::to_string(p) + "-adic polygon forces a Q_" +
                           std::to_string(p) + " factor of degree >= " + std::to_string(bound.bound));

  if (cert.degree == 1 || cert.leading_gap > 0) {
    cert.verdict = detail::decide(cert.degree, cert.leading_gap, cert.primitive_degree, false, {}, 0);
    cert.narrative.push_back(cert.degree == 1 ? "degree 1" : "b divides f with a nonconstant cofactor");
    return cert;
  }

  const NewtonPolygon poly = newton_polygon(core, static_cast<unsigned long>(p));
  cert.polygon_edges = poly.edges();
  cert.polygon_compatible = detail::mask_to_list(polygon_compatible_degrees(cert.polygon_edges));
  const std::size_t n = cert.primitive_degree;
  cert.irreducible_over_qd = detail::only_trivial(cert.polygon_compatible, n);
  cert.narrative.push_back("Q_" + std::to_string(p) + "-compatible factor degrees " +
                           detail::join(cert.polygon_compatible));

  try {
    cert.padic_simple_roots = padic_root_count(core, static_cast<unsigned long>(p), options.precision);
    cert.narrative.push_back(std::to_string(*cert.padic_simple_roots) + " simple roots in Q_" +
                             std::to_string(p));
  } catch (const PrecisionTooLow&) {
    cert.narrative.push_back("Q_" + std::to_string(p) + " root count skipped: repeated residual root");
  }

  std::vector<std::size_t> candidates = cert.polygon_compatible;
  if (cert.irreducible_over_qd) {
    cert.narrative.push_back("polygon-exact: irreducible over Q_" + std::to_string(p) + ", hence over Q");
  } else {
    auto try_prime = [&](std::uint64_t q) {
      ModPoly reduced;
      try {
        reduced = reduce_mod(core, q);
      } catch (const DegreeDrop&) {
        cert.skipped.push_back({q, "degree_drop"});
        return;
      }
      try {
        DegreeMultiset ms = ddf(reduced);
        candidates = detail::intersect_sorted(candidates, detail::mask_to_list(subset_sums(ms)));
        cert.narrative.push_back("mod " + std::to_string(q) + ": " + detail::render_multiset(ms) +
                                 " -> candidates " + detail::join(candidates));
        cert.per_prime.push_back(std::move(ms));
      } catch (const NotSquarefree&) {
        cert.skipped.push_back({q, "not_squarefree"});
      }
    };
    if (!options.primes.empty()) {
      for (std::uint64_t q : options.primes) {
        if (q == p) continue;
        if (!is_prime(q)) throw std::invalid_argument("auxiliary modulus " + std::to_string(q) + " is not prime");
        try_prime(q);
        if (detail::only_trivial(candidates, n)) break;
      }
      if (cert.per_prime.empty()) throw NoUsablePrime("none of the given auxiliary primes is usable");
    } else {
      std::size_t target = options.usable_primes;
      for (std::uint64_t q = 2; q <= options.scan_limit; q = detail::next_prime(q)) {
        if (q == p) continue;
        try_prime(q);
        if (detail::only_trivial(candidates, n)) break;
        if (cert.per_prime.size() >= target) {
          if (target >= options.widened_usable_primes) break;
          target = options.widened_usable_primes;
          cert.narrative.push_back("widening to " + std::to_string(target) + " usable primes");
        }
      }
      if (cert.per_prime.empty()) throw NoUsablePrime("no usable auxiliary prime below the scan limit");
    }
  }
  cert.candidate_degrees = candidates;
  for (std::size_t k = 1; k < n; ++k) {
    if (!std::binary_search(candidates.begin(), candidates.end(), k)) cert.excluded_degrees.push_back(k);
  }
  cert.large_factor_lower_bound = 0;
  for (std::size_t c : candidates) {
    if (static_cast<std::int64_t>(c) >= cert.polygon_bound) {
      cert.large_factor_lower_bound = static_cast<std::int64_t>(c);
      break;
    }
  }
  cert.verdict = detail::decide(cert.degree, cert.leading_gap, n, cert.irreducible_over_qd, candidates,
                                cert.polygon_bound);
  cert.narrative.push_back("verdict " + to_string(cert.verdict));
  return cert;
}

/// Certificate for G_m of the family with parameter d (polygon prime d).
inline IrreducibilityCertificate certify(Family& family, std::uint64_t m, const CertifyOptions& options = {}) {
  IrreducibilityCertificate cert = certify_polynomial(family.misiurewicz(m), family.d(), options);
  cert.d = family.d();
  cert.m = m;
  return cert;
}

inline IrreducibilityCertificate certify(std::uint64_t d, std::uint64_t m, const CertifyOptions& options = {}) {
  Family family(d);
  return certify(family, m, options);
}

/// Replays the recorded evidence and returns the problems found (empty = sound).
inline std::vector<std::string> audit(const IrreducibilityCertificate& cert) {
  std::vector<std::string> problems;
  if (cert.degree == 1 || cert.leading_gap > 0) {
    const Verdict v = detail::decide(cert.degree, cert.leading_gap, cert.primitive_degree, false, {}, 0);
    if (v != cert.verdict) problems.push_back("verdict does not follow from degree/leading gap");
    if (cert.leading_gap + cert.primitive_degree != cert.degree) problems.push_back("degree bookkeeping broken");
    return problems;
  }
  const std::size_t n = cert.primitive_degree;
  if (cert.leading_gap + n != cert.degree) problems.push_back("degree bookkeeping broken");
  std::int64_t run = 0;
  for (const Edge& e : cert.polygon_edges) run += e.dx;
  if (run != static_cast<std::int64_t>(n)) problems.push_back("polygon edges do not span the degree");
  const auto compatible = detail::mask_to_list(polygon_compatible_degrees(cert.polygon_edges));
  if (compatible != cert.polygon_compatible) problems.push_back("polygon-compatible set mismatch");
  const bool qd = detail::only_trivial(compatible, n);
  if (qd != cert.irreducible_over_qd) problems.push_back("Q_p irreducibility flag mismatch");
  std::vector<std::size_t> candidates = compatible;
  for (const auto& ms : cert.per_prime) {
    if (ms.q == cert.p) problems.push_back("polygon prime used as auxiliary prime");
    if (!ms.squarefree) problems.push_back("non-squarefree reduction used as evidence");
    if (ms.total_degree() != n) problems.push_back("multiset mod " + std::to_string(ms.q) + " has wrong total degree");
    candidates = detail::intersect_sorted(candidates, detail::mask_to_list(subset_sums(ms)));
  }
  if (candidates != cert.candidate_degrees) problems.push_back("candidate degrees do not replay");
  std::vector<std::size_t> excluded;
  for (std::size_t k = 1; k < n; ++k) {
    if (!std::binary_search(candidates.begin(), candidates.end(), k)) excluded.push_back(k);
  }
  if (excluded != cert.excluded_degrees) problems.push_back("excluded degrees do not replay");
  const Verdict v = detail::decide(cert.degree, cert.leading_gap, n, qd, candidates, cert.polygon_bound);
  if (v != cert.verdict) problems.push_back("verdict does not follow from the evidence");
  return problems;
}

/// Full replay: recomputes content, polygon and every per-prime multiset from f
/// itself, then runs the consistency audit.
inline std::vector<std::string> audit(const IrreducibilityCertificate& cert, const IntPoly& f) {
  std::vector<std::string> problems = audit(cert);
  if (f.size() < 2 || cert.degree != f.size() - 1) {
    problems.push_back("certificate degree does not match the polynomial");
    return problems;
  }
  BigInt c = content(f);
  if (sgn(f.leading()) < 0) c = -c;
  if (c != cert.content) problems.push_back("content does not match the polynomial");
  const IntPoly primitive = exact_div(f, c);
  if (primitive.lowest_index() != cert.leading_gap) problems.push_back("leading gap does not match the polynomial");
  if (cert.degree == 1 || cert.leading_gap > 0) return problems;
  const IntPoly core = shift_down(primitive, cert.leading_gap);
  if (newton_polygon(core, static_cast<unsigned long>(cert.p)).edges() != cert.polygon_edges) {
    problems.push_back("polygon edges do not match the polynomial");
  }
  for (const auto& ms : cert.per_prime) {
    try {
      if (!(ddf(reduce_mod(core, ms.q)) == ms)) {
        problems.push_back("multiset mod " + std::to_string(ms.q) + " does not match the polynomial");
      }
    } catch (const Error& e) {
      problems.push_back("multiset mod " + std::to_string(ms.q) + " cannot be recomputed: " + e.what());
    }
  }
  return problems;
}

inline nlohmann::ordered_json to_json(const IrreducibilityCertificate& cert) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["d"] = cert.d;
  j["m"] = cert.m;
  j["p"] = cert.p;
  j["degree"] = cert.degree;
  j["content"] = cert.content.get_str();
  j["leading_gap"] = cert.leading_gap;
  j["primitive_degree"] = cert.primitive_degree;
  j["polygon_bound"] = cert.polygon_bound;
  auto edges = ordered_json::array();
  for (const Edge& e : cert.polygon_edges) {
    edges.push_back(ordered_json{{"run", e.dx}, {"dy", e.dy}, {"reduced_run", e.reduced_run()}});
  }
  j["polygon_edges"] = std::move(edges);
  j["polygon_compatible_degrees"] = cert.polygon_compatible;
  auto primes = ordered_json::array();
  for (const auto& ms : cert.per_prime) {
    auto entries = ordered_json::array();
    for (auto [deg, count] : ms.entries) entries.push_back(ordered_json{{"degree", deg}, {"count", count}});
    primes.push_back(ordered_json{{"q", ms.q}, {"squarefree", ms.squarefree}, {"factors", std::move(entries)}});
  }
  j["per_prime"] = std::move(primes);
  auto skipped = ordered_json::array();
  for (const auto& s : cert.skipped) skipped.push_back(ordered_json{{"q", s.q}, {"reason", s.reason}});
  j["skipped_primes"] = std::move(skipped);
  j["candidate_degrees"] = cert.candidate_degrees;
  j["excluded_degrees"] = cert.excluded_degrees;
  if (cert.padic_simple_roots) {
    j["padic_simple_roots"] = *cert.padic_simple_roots;
  } else {
    j["padic_simple_roots"] = nullptr;
  }
  j["large_factor_lower_bound"] = cert.large_factor_lower_bound;
  j["irreducible_over_qd"] = cert.irreducible_over_qd;
  j["verdict"] = to_string(cert.verdict);
  j["narrative"] = cert.narrative;
  return j;
}

}  // namespace misiu
