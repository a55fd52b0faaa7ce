#pragma once

/**
 * @file verify.hpp
 * @brief Instance checks of the closed-form degree and polygon results
 *        against exactly computed orbit and Misiurewicz polynomials.
 *
 * Every check produces CheckReports whose expected/actual fields are
 * canonical renderings; passed holds exactly when they are equal.
 */

#include <cstdint>
#include <cstdio>
#include <functional>
#include <numeric>
#include <future>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "misiu/certificate.hpp"
#include "misiu/newton.hpp"
#include "misiu/orbit.hpp"
#include "misiu/poly.hpp"

namespace misiu {

struct CheckReport {
  std::string check_id;
  std::uint64_t d = 0;
  std::uint64_t index = 0;  // m or n, depending on the check
  std::uint64_t p = 0;
  std::string expected;
  std::string actual;
  bool passed = false;
};

inline CheckReport make_report(std::string id, std::uint64_t d, std::uint64_t index, std::uint64_t p,
                               std::string expected, std::string actual) {
  const bool passed = expected == actual;
  return {std::move(id), d, index, p, std::move(expected), std::move(actual), passed};
}

inline nlohmann::ordered_json to_json(const CheckReport& r) {
  return nlohmann::ordered_json{{"check_id", r.check_id},
                                {"d", r.d},
                                {"index", r.index},
                                {"p", r.p},
                                {"expected", r.expected},
                                {"actual", r.actual},
                                {"passed", r.passed}};
}

/// Stable 64-bit FNV-1a digest of the decimal coefficients, for identity reports.
inline std::string fingerprint(const IntPoly& f) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= ',';
    h *= 0x100000001b3ULL;
  };
  for (const auto& c : f.coeffs()) feed(c.get_str());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return "deg=" + f.degree().to_string() + ";fnv=" + buf;
}

namespace detail {

inline std::string pair_str(std::int64_t a, std::int64_t b) {
  return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

inline std::string polygon_str(const std::vector<LatticePoint>& v) { return render_vertices(v); }

inline std::int64_t deg_of(const IntPoly& f) { return static_cast<std::int64_t>(f.degree().value()); }

}  // namespace detail

/// deg r_n, deg s_n against the closed form, 2 <= n <= n_max.
inline std::vector<CheckReport> check_rs_degrees(Family& fam, std::uint64_t n_max) {
  std::vector<CheckReport> out;
  const auto d = static_cast<std::int64_t>(fam.d());
  for (std::uint64_t n = 2; n <= n_max; ++n) {
    const DegreePrediction e = expected_degrees(d, static_cast<std::int64_t>(n));
    out.push_back(make_report("rs_degrees", fam.d(), n, 0, detail::pair_str(e.deg_r, e.deg_s),
                              detail::pair_str(detail::deg_of(fam.r(n)), detail::deg_of(fam.s(n)))));
  }
  return out;
}

/// N_d^-(s_m) = L((0, D_m), (d^(m-1), d^(m-1))), 2 <= m <= m_max.
inline std::vector<CheckReport> check_s_polygon(Family& fam, std::uint64_t m_max) {
  std::vector<CheckReport> out;
  const auto d = static_cast<std::int64_t>(fam.d());
  for (std::uint64_t m = 2; m <= m_max; ++m) {
    const std::int64_t top = ipow(d, m - 1);
    const std::string expected = detail::polygon_str({{0, repunit(d, m)}, {top, top}});
    out.push_back(make_report("s_polygon", fam.d(), m, fam.d(), expected,
                              principal_polygon(fam.s(m), fam.d()).to_string()));
  }
  return out;
}

/// N_d^-(sigma_m) = L((0, D_m), (d^(m-1), d^(m-1) + 1)), 3 <= m <= m_max.
/// At m = 2, sigma_2 = (b+1) d^(d+1) has no descending edge, so the range starts at 3.
inline std::vector<CheckReport> check_sigma_polygon(Family& fam, std::uint64_t m_max) {
  std::vector<CheckReport> out;
  const auto d = static_cast<std::int64_t>(fam.d());
  for (std::uint64_t m = 3; m <= m_max; ++m) {
    const std::int64_t top = ipow(d, m - 1);
    const std::string expected = detail::polygon_str({{0, repunit(d, m)}, {top, top + 1}});
    out.push_back(make_report("sigma_polygon", fam.d(), m, fam.d(), expected,
                              principal_polygon(fam.sigma(m), fam.d()).to_string()));
  }
  return out;
}

/// tau_m = -(bd)^m G_{m-1} ... G_1, 1 <= m <= m_max.
inline std::vector<CheckReport> check_tau_identity(Family& fam, std::uint64_t m_max) {
  std::vector<CheckReport> out;
  const IntPoly bd = IntPoly::monomial(BigInt(fam.d()), 1);
  IntPoly product = IntPoly::constant(1);  // G_{m-1} ... G_1
  for (std::uint64_t m = 1; m <= m_max; ++m) {
    if (m >= 2) product = product * fam.misiurewicz(m - 1);
    const IntPoly rhs = -(pow(bd, m) * product);
    const IntPoly& lhs = fam.tau(m);
    CheckReport r = make_report("tau_identity", fam.d(), m, 0, fingerprint(rhs), fingerprint(lhs));
    r.passed = r.passed && lhs == rhs;
    out.push_back(std::move(r));
  }
  return out;
}

/// N_d^-(G_m) and N_d^-(tau_m) against their closed forms, 1 <= m <= m_max.
inline std::vector<CheckReport> check_theorem_polygons(Family& fam, std::uint64_t m_max) {
  std::vector<CheckReport> out;
  const auto d = static_cast<std::int64_t>(fam.d());
  for (std::uint64_t m = 1; m <= m_max; ++m) {
    const std::int64_t dm = ipow(d, m);
    const std::int64_t tail = dm - ipow(d, m - 1) - 1;
    out.push_back(make_report("g_polygon", fam.d(), m, fam.d(),
                              detail::polygon_str({{0, dm - 1}, {tail, tail}}),
                              principal_polygon(fam.misiurewicz(m), fam.d()).to_string()));
    std::vector<LatticePoint> tau_vertices;
    for (std::uint64_t i = 0; i < m; ++i) {
      const std::int64_t di = ipow(d, i);
      tau_vertices.push_back({di + static_cast<std::int64_t>(m - 1 - i), di * repunit(d, m - i)});
    }
    out.push_back(make_report("tau_polygon", fam.d(), m, fam.d(), detail::polygon_str(tau_vertices),
                              principal_polygon(fam.tau(m), fam.d()).to_string()));
  }
  return out;
}

/// Geometry of the F_k terms against the line through (1, d^m) and
/// (d^m - d^(m-1), d^m - d^(m-1)), the two pinned valuations of bd G_m, and
/// the arithmetic inequality d^m - d^(m-1) - 1 >= D_m k at k = d - 2.
inline std::vector<CheckReport> check_fk_geometry(Family& fam, std::uint64_t m) {
  std::vector<CheckReport> out;
  const auto d = static_cast<std::int64_t>(fam.d());
  const unsigned long p = fam.d();
  const std::int64_t dm = ipow(d, m);
  const std::int64_t x1 = 1, y1 = dm;
  const std::int64_t x2 = dm - ipow(d, m - 1), y2 = x2;
  const DecompositionTerms terms = fam.decomposition_terms(m);
  IntPoly sum;
  for (std::size_t k = 0; k < terms.terms.size(); ++k) {
    const PrincipalPolygon poly = principal_polygon(terms.terms[k], p);
    std::string below;
    for (const LatticePoint& v : poly.vertices()) {
      const __int128 lhs = static_cast<__int128>(v.y - y1) * (x2 - x1);
      const __int128 rhs = static_cast<__int128>(y2 - y1) * (v.x - x1);
      if (lhs < rhs) below += detail::pair_str(v.x, v.y);
    }
    out.push_back(make_report("fk_above_line_k" + std::to_string(k), fam.d(), m, p, "none",
                              below.empty() ? "none" : below));
    sum = sum + terms.terms[k];
  }
  const IntPoly bdg = IntPoly::monomial(BigInt(fam.d()), 1) * fam.misiurewicz(m);
  {
    CheckReport r = make_report("fk_sum_identity", fam.d(), m, 0, fingerprint(bdg), fingerprint(-sum));
    r.passed = r.passed && bdg == -sum;
    out.push_back(std::move(r));
  }
  out.push_back(make_report("fk_pin_first", fam.d(), m, p, std::to_string(y1),
                            ord_p(bdg[1], p).to_string()));
  out.push_back(make_report("fk_pin_last", fam.d(), m, p, std::to_string(y2),
                            ord_p(bdg[static_cast<std::size_t>(x2)], p).to_string()));
  const bool inequality = dm - ipow(d, m - 1) - 1 >= repunit(d, m) * (d - 2);
  out.push_back(make_report("fk_case_b_inequality", fam.d(), m, 0, "true", inequality ? "true" : "false"));
  return out;
}

/// Reduced fraction num/den rendered as "num/den".
inline std::string ratio_str(std::int64_t num, std::int64_t den) {
  const std::int64_t g = std::gcd(num, den);
  return std::to_string(num / g) + "/" + std::to_string(den / g);
}

/// Polygon bound >= d^m - d^(m-1) - 1 for 1 <= m <= m_max, the ratio
/// bound/deg G_m (reported, always passing), and certificate verdicts
/// IrreducibleOverQ for 2 <= m <= min(m_max, d).
inline std::vector<CheckReport> check_main_theorem(Family& fam, std::uint64_t m_max,
                                                   const CertifyOptions& options = {}) {
  std::vector<CheckReport> out;
  const auto d = static_cast<std::int64_t>(fam.d());
  for (std::uint64_t m = 1; m <= m_max; ++m) {
    const IntPoly& g = fam.misiurewicz(m);
    const FactorDegreeBound bound = qp_factor_degree_bound(g, fam.d());
    const std::int64_t claimed = ipow(d, m) - ipow(d, m - 1) - 1;
    out.push_back(make_report("main_bound", fam.d(), m, fam.d(), ">=" + std::to_string(claimed),
                              bound.bound >= claimed ? ">=" + std::to_string(claimed)
                                                     : std::to_string(bound.bound)));
    const std::string ratio = ratio_str(bound.bound, detail::deg_of(g));
    out.push_back(make_report("main_ratio", fam.d(), m, fam.d(), ratio, ratio));
    if (m >= 2 && m <= fam.d()) {
      const IrreducibilityCertificate cert = certify(fam, m, options);
      out.push_back(make_report("main_certificate", fam.d(), m, fam.d(), "IrreducibleOverQ",
                                to_string(cert.verdict)));
      if (m >= 3) {
        const std::string expected = "bound=" + std::to_string(claimed) + ";degree=" + std::to_string(claimed);
        const std::string actual =
            "bound=" + std::to_string(bound.bound) + ";degree=" + std::to_string(detail::deg_of(g));
        out.push_back(make_report("main_polygon_exact", fam.d(), m, fam.d(), expected, actual));
      }
    }
  }
  return out;
}

/// direct and via_tau constructions of G_m agree, 1 <= m <= m_max.
inline std::vector<CheckReport> check_route_equality(Family& fam, std::uint64_t m_max) {
  std::vector<CheckReport> out;
  for (std::uint64_t m = 1; m <= m_max; ++m) {
    const IntPoly& a = fam.misiurewicz(m, Route::direct);
    const IntPoly& b = fam.misiurewicz(m, Route::via_tau);
    CheckReport r = make_report("route_equality", fam.d(), m, 0, fingerprint(a), fingerprint(b));
    r.passed = r.passed && a == b;
    out.push_back(std::move(r));
  }
  return out;
}

struct SuiteOptions {
  std::uint64_t max_m = 3;
  unsigned jobs = 1;
  CertifyOptions certify;
};

/// All checks for one d up to max_m, merged in a fixed order regardless of jobs.
inline std::vector<CheckReport> run_suite(Family& fam, const SuiteOptions& options) {
  const std::uint64_t M = options.max_m;
  std::vector<std::function<std::vector<CheckReport>()>> groups{
      [&] { return check_rs_degrees(fam, M + 1); },
      [&] { return check_s_polygon(fam, M); },
      [&] { return check_sigma_polygon(fam, M); },
      [&] { return check_tau_identity(fam, M); },
      [&] { return check_theorem_polygons(fam, M); },
      [&] { return check_route_equality(fam, M); },
      [&] { return check_main_theorem(fam, M, options.certify); },
  };
  for (std::uint64_t m = 1; m <= M; ++m) groups.push_back([&fam, m] { return check_fk_geometry(fam, m); });

  std::vector<std::vector<CheckReport>> results(groups.size());
  if (options.jobs <= 1) {
    for (std::size_t i = 0; i < groups.size(); ++i) results[i] = groups[i]();
  } else {
    std::size_t next = 0;
    while (next < groups.size()) {
      std::vector<std::future<std::vector<CheckReport>>> batch;
      const std::size_t first = next;
      for (unsigned j = 0; j < options.jobs && next < groups.size(); ++j, ++next) {
        batch.push_back(std::async(std::launch::async, groups[next]));
      }
      for (std::size_t j = 0; j < batch.size(); ++j) results[first + j] = batch[j].get();
    }
  }
  std::vector<CheckReport> merged;
  for (auto& r : results) merged.insert(merged.end(), r.begin(), r.end());
  return merged;
}

struct SuiteSummary {
  std::size_t total = 0;
  std::size_t passed = 0;
  bool all_passed() const { return total == passed; }
};

inline SuiteSummary summarize(const std::vector<CheckReport>& reports) {
  SuiteSummary s;
  s.total = reports.size();
  for (const auto& r : reports) s.passed += r.passed ? 1 : 0;
  return s;
}

}  // namespace misiu
