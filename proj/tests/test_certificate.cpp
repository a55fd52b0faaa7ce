#include <gtest/gtest.h>

#include <algorithm>

#include "support.hpp"

namespace misiu {
namespace {

using test::uniform;

IntPoly random_dense(std::size_t degree, long magnitude) {
  std::vector<BigInt> c(degree + 1);
  for (auto& x : c) x = uniform(-magnitude, magnitude);
  c[0] = uniform(1, magnitude);  // keep b out of the factorization
  while (c.back() == 0) c.back() = uniform(-magnitude, magnitude);
  return IntPoly(std::move(c));
}

bool claims_irreducible(Verdict v) { return v == Verdict::IrreducibleOverQ || v == Verdict::IrreducibleOverQd; }

TEST(Certificate, LinearCase) {
  const auto cert = certify(3, 1);
  EXPECT_EQ(cert.verdict, Verdict::IrreducibleOverQ);
  EXPECT_EQ(cert.content, -3);
  EXPECT_EQ(cert.degree, 1u);
  EXPECT_TRUE(audit(cert).empty());
}

TEST(Certificate, PolygonExactCase) {
  Family fam(3);
  const auto cert = certify(fam, 3);
  EXPECT_EQ(cert.verdict, Verdict::IrreducibleOverQ);
  EXPECT_EQ(cert.degree, 17u);
  EXPECT_EQ(cert.polygon_bound, 17);
  EXPECT_TRUE(cert.irreducible_over_qd);
  EXPECT_TRUE(cert.per_prime.empty());
  EXPECT_TRUE(audit(cert, fam.misiurewicz(3)).empty());
}

TEST(Certificate, ModularEvidenceCase) {
  Family fam(3);
  const auto cert = certify(fam, 4);
  EXPECT_EQ(cert.verdict, Verdict::IrreducibleOverQ);
  EXPECT_EQ(cert.degree, 55u);
  EXPECT_EQ(cert.polygon_bound, 53);
  EXPECT_FALSE(cert.irreducible_over_qd);
  EXPECT_EQ(cert.polygon_compatible, (std::vector<std::size_t>{0, 1, 2, 53, 54, 55}));
  EXPECT_EQ(cert.candidate_degrees, (std::vector<std::size_t>{0, 55}));
  ASSERT_TRUE(cert.padic_simple_roots.has_value());
  EXPECT_EQ(*cert.padic_simple_roots, 2u);
  EXPECT_TRUE(std::none_of(cert.per_prime.begin(), cert.per_prime.end(),
                           [](const DegreeMultiset& ms) { return ms.q == 3; }));
  EXPECT_TRUE(audit(cert, fam.misiurewicz(4)).empty());
}

TEST(Certificate, ExplicitPrimes) {
  CertifyOptions opts;
  opts.primes = {3, 5};
  const auto cert = certify(3, 4, opts);
  EXPECT_TRUE(std::all_of(cert.per_prime.begin(), cert.per_prime.end(),
                          [](const DegreeMultiset& ms) { return ms.q == 5; }));
  opts.primes = {4};
  EXPECT_THROW(certify(3, 4, opts), std::invalid_argument);
}

TEST(Certificate, LeadingGapIsReducible) {
  const auto cert = certify_polynomial(IntPoly{0, 1, 1}, 3);
  EXPECT_EQ(cert.verdict, Verdict::Reducible);
  EXPECT_EQ(cert.leading_gap, 1u);
  EXPECT_TRUE(audit(cert).empty());
}

TEST(Certificate, AuditorCatchesTampering) {
  Family fam(3);
  auto cert = certify(fam, 4);
  auto forged = cert;
  forged.candidate_degrees = {0, 1, 55};
  EXPECT_FALSE(audit(forged).empty());
  forged = cert;
  forged.polygon_edges.front().dx -= 1;
  forged.polygon_edges.back().dx += 1;
  EXPECT_FALSE(audit(forged).empty());
  forged = cert;
  forged.verdict = Verdict::Inconclusive;
  EXPECT_FALSE(audit(forged).empty());
  forged = cert;
  ASSERT_FALSE(forged.per_prime.empty());
  forged.per_prime.front().entries = {{55, 1}};
  EXPECT_FALSE(audit(forged, fam.misiurewicz(4)).empty());
  EXPECT_FALSE(audit(cert, fam.misiurewicz(3)).empty());
}

TEST(Certificate, JsonIsStable) {
  const auto a = to_json(certify(3, 4)).dump();
  const auto b = to_json(certify(3, 4)).dump();
  EXPECT_EQ(a, b);
  EXPECT_EQ(to_json(certify(3, 1)).dump(),
            R"({"d":3,"m":1,"p":3,"degree":1,"content":"-3","leading_gap":0,"primitive_degree":1,)"
            R"("polygon_bound":1,"polygon_edges":[],"polygon_compatible_degrees":[],"per_prime":[],"skipped_primes":[],)"
            R"("candidate_degrees":[],"excluded_degrees":[],"padic_simple_roots":null,)"
            R"("large_factor_lower_bound":0,"irreducible_over_qd":false,"verdict":"IrreducibleOverQ",)"
            R"("narrative":["content -3 removed","principal 3-adic polygon forces a Q_3 factor of degree >= 1",)"
            R"("degree 1"]})");
}

// Negative control: products of two nonconstant factors are never certified
// irreducible, and the true factor degree survives every filter.
TEST(CertificateProperty, ReducibleProductsNeverCertified) {
  int trials = 0;
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    for (int t = 0; t < 40; ++t) {
      const auto dg = static_cast<std::size_t>(uniform(1, 6));
      const auto dh = static_cast<std::size_t>(uniform(1, 6));
      const IntPoly g = random_dense(dg, 30);
      const IntPoly h = random_dense(dh, 30);
      const IntPoly f = g * h;
      IrreducibilityCertificate cert;
      try {
        cert = certify_polynomial(f, p);
      } catch (const NoUsablePrime&) {
        continue;  // repeated factor: no squarefree reduction exists
      }
      ++trials;
      EXPECT_FALSE(claims_irreducible(cert.verdict)) << f;
      EXPECT_TRUE(std::binary_search(cert.candidate_degrees.begin(), cert.candidate_degrees.end(), dg));
      EXPECT_TRUE(std::binary_search(cert.polygon_compatible.begin(), cert.polygon_compatible.end(), dg));
      EXPECT_TRUE(audit(cert, f).empty());
    }
  }
  EXPECT_GE(trials, 100);
}

TEST(CertificateProperty, AuditReplaysRandomCertificates) {
  for (int t = 0; t < 60; ++t) {
    const IntPoly f = random_dense(static_cast<std::size_t>(uniform(2, 12)), 100);
    try {
      const auto cert = certify_polynomial(f, 3);
      EXPECT_TRUE(audit(cert, f).empty()) << f;
    } catch (const NoUsablePrime&) {
    }
  }
}

}  // namespace
}  // namespace misiu
