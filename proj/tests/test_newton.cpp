#include <gtest/gtest.h>

#include <algorithm>

#include "support.hpp"

namespace misiu {
namespace {

using test::random_poly;
using test::uniform;

const IntPoly kF1{-16, 4, 0, 4, 0, 1};  // z^5 + 4z^3 + 4z - 16
const IntPoly kF2{0, 0, 8, -2, 6};      // 6z^4 - 2z^3 + 8z^2

TEST(Valuation, OrdExamples) {
  EXPECT_EQ(ord_p(BigInt(81), 3).value(), 4u);
  EXPECT_EQ(ord_p(BigInt(-16), 2).value(), 4u);
  EXPECT_EQ(ord_p(BigInt(1), 5).value(), 0u);
  EXPECT_TRUE(ord_p(BigInt(0), 7).is_infinite());
  EXPECT_EQ(ord_p(BigInt(0), 7).to_string(), "inf");
}

TEST(Valuation, GaussValuation) {
  EXPECT_EQ(min_valuation(kF2, 2).value(), 1u);
  EXPECT_EQ(min_valuation(IntPoly{1}, 3).value(), 0u);
  EXPECT_EQ(min_valuation(IntPoly{0, 0, 81, 27}, 3).value(), 3u);
  EXPECT_THROW(min_valuation(IntPoly{}, 3), ZeroPolynomial);
}

TEST(NewtonPolygon, SmallExamples) {
  EXPECT_EQ(principal_polygon(kF1, 2).to_string(), "L((0,4),(1,2),(5,0))");
  EXPECT_EQ(principal_polygon(kF2, 2).to_string(), "L((2,3),(3,1))");
  EXPECT_EQ(principal_polygon(IntPoly{9}, 3).to_string(), "L((0,2))");
  EXPECT_TRUE(principal_polygon(IntPoly{9}, 3).edges().empty());
}

TEST(NewtonPolygon, FullPolygonKeepsRisingEdges) {
  EXPECT_EQ(newton_polygon(kF2, 2).to_string(), "L((2,3),(3,1),(4,1))");
  EXPECT_EQ(principal_polygon(IntPoly{0, 1, 3}, 3).leading_gap(), 1);
}

TEST(NewtonPolygon, SumExamples) {
  const PrincipalPolygon a = principal_polygon(kF2, 2);
  EXPECT_EQ(polygon_sum({a}), a);
  const PrincipalPolygon point({{0, 2}});
  EXPECT_EQ(polygon_sum({a, point}).to_string(), "L((2,5),(3,3))");
}

TEST(NewtonPolygon, SegmentConstraintExamples) {
  const auto c = segment_constraints(principal_polygon(kF1, 2));
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].rise, 2);
  EXPECT_EQ(c[0].run, 1);
  EXPECT_EQ(c[0].reduced_run, 1);
  EXPECT_EQ(c[1].rise, 2);
  EXPECT_EQ(c[1].run, 4);
  EXPECT_EQ(c[1].reduced_run, 2);
  EXPECT_EQ(c[1].lattice_length, 2);
  EXPECT_TRUE(segment_constraints(principal_polygon(IntPoly{9}, 3)).empty());

  const PrincipalPolygon g4_shape({{1, 81}, {54, 54}});
  const auto t = segment_constraints(g4_shape);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].rise, 27);
  EXPECT_EQ(t[0].run, 53);
  EXPECT_EQ(t[0].reduced_run, 53);
}

TEST(NewtonPolygon, FactorDegreeBound) {
  const auto g1 = qp_factor_degree_bound(IntPoly{-9, -3}, 3);
  EXPECT_EQ(g1.bound, 1);
  const auto gap = qp_factor_degree_bound(IntPoly{0, 1, 1}, 3);
  EXPECT_EQ(gap.leading_gap, 1);
  EXPECT_EQ(gap.bound, 0);
}

TEST(NewtonPolygon, CompatibleDegrees) {
  const auto edges = principal_polygon(kF1, 2).edges();
  const auto mask = polygon_compatible_degrees(edges);
  // edges: run 1 (step 1), run 4 (step 2) -> {0,1} + {0,2,4}
  const std::vector<bool> expected{true, true, true, true, true, true};
  EXPECT_EQ(mask, expected);
  const std::vector<Edge> single{{53, -27}, {2, 8}};
  const auto m2 = polygon_compatible_degrees(single);
  EXPECT_TRUE(m2[53] && m2[54] && m2[55] && m2[1] && m2[2]);
  EXPECT_FALSE(m2[3] || m2[52]);
}

TEST(NewtonPolygon, ExportFormats) {
  const PrincipalPolygon poly = principal_polygon(kF1, 2);
  EXPECT_EQ(to_csv(poly.vertices()), "x,y\n0,4\n1,2\n5,0\n");
  EXPECT_EQ(to_json(poly, 2).dump(),
            R"({"p":2,"leading_gap":0,"vertices":[[0,4],[1,2],[5,0]],)"
            R"("segments":[{"rise":2,"run":1,"reduced_run":1,"lattice_length":1},)"
            R"({"rise":2,"run":4,"reduced_run":2,"lattice_length":2}]})");
}

// Oracle: vertices of the polygon are the lower hull of the raw point set,
// so every point lies on or above each edge's supporting line.
TEST(NewtonPolygonProperty, HullLiesBelowAllPoints) {
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    for (int t = 0; t < 100; ++t) {
      const IntPoly f = random_poly(static_cast<std::size_t>(uniform(0, 15)), p);
      const auto v = newton_polygon(f, p).vertices();
      for (std::size_t i = 0; i < f.size(); ++i) {
        const Valuation val = ord_p(f[i], p);
        if (val.is_infinite()) continue;
        const auto x = static_cast<std::int64_t>(i);
        const auto y = static_cast<std::int64_t>(val.value());
        for (std::size_t e = 0; e + 1 < v.size(); ++e) {
          if (x < v[e].x || x > v[e + 1].x) continue;
          EXPECT_GE((y - v[e].y) * (v[e + 1].x - v[e].x), (v[e + 1].y - v[e].y) * (x - v[e].x));
        }
      }
    }
  }
}

TEST(NewtonPolygonProperty, SumLawFullAndPrincipal) {
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    for (int t = 0; t < 250; ++t) {
      const IntPoly f = random_poly(static_cast<std::size_t>(uniform(0, 12)), p);
      const IntPoly g = random_poly(static_cast<std::size_t>(uniform(0, 12)), p);
      EXPECT_EQ(newton_polygon(f * g, p), polygon_sum({newton_polygon(f, p), newton_polygon(g, p)}));
      EXPECT_EQ(principal_polygon(f * g, p),
                polygon_sum({principal_polygon(f, p), principal_polygon(g, p)}));
    }
  }
}

TEST(NewtonPolygonProperty, GaussValuationLaws) {
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    for (int t = 0; t < 200; ++t) {
      const IntPoly f = random_poly(static_cast<std::size_t>(uniform(0, 10)), p);
      const IntPoly g = random_poly(static_cast<std::size_t>(uniform(0, 10)), p);
      EXPECT_EQ(min_valuation(f * g, p), min_valuation(f, p) + min_valuation(g, p));
      const IntPoly s = f + g;
      if (!s.is_zero()) EXPECT_GE(min_valuation(s, p), std::min(min_valuation(f, p), min_valuation(g, p)));
    }
  }
}

TEST(PowerBound, ExactWhenKIsOne) {
  for (int t = 0; t < 50; ++t) {
    const IntPoly f = random_poly(static_cast<std::size_t>(uniform(0, 8)), 3);
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(power_valuation_bound(f, 3, 1, i), ord_p(f[i], 3));
  }
}

TEST(PowerBound, MixedTuplesGainAFactorOfP) {
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    const long c = 2;
    IntPoly f = random_poly(4, p);
    BigInt scale = 1;
    for (long i = 0; i < c; ++i) scale *= p;
    f = scale * f;
    const std::uint64_t vmin = min_valuation(f, p).value();
    for (std::size_t i = 1; i < p * 4; ++i) {
      if (i % p == 0) continue;
      EXPECT_GE(power_valuation_bound(f, p, p, i).value(), 1 + p * vmin);
    }
  }
}

TEST(PowerBound, Guards) {
  EXPECT_THROW(power_valuation_bound(IntPoly{1, 1}, 3, 9, 1), ResourceGuardError);
  EXPECT_THROW(power_valuation_bound(IntPoly{}, 3, 2, 0), ZeroPolynomial);
}

// The bound never exceeds the true valuation of the power's coefficient.
TEST(PowerBoundProperty, BelowBruteForcePower) {
  int trials = 0;
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    for (int t = 0; t < 80; ++t) {
      const IntPoly f = random_poly(static_cast<std::size_t>(uniform(1, 6)), p);
      const auto k = static_cast<std::size_t>(uniform(1, 5));
      const IntPoly fk = pow(f, static_cast<unsigned long>(k));
      const auto i = static_cast<std::size_t>(uniform(0, static_cast<long>(k * (f.size() - 1))));
      EXPECT_LE(power_valuation_bound(f, p, k, i), ord_p(fk[i], p)) << "f=" << f << " k=" << k << " i=" << i;
      ++trials;
    }
  }
  EXPECT_GE(trials, 200);
}

TEST(PadicRoots, Examples) {
  EXPECT_EQ(padic_root_count(IntPoly{-1, 0, 1}, 3, 4), 2u);
  EXPECT_EQ(padic_root_count(IntPoly{-3, 0, 1}, 3), 0u);
  EXPECT_EQ(padic_root_count(IntPoly{0, -1, 0, 1}, 3), 3u);
  EXPECT_THROW(padic_root_count(IntPoly{0, 0, 1}, 3), PrecisionTooLow);
}

TEST(PadicRoots, NonUnitRootsAreFound) {
  // (b - 3)(b - 1/3) scaled: 3b^2 - 10b + 3, roots of valuation 1 and -1.
  const auto roots = padic_simple_roots(IntPoly{3, -10, 3}, 3, 10);
  ASSERT_EQ(roots.size(), 2u);
  std::vector<std::int64_t> vals{roots[0].valuation, roots[1].valuation};
  std::sort(vals.begin(), vals.end());
  EXPECT_EQ(vals, (std::vector<std::int64_t>{-1, 1}));
}

TEST(PadicRootsProperty, ProductsOfDistinctLinearFactors) {
  for (int t = 0; t < 30; ++t) {
    IntPoly f{1};
    std::vector<long> used;
    const long count = uniform(1, 4);
    while (static_cast<long>(used.size()) < count) {
      const long r = uniform(1, 40);
      if (r % 5 == 0 || std::find(used.begin(), used.end(), r) != used.end()) continue;
      bool clash = false;
      for (long u : used) clash = clash || (u - r) % 5 == 0;
      if (clash) continue;
      used.push_back(r);
      f = f * IntPoly{-r, 1};
    }
    f = f * IntPoly{1, 0, 5};  // irreducible over Q_5 factor (no roots)
    EXPECT_EQ(padic_root_count(f, 5, 12), used.size()) << f;
  }
}

}  // namespace
}  // namespace misiu
