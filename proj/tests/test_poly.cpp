#include <gtest/gtest.h>

#include "support.hpp"

namespace misiu {
namespace {

using test::naive_mul;
using test::random_poly;
using test::uniform;

const IntPoly kTau2{0, 0, 81, 27};  // 27b^3 + 81b^2

TEST(IntPoly, NormalizesTrailingZeros) {
  IntPoly f{1, 2, 0, 0};
  EXPECT_EQ(f.size(), 2u);
  EXPECT_TRUE(IntPoly({0, 0}).is_zero());
}

TEST(IntPoly, ZeroDegreeIsMinusInfinity) {
  EXPECT_TRUE(IntPoly{}.degree().is_minus_infinity());
  EXPECT_EQ(IntPoly{}.degree().to_string(), "-inf");
  EXPECT_THROW(IntPoly{}.degree().value(), ZeroPolynomial);
  EXPECT_EQ(kTau2.degree().value(), 3u);
  EXPECT_LT(IntPoly{}.degree(), IntPoly{5}.degree());
}

TEST(IntPoly, AddExamples) {
  const IntPoly f{4, -1, 7};
  EXPECT_EQ(f + IntPoly{}, f);
  EXPECT_TRUE((IntPoly{1, 1} + IntPoly{-1, -1}).is_zero());
  EXPECT_EQ(kTau2 + IntPoly({0, 0, -81}), IntPoly::monomial(27, 3));
}

TEST(IntPoly, MulExamples) {
  const IntPoly f{4, -1, 7};
  EXPECT_EQ(f * IntPoly{1}, f);
  EXPECT_EQ(IntPoly({1, 1}) * IntPoly({-1, 1}), IntPoly({-1, 0, 1}));
  EXPECT_EQ(IntPoly({0, 3}) * IntPoly({-9, -3}) * IntPoly({0, -3}), kTau2);
  EXPECT_TRUE((f * IntPoly{}).is_zero());
}

TEST(IntPoly, PowExamples) {
  const IntPoly f{4, -1, 7};
  EXPECT_EQ(pow(f, 0), IntPoly{1});
  EXPECT_EQ(pow(IntPoly{1, 1}, 3), IntPoly({1, 3, 3, 1}));
  // s_2 = 27((b+1)^3 + 2) for d = 3
  const IntPoly s2 = BigInt(27) * (pow(IntPoly{1, 1}, 3) + IntPoly{2});
  EXPECT_EQ(pow(s2, 3), naive_mul(naive_mul(s2, s2), s2));
}

TEST(IntPoly, ExactDivExamples) {
  EXPECT_EQ(exact_div(IntPoly{-1, 0, 1}, IntPoly{1, 1}), IntPoly({-1, 1}));
  EXPECT_EQ(exact_div(kTau2, IntPoly{0, 3}), IntPoly({0, 27, 9}));
  EXPECT_THROW(exact_div(IntPoly{1, 1}, IntPoly{0, 1}), NotDivisible);
  // Integral quotient step fails before any remainder appears.
  EXPECT_THROW(exact_div(IntPoly{0, 1}, IntPoly{0, 2}), NotDivisible);
  EXPECT_THROW(exact_div(IntPoly{1}, IntPoly{}), ZeroPolynomial);
  EXPECT_EQ(exact_div(kTau2, BigInt(27)), IntPoly({0, 0, 3, 1}));
  EXPECT_THROW(exact_div(kTau2, BigInt(54)), NotDivisible);
}

TEST(IntPoly, ContentDerivativeEvaluate) {
  EXPECT_EQ(content(kTau2), 27);
  EXPECT_EQ(content(IntPoly{-3, -9}), 3);
  EXPECT_EQ(derivative(kTau2), IntPoly({0, 162, 81}));
  EXPECT_EQ(evaluate(kTau2, BigInt(-3)), 0);
  EXPECT_EQ(shift_down(kTau2, 2), IntPoly({81, 27}));
}

TEST(IntPoly, Rendering) {
  EXPECT_EQ(to_string(kTau2), "27*b^3 + 81*b^2");
  EXPECT_EQ(to_string(IntPoly{-9, -3}), "-3*b - 9");
  EXPECT_EQ(to_string(IntPoly{}), "0");
}

TEST(IntPoly, JsonRoundTrip) {
  for (int t = 0; t < 50; ++t) {
    const IntPoly f = random_poly(static_cast<std::size_t>(uniform(0, 30)), 3, 1000000);
    const auto j = to_json(f);
    EXPECT_EQ(poly_from_json(nlohmann::ordered_json::parse(j.dump())), f);
  }
  EXPECT_TRUE(to_json(IntPoly{})["degree"].is_null());
  EXPECT_TRUE(poly_from_json(to_json(IntPoly{})).is_zero());
}

// Kronecker substitution against the schoolbook product, including sizes
// on both sides of the dispatch threshold and wide coefficients.
TEST(IntPolyProperty, KroneckerMatchesSchoolbook) {
  for (int t = 0; t < 200; ++t) {
    const auto df = static_cast<std::size_t>(uniform(0, 60));
    const auto dg = static_cast<std::size_t>(uniform(0, 60));
    long mag = uniform(0, 1) ? 5 : 1000000000L;
    IntPoly f = random_poly(df, 7, mag);
    IntPoly g = random_poly(dg, 7, mag);
    if (t % 10 == 0) f = BigInt("123456789012345678901234567890123456789") * f;
    EXPECT_EQ(mul_kronecker(f, g), mul_schoolbook(f, g));
    EXPECT_EQ(mul_kronecker(f, f), mul_schoolbook(f, f));
    EXPECT_EQ(f * g, naive_mul(f, g));
  }
}

TEST(IntPolyProperty, RingLaws) {
  for (int t = 0; t < 200; ++t) {
    const IntPoly f = random_poly(static_cast<std::size_t>(uniform(0, 20)), 3);
    const IntPoly g = random_poly(static_cast<std::size_t>(uniform(0, 20)), 3);
    const IntPoly h = random_poly(static_cast<std::size_t>(uniform(0, 20)), 3);
    EXPECT_EQ(f * g, g * f);
    EXPECT_EQ((f * g) * h, f * (g * h));
    EXPECT_EQ(f * (g + h), f * g + f * h);
    EXPECT_EQ((f * g).degree(), f.degree() + g.degree());
    EXPECT_EQ(exact_div(f * g, g), f);
    EXPECT_TRUE((f - f).is_zero());
  }
}

TEST(IntPolyProperty, PowMatchesRepeatedProduct) {
  for (int t = 0; t < 50; ++t) {
    const IntPoly f = random_poly(static_cast<std::size_t>(uniform(0, 8)), 5, 20);
    const auto k = static_cast<unsigned long>(uniform(0, 9));
    IntPoly acc{1};
    for (unsigned long i = 0; i < k; ++i) acc = naive_mul(acc, f);
    EXPECT_EQ(pow(f, k), acc);
  }
}

TEST(IntPolyProperty, ExactDivRejectsPerturbedProduct) {
  for (int t = 0; t < 100; ++t) {
    const IntPoly f = random_poly(static_cast<std::size_t>(uniform(1, 12)), 3);
    const IntPoly g = random_poly(static_cast<std::size_t>(uniform(1, 12)), 3);
    EXPECT_THROW(exact_div(f * g + IntPoly{1}, g * IntPoly{2}), NotDivisible);
  }
}

TEST(SizeGuard, RefusesOversizedProducts) {
  ScopedSizeLimits limits({100, std::uint64_t{1} << 34});
  const IntPoly f = IntPoly::monomial(1, 60);
  EXPECT_THROW(f * f, ResourceGuardError);
  EXPECT_NO_THROW(IntPoly::monomial(1, 40) * IntPoly::monomial(1, 40));
  {
    ScopedSizeLimits tight({1000, 200});
    EXPECT_THROW(pow(IntPoly{1, 1}, 64), ResourceGuardError);
  }
}

TEST(SizeGuard, RestoresLimits) {
  const SizeLimits before = size_limits();
  { ScopedSizeLimits limits({5, 5}); }
  EXPECT_EQ(size_limits().max_degree, before.max_degree);
  EXPECT_EQ(size_limits().max_degree_bits, before.max_degree_bits);
}

}  // namespace
}  // namespace misiu
