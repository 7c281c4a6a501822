#include <gtest/gtest.h>

#include <cmath>

#include "iclt/circle_quad.hpp"
#include "iclt/errors.hpp"
#include "iclt/orbit_kernels.hpp"

using namespace iclt;

TEST(CircleQuad, GridKillsMonomialsBelowSize) {
  const auto grid = uniform_grid(64, 0.3);
  auto pts = grid.points();
  for (int m = -63; m <= 63; ++m) {
    std::vector<cplx> v;
    for (auto z : pts) v.push_back(std::pow(z, m));
    EXPECT_NEAR(std::abs(integrate(v) - cplx(m == 0 ? 1.0 : 0.0)), 0.0, 1e-14) << m;
  }
  std::vector<cplx> v;
  for (auto z : pts) v.push_back(std::pow(z, 64));
  EXPECT_NEAR(std::abs(integrate(v)), 1.0, 1e-13);
}

TEST(CircleQuad, EmptyInputThrows) {
  std::vector<cplx> empty;
  EXPECT_THROW(integrate(empty), PreconditionError);
}

TEST(CircleQuad, CorrelationOfHalfZeroIsLambdaSquared) {
  // ∫ conj(f) f³ dm = ∫ conj(z) f² dm = (f²)'(0) = λ².
  auto f = BlaschkeProduct::make(1.0, {0.0, 0.5});
  const int idx[] = {1, 3}, sg[] = {-1, 1};
  const cplx v = correlation_integral(f, idx, sg, uniform_grid(1 << 14));
  EXPECT_NEAR(std::abs(v - cplx(0.25)), 0.0, 1e-12);
}

TEST(CircleQuad, MonomialExactnessAtDegreeBound) {
  auto f = BlaschkeProduct::make(1.0, {0.0, 0.0});
  // f¹ f̄² for z²: z² z̄⁴ = z̄², bound 2 + 4 = 6.
  const Word w = signed_word(std::vector<int>{1, 2}, std::vector<int>{1, -1});
  EXPECT_EQ(degree_bound(w, 2), 6.0);
  QuadratureOptions opt;
  opt.fixed_points = 7;
  const Word ws[] = {w};
  auto r = integrate_words(f, ws, opt);
  EXPECT_NEAR(std::abs(r.values[0]), 0.0, 1e-14);
  opt.fixed_points = 6;
  EXPECT_THROW(integrate_words(f, ws, opt), PreconditionError);
}

TEST(CircleQuad, AdaptiveMatchesReference) {
  auto f = BlaschkeProduct::make(std::polar(1.0, 0.4), {0.0, {0.3, -0.2}});
  const std::vector<Word> ws = {
      signed_word(std::vector<int>{1, 2}, std::vector<int>{-1, 1}),
      signed_word(std::vector<int>{2, 4, 5}, std::vector<int>{1, -1, 1}),
      Word{{1, -2}, {3, 2}},
  };
  auto r = integrate_words(f, ws);
  ASSERT_TRUE(r.resolved);
  for (std::size_t o = 0; o < ws.size(); ++o) {
    const cplx ref = kernels::reference::word_integral(f, uniform_grid(r.points), ws[o]);
    EXPECT_NEAR(std::abs(ref - r.values[o]), 0.0, 1e-13);
    EXPECT_LE(r.certificates[o], 1e-11);
  }
  // First moment: ∫ conj(z) fⁿ dm = (fⁿ)'(0) = λⁿ.
  const Word w0{{0, -1}, {4, 1}};
  const Word w0s[] = {w0};
  auto r0 = integrate_words(f, w0s);
  EXPECT_NEAR(std::abs(r0.values[0] - std::pow(f.lambda(), 4)), 0.0, 1e-12);
}

TEST(CircleQuad, ThreadCountDoesNotChangeBits) {
  auto f = BlaschkeProduct::make(1.0, {0.0, 0.5});
  const std::vector<Word> ws = {signed_word(std::vector<int>{1, 6}, std::vector<int>{-1, 1})};
  QuadratureOptions a, b;
  a.fixed_points = b.fixed_points = 3 * kernels::kChunk + 17;
  b.exec.threads = 3;
  auto ra = integrate_words(f, ws, a);
  auto rb = integrate_words(f, ws, b);
  EXPECT_EQ(ra.values[0], rb.values[0]);
}

TEST(CircleQuad, PartialSumsMatchReference) {
  auto f = BlaschkeProduct::make(1.0, {0.0, {0.2, 0.6}});
  auto pts = mc_points({7, 33});
  std::vector<cplx> coeffs{1.0, {0.5, 1.0}, -2.0, 0.25, 3.0};
  auto par = kernels::orbit_partial_sums(f, pts, 2, coeffs, {2});
  auto ref = kernels::reference::orbit_partial_sums(f, pts, 2, coeffs);
  const int stops[] = {2, 5};
  auto multi = kernels::orbit_partial_sums_multi(f, pts, coeffs, stops, {});
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_NEAR(std::abs(par[i] - ref[i]), 0.0, 1e-13);
    const cplx w1 = f.eval_boundary(pts[i]), w2 = f.eval_boundary(w1);
    EXPECT_NEAR(std::abs(multi[i] - (coeffs[0] * w1 + coeffs[1] * w2)), 0.0, 1e-13);
  }
}

TEST(CircleQuad, McPointsDeterministic) {
  auto a = mc_points({42, 10});
  auto b = mc_points({42, 10});
  EXPECT_EQ(a, b);
  EXPECT_NE(a[0], mc_points({43, 1})[0]);
  EXPECT_THROW(mc_points({1, 0}), PreconditionError);
}
