#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "iclt/correlations.hpp"
#include "iclt/errors.hpp"

using namespace iclt;
using Seq = CoefficientSequence;

namespace {

WordIntegrator make(std::vector<cplx> zeros, IntegralMethod m = IntegralMethod::Auto, double phase = 0.0) {
  CorrelationOptions o;
  o.method = m;
  return WordIntegrator(BlaschkeProduct::from_angle(phase, std::move(zeros)), o);
}

}  // namespace

TEST(Correlations, CovarianceExamples) {
  auto half = make({0.0, 0.5});
  auto r = covariance_check(half, 1, 3);
  EXPECT_NEAR(std::abs(r.lhs - 0.25), 0.0, 1e-10);
  EXPECT_TRUE(r.pass);
  auto rot = make({0.0, std::polar(0.5, std::numbers::pi / 3)});
  auto r2 = covariance_check(rot, 2, 3);
  EXPECT_NEAR(std::abs(r2.rhs - 0.5), 0.0, 1e-15);
  EXPECT_TRUE(r2.pass) << r2.residual;
  auto sq = make({0.0, 0.0});
  EXPECT_TRUE(covariance_check(sq, 2, 5).pass);
  EXPECT_THROW(covariance_check(sq, 3, 3), PreconditionError);
}

TEST(Correlations, QuadratureAndTransferAgree) {
  auto q = make({0.0, {0.3, 0.2}}, IntegralMethod::Quadrature);
  auto t = make({0.0, {0.3, 0.2}}, IntegralMethod::Transfer);
  for (int k = 1; k <= 4; ++k)
    for (int j = k + 1; j <= 6; ++j) EXPECT_NEAR(std::abs(covariance_check(q, k, j).lhs - covariance_check(t, k, j).lhs), 0.0, 1e-12);
  EXPECT_GT(q.quadrature_count(), 0u);
  EXPECT_EQ(q.transfer_count(), 0u);
  EXPECT_GT(t.transfer_count(), 0u);
}

TEST(Correlations, Pushforward) {
  auto I = make({0.0, 0.5});
  TrigPolynomial g;
  g.coeffs = {0.0, 1.0, 0.0, 1.0, 1.0};  // z̄ + z + z²
  auto r = pushforward_check(I, g);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(std::abs(r.rhs), 0.0, 1e-15);
  TrigPolynomial one;
  EXPECT_NEAR(std::abs(pushforward_check(I, one).lhs - 1.0), 0.0, 1e-15);
}

TEST(Correlations, Factorization) {
  auto I = make({0.0, 0.5});
  const std::pair<int, int> p[] = {{1, 2}, {3, 4}};
  auto r = factorization_check(I, p);
  EXPECT_NEAR(std::abs(r.rhs - 0.25), 0.0, 1e-10);
  EXPECT_TRUE(r.pass) << r.residual;
  const std::pair<int, int> bad[] = {{1, 3}, {2, 4}};
  EXPECT_THROW(factorization_check(I, bad), PreconditionError);
}

TEST(Correlations, UncorrelatedSquares) {
  auto I = make({0.0, 0.5});
  const IndexRange r[] = {{1, 2}, {3, 4}};
  auto rep = uncorrelated_squares_check(I, Seq::constant(1.0), r);
  EXPECT_TRUE(rep.pass) << rep.residual;
  const IndexRange ones[] = {{1, 1}, {2, 2}, {3, 3}};
  auto r3 = uncorrelated_squares_check(I, Seq::constant(1.0), ones);
  EXPECT_NEAR(std::abs(r3.lhs - 1.0), 0.0, 1e-12);
  const IndexRange bad[] = {{1, 3}, {3, 4}};
  EXPECT_THROW(uncorrelated_squares_check(I, Seq::constant(1.0), bad), PreconditionError);
}

TEST(Correlations, FourFactor) {
  auto I = make({0.0, 0.5});
  const int n[] = {1, 2, 3, 4}, e[] = {1};
  EXPECT_TRUE(four_factor_check(I, FourFactorCase::Cancellation, n, e).pass);
  const int n2[] = {1, 2, 3, 5}, e2[] = {-1, 1, -1, 1};
  auto eq = four_factor_check(I, FourFactorCase::Equality, n2, e2);
  EXPECT_NEAR(eq.rhs.real(), 0.125, 1e-15);
  EXPECT_TRUE(eq.pass) << eq.residual;
  auto sq = make({0.0, 0.0});
  EXPECT_NEAR(four_factor_check(sq, FourFactorCase::Equality, n2, e2).lhs.real(), 0.0, 1e-12);
  const int n3[] = {1, 2, 4}, e3[] = {1, -1, -1};
  auto s = four_factor_check(I, FourFactorCase::Squared, n3, e3);
  EXPECT_TRUE(s.pass);
  EXPECT_TRUE(std::isfinite(s.residual));
  EXPECT_THROW(four_factor_check(I, FourFactorCase::Equality, n2, e3), PreconditionError);
}

TEST(Correlations, ConjugationSymmetry) {
  auto I = make({0.0, {0.4, -0.3}, 0.2});
  for (auto s : {std::vector<int>{1, -1, 1}, std::vector<int>{-1, -1, 1}}) {
    const std::vector<int> idx{1, 3, 4};
    std::vector<int> flipped;
    for (int v : s) flipped.push_back(-v);
    EXPECT_NEAR(std::abs(I.integrate(signed_word(idx, s)) - std::conj(I.integrate(signed_word(idx, flipped)))), 0.0, 1e-12);
  }
}

TEST(Correlations, DecayFits) {
  auto I = make({0.0, 0.5});
  const int s2[] = {-1, 1};
  const int qs[] = {3, 4, 5, 6, 7, 8, 9, 10};
  auto fit2 = decay_fit(I, s2, qs, 1);
  EXPECT_NEAR(fit2.slope, std::log(0.5), 1e-6);
  EXPECT_TRUE(fit2.pass);
  for (std::size_t i = 1; i < fit2.magnitude.size(); ++i) EXPECT_NEAR(fit2.magnitude[i] / fit2.magnitude[i - 1], 0.5, 1e-9);
  const int s4[] = {-1, 1, -1, 1};
  auto fit4 = decay_fit(I, s4, qs, 1);
  EXPECT_NEAR(fit4.slope, 2 * std::log(0.5), 1e-6);
  EXPECT_TRUE(fit4.pass);
  auto sq = make({0.0, 0.0});
  auto fit0 = decay_fit(sq, s2, qs, 1);
  EXPECT_TRUE(fit0.underflow);
}

TEST(Correlations, NormComparability) {
  auto I = make({0.0, 0.5});
  auto r = norm_comparability_check(I, Seq::constant(1.0), 8);
  EXPECT_TRUE(r.l2.pass) << r.l2.residual;
  EXPECT_TRUE(r.kappa_sandwich);
  for (auto& s : r.scalar) EXPECT_TRUE(s.pass) << s.name << " " << s.residual;
  EXPECT_NEAR(r.scalar[0].lhs.real(), r.scalar[1].lhs.real(), 1e-10);
  EXPECT_TRUE(r.l4_certified);
  EXPECT_GT(r.l4_over_l2, 1.0);
}

TEST(Correlations, RecordingBatches) {
  auto I = make({0.0, 0.5});
  I.set_recording(true);
  covariance_check(I, 1, 4);
  covariance_check(I, 2, 5);
  I.set_recording(false);
  I.flush();
  const auto before = I.quadrature_count() + I.transfer_count();
  EXPECT_EQ(before, 2u);
  EXPECT_TRUE(covariance_check(I, 1, 4).pass);
  EXPECT_EQ(I.quadrature_count() + I.transfer_count(), before);
}
