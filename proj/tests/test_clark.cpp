#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "iclt/clark.hpp"
#include "iclt/errors.hpp"

using namespace iclt;

TEST(Clark, SquareMapAtoms) {
  auto f = BlaschkeProduct::make(1.0, {0.0, 0.0});
  auto mu = clark_measure(f, 1.0);
  ASSERT_EQ(mu.atoms().size(), 2u);
  EXPECT_NEAR(std::abs(mu.atoms()[0].z - cplx(1.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(mu.atoms()[1].z - cplx(-1.0)), 0.0, 1e-14);
  for (auto& a : mu.atoms()) EXPECT_NEAR(a.weight, 0.5, 1e-15);
  EXPECT_NEAR(std::abs(mu.moment(1)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(mu.moment(2) - 1.0), 0.0, 1e-14);
  auto nu = clark_measure(f, -1.0);
  EXPECT_NEAR(std::abs(nu.atoms()[0].z - cplx(0, 1)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(nu.atoms()[1].z - cplx(0, -1)), 0.0, 1e-14);
}

TEST(Clark, RotationHasOneAtom) {
  auto f = BlaschkeProduct::make(1.0, {0.0});
  const cplx alpha = std::polar(1.0, 2.2);
  auto mu = clark_measure(f, alpha);
  ASSERT_EQ(mu.atoms().size(), 1u);
  EXPECT_NEAR(std::abs(mu.atoms()[0].z - alpha), 0.0, 1e-15);
  EXPECT_NEAR(mu.atoms()[0].weight, 1.0, 1e-15);
}

TEST(Clark, PullbackAndNormalization) {
  const std::vector<std::vector<cplx>> zero_sets = {
      {0.0, 0.5}, {0.0, {0.3, 0.4}, {-0.2, 0.6}}, {0.0, 0.0, {0.1, -0.7}, 0.35}, {0.0, 0.9, -0.9, {0, 0.5}, {0.2, 0.2}}};
  for (const auto& zs : zero_sets) {
    auto f = BlaschkeProduct::make(std::polar(1.0, 0.4), zs);
    for (int j = 0; j < 64; ++j) {
      const cplx alpha = std::polar(1.0, 2 * std::numbers::pi * (j + 0.37) / 64);
      auto mu = clark_measure(f, alpha);
      ASSERT_EQ(static_cast<int>(mu.atoms().size()), f.degree());
      EXPECT_NEAR(mu.total_mass(), 1.0, 1e-10);
      for (const auto& a : mu.atoms()) EXPECT_LT(std::abs(f.eval(a.z) - alpha), 1e-9);
    }
  }
}

TEST(Clark, MomentIdentitiesHalfZero) {
  auto f = BlaschkeProduct::make(1.0, {0.0, 0.5});
  auto res = verify_moments(f, 1.0, 8);
  EXPECT_NEAR(std::abs(res[0].lhs - 0.5), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(res[1].rhs - (-0.5)), 0.0, 1e-12);
  for (const auto& r : res) EXPECT_LT(r.residual, 1e-10) << r.l;
}

TEST(Clark, GeneralMomentAgainstSeriesOracle) {
  // ∫ f^k z̄^l dm is the z^l Taylor coefficient of the k-th power of f.
  auto f = BlaschkeProduct::make(std::polar(1.0, -0.3), {0.0, {0.2, 0.5}, -0.4});
  const int lmax = 6;
  auto c = f.taylor_at_zero(lmax);
  const cplx alpha = std::polar(1.0, 1.3);
  std::vector<cplx> power{1.0};
  std::vector<cplx> rhs(lmax + 1, cplx{});
  cplx ak = 1.0;
  for (int k = 1; k <= lmax; ++k) {
    std::vector<cplx> next(lmax + 1, cplx{});
    for (int i = 0; i <= lmax; ++i)
      for (int j = 0; i + j <= lmax && i < static_cast<int>(power.size()); ++j) next[i + j] += power[i] * c[j];
    power = next;
    ak *= std::conj(alpha);
    for (int l = 0; l <= lmax; ++l) rhs[l] += ak * power[l];
  }
  auto mu = clark_measure(f, alpha);
  for (int l = 1; l <= lmax; ++l) EXPECT_NEAR(std::abs(mu.moment(l) - rhs[l]), 0.0, 1e-12) << l;
}

TEST(Clark, Disintegration) {
  auto f = BlaschkeProduct::make(1.0, {0.0, {0.3, -0.1}, 0.6});
  for (int m = -8; m <= 8; ++m) {
    auto g = TrigPolynomial::monomial(m);
    EXPECT_LT(verify_disintegration(f, g, 17), 1e-12) << m;
  }
  EXPECT_THROW(verify_disintegration(f, TrigPolynomial::monomial(4), 8), PreconditionError);
}

TEST(Clark, TransferIntegralMatchesQuadrature) {
  auto f = BlaschkeProduct::make(std::polar(1.0, 0.2), {0.0, {0.4, 0.1}});
  const std::vector<Word> ws = {
      Word{{1, -1}, {3, 1}},
      Word{{1, 1}, {2, -1}, {3, -1}, {5, 1}},
      Word{{0, 2}, {2, -1}, {4, -1}},
      Word{{2, -2}, {3, 1}, {4, 1}},
  };
  auto q = integrate_words(f, ws);
  ASSERT_TRUE(q.resolved);
  for (std::size_t i = 0; i < ws.size(); ++i)
    EXPECT_NEAR(std::abs(transfer_integral(f, ws[i]) - q.values[i]), 0.0, 1e-12) << to_string(ws[i]);
  // Deep covariance: λ^{j−k} with j − k = 20.
  EXPECT_NEAR(std::abs(transfer_integral(f, Word{{5, -1}, {25, 1}}) - std::pow(f.lambda(), 20)), 0.0, 1e-15);
}
