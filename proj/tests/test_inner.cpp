#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "iclt/errors.hpp"
#include "iclt/inner.hpp"

using iclt::BlaschkeProduct;
using iclt::cplx;

namespace {

// Factor-by-factor evaluation straight from the definition.
cplx direct(cplx phase, const std::vector<cplx>& zeros, cplx z) {
  cplx v = phase;
  for (const cplx& a : zeros) v *= a == cplx{} ? z : (std::abs(a) / a) * (a - z) / (1.0 - std::conj(a) * z);
  return v;
}

}  // namespace

TEST(Inner, HalfZeroValues) {
  auto f = BlaschkeProduct::make(1.0, {0.0, 0.5});
  EXPECT_NEAR(std::abs(f.eval(1.0) - cplx(-1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f.lambda() - cplx(0.5)), 0.0, 1e-15);
  EXPECT_NEAR(f.boundary_derivative_modulus(1.0), 4.0, 1e-14);
  EXPECT_NEAR(f.boundary_derivative_modulus(-1.0), 1.0 + 0.75 / 2.25, 1e-14);
}

TEST(Inner, MatchesDirectProduct) {
  const cplx phase = std::polar(1.0, 0.7);
  const std::vector<cplx> zeros{0.0, {0.3, -0.4}, {-0.6, 0.1}, 0.2};
  auto f = BlaschkeProduct::make(phase, zeros);
  for (int k = 0; k < 50; ++k) {
    const cplx z = std::polar(0.3 + 0.014 * k, 0.37 * k);
    EXPECT_NEAR(std::abs(f.eval(z) - direct(phase, zeros, z)), 0.0, 1e-14);
    const cplx u = std::polar(1.0, 0.37 * k);
    EXPECT_NEAR(std::abs(f.eval_boundary(u)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(f.to_rational()(z) - direct(phase, zeros, z)), 0.0, 1e-13);
  }
}

TEST(Inner, TaylorAgainstClosedForm) {
  // z(a − z)/(1 − a z) with a = 1/2: c_1 = a, c_k = −(1 − a²) a^{k−2} for k ≥ 2.
  auto f = BlaschkeProduct::make(1.0, {0.0, 0.5});
  auto c = f.taylor_at_zero(16);
  EXPECT_EQ(c[0], cplx{});
  EXPECT_NEAR(std::abs(c[1] - 0.5), 0.0, 1e-16);
  for (int k = 2; k <= 16; ++k) EXPECT_NEAR(std::abs(c[k] + 0.75 * std::pow(0.5, k - 2)), 0.0, 1e-15) << k;
}

TEST(Inner, TaylorAgainstCauchyIntegral) {
  auto f = BlaschkeProduct::make(std::polar(1.0, -1.1), {0.0, {0.2, 0.5}, {-0.7, 0.0}});
  auto c = f.taylor_at_zero(8);
  const int M = 256;
  const double r = 0.5;
  for (int k = 0; k <= 8; ++k) {
    cplx s{};
    for (int j = 0; j < M; ++j) {
      const cplx z = std::polar(r, 2 * std::numbers::pi * j / M);
      s += f.eval(z) * std::pow(std::conj(z) / (r * r), k);
    }
    EXPECT_NEAR(std::abs(s / double(M) - c[k]), 0.0, 1e-12) << k;
  }
}

TEST(Inner, LambdaIsDerivativeAtOrigin) {
  auto f = BlaschkeProduct::make(std::polar(1.0, 0.3), {0.0, {0.3, 0.3}, {-0.5, 0.2}});
  const double h = 1e-6;
  const cplx fd = (f.eval(h) - f.eval(-h)) / (2 * h);
  EXPECT_NEAR(std::abs(fd - f.lambda()), 0.0, 1e-9);
  auto g = BlaschkeProduct::make(1.0, {0.0, 0.0, 0.4});
  EXPECT_EQ(g.lambda(), cplx{});
}

TEST(Inner, BoundaryDerivativeAgainstFiniteDifference) {
  auto f = BlaschkeProduct::make(1.0, {0.0, {0.4, -0.2}, 0.6});
  for (int k = 0; k < 12; ++k) {
    const double t = 0.5 * k;
    const double h = 1e-6;
    const cplx fd = (f.eval(std::polar(1.0, t + h)) - f.eval(std::polar(1.0, t - h))) / (2 * h);
    EXPECT_NEAR(std::abs(fd), f.boundary_derivative_modulus(std::polar(1.0, t)), 1e-7);
  }
}

TEST(Inner, ComposeMatchesIterate) {
  auto f = BlaschkeProduct::make(1.0, {0.0, {0.3, 0.1}});
  auto r2 = iclt::compose(f.to_rational(), f.to_rational());
  auto r3 = iclt::compose(r2, f.to_rational());
  EXPECT_EQ(r3.degree(), 8);
  for (int k = 0; k < 10; ++k) {
    const cplx z = std::polar(1.0, 0.61 * k);
    EXPECT_NEAR(std::abs(r3(z) - f.iterate(3, z)), 0.0, 1e-12);
  }
}

TEST(Inner, RejectsBadInput) {
  EXPECT_THROW(BlaschkeProduct::make(1.0, {0.0, 1.0}), iclt::DomainError);
  EXPECT_THROW(BlaschkeProduct::make(1.0, {0.5}), iclt::DomainError);
  EXPECT_THROW(BlaschkeProduct::make(1.1, {0.0}), iclt::DomainError);
  EXPECT_THROW(BlaschkeProduct::make(1.0, {0.0}).taylor_at_zero(17), iclt::PreconditionError);
  EXPECT_NO_THROW(BlaschkeProduct::make(1.0, {0.0, 1.0 - 1e-11}));
}
