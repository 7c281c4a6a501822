#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "iclt/clt.hpp"
#include "iclt/errors.hpp"

using namespace iclt;
using Seq = CoefficientSequence;

TEST(Clt, KolmogorovSeriesReferenceValues) {
  // Q(λ) at standard critical points: 0.05 ↔ 1.3581, 0.01 ↔ 1.6276.
  EXPECT_NEAR(kolmogorov_q(1.3581), 0.05, 1e-4);
  EXPECT_NEAR(kolmogorov_q(1.6276), 0.01, 1e-4);
  EXPECT_NEAR(kolmogorov_q(0.5), 0.9639, 1e-4);
  // The two series agree where they switch.
  EXPECT_NEAR(kolmogorov_q(1.18 - 1e-12), kolmogorov_q(1.18), 1e-12);
}

TEST(Clt, SyntheticNormalPasses) {
  auto x = synthetic_normal(200000, 17);
  auto tg = default_t_grid();
  auto r = gaussian_tests(x, tg, {});
  EXPECT_TRUE(r.pass) << r.cf_sup_gap << " " << r.ks_re.p_value << " " << r.ks_im.p_value << " " << r.radial.p_value;
  EXPECT_NEAR(r.second_moment, 2.0, 0.03);
  EXPECT_EQ(r.cf_table[0].gap, 0.0);
}

TEST(Clt, ConstantSamplesFail) {
  std::vector<cplx> x(5000, cplx(0.3, -0.1));
  auto tg = default_t_grid();
  auto r = gaussian_tests(x, tg, {});
  EXPECT_FALSE(r.pass);
  double gap_half = 0;
  for (auto& row : r.cf_table)
    if (std::abs(row.t) >= 0.5) gap_half = std::max(gap_half, row.gap);
  EXPECT_GT(gap_half, 0.02);
}

TEST(Clt, SingleTermModulus) {
  ExperimentConfig c;
  c.seq = Seq::constant(1.0);
  c.sampling.count = 1024;
  auto s = simulate(c, 1);
  for (auto v : s.values) EXPECT_NEAR(std::abs(v), std::numbers::sqrt2, 1e-14);
}

TEST(Clt, ExactMoments) {
  // d^N ≤ grid size: z² with N = 8 on 1024 points is exact.
  ExperimentConfig c;
  c.f = BlaschkeProduct::make(1.0, {0.0, 0.0});
  c.seq = Seq::explicit_values({1.0, {0.5, 0.5}, -1.0, 2.0, 0.3, 1.0, -0.7, 0.2});
  c.sampling.count = 1024;
  c.sampling.offset = 0.3;
  auto s = simulate(c, 8);
  cplx m{};
  double m2 = 0;
  for (auto v : s.values) {
    m += v;
    m2 += std::norm(v);
  }
  EXPECT_LT(std::abs(m) / 1024, 1e-12);
  EXPECT_NEAR(m2 / 1024, 2.0, 1e-12);
}

TEST(Clt, RotationRejectedAndTailChecks) {
  ExperimentConfig c;
  c.f = BlaschkeProduct::make(1.0, {0.0});
  EXPECT_THROW(simulate(c, 10), PreconditionError);
  ExperimentConfig t;
  t.mode = SumMode::Tail;
  EXPECT_THROW(simulate(t, 10), DomainError);
  ExperimentConfig w;
  w.seq = Seq::geometric(0.5);
  w.sampling.count = 2000;
  EXPECT_FALSE(simulate(w, 5).warnings.empty());
}

TEST(Clt, DeterministicAcrossThreads) {
  ExperimentConfig c;
  c.sampling.count = 20000;
  c.sampling.kind = SamplingSpec::Kind::MonteCarlo;
  c.sampling.seed = 5;
  auto a = simulate(c, 50);
  c.exec.threads = 4;
  auto b = simulate(c, 50);
  EXPECT_EQ(a.values, b.values);
  auto tg = default_t_grid();
  auto ra = gaussian_tests(a.values, tg, {}, {1});
  auto rb = gaussian_tests(b.values, tg, {}, {4});
  for (std::size_t i = 0; i < ra.cf_table.size(); ++i) EXPECT_EQ(ra.cf_table[i].empirical, rb.cf_table[i].empirical);
}

TEST(Clt, OptimalityGrowth) {
  auto f = BlaschkeProduct::make(1.0, {0.0, 0.5});
  const std::int64_t Ns[] = {20};
  SamplingSpec s{SamplingSpec::Kind::MonteCarlo, 20000, 3, 0.0};
  auto rows = optimality_demo(f, Ns, s, {});
  EXPECT_NEAR(rows[0].growth_ratio, 3.0 * std::pow(4.0, 20) / (std::pow(4.0, 21) - 4), 1e-15);
  EXPECT_LE(rows[0].max_abs, rows[0].hard_bound);
  EXPECT_FALSE(rows[0].report.pass);
}
