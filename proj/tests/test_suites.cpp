#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "iclt/errors.hpp"
#include "iclt/suites.hpp"

using namespace iclt;

TEST(Suites, DefaultProductsCoverRequiredRates) {
  std::map<int, int> by_rate;
  for (const auto& p : default_test_products()) {
    EXPECT_GE(p.f.degree(), 2);
    EXPECT_LE(p.f.degree(), 3);
    by_rate[static_cast<int>(std::lround(std::abs(p.f.lambda()) * 100))]++;
  }
  for (int r : {0, 21, 35, 50}) EXPECT_GT(by_rate[r], 0) << r;
  EXPECT_EQ(by_rate.size(), 4u);
}

TEST(Suites, FactorizationTupleCount) {
  // Two separated pairs inside 1..n: the first pair has max m (2m−1 choices),
  // the second pair has both entries in (m, n].
  IdentitySuiteOptions o;
  o.n_max = 6;
  o.max_pairs = 2;
  o.sequences = 1;
  const TestProduct p{"zeros[0,0.5]", BlaschkeProduct::make(1.0, {0.0, 0.5})};
  int expected = 0;
  for (int m = 1; m < o.n_max; ++m) expected += (2 * m - 1) * (o.n_max - m) * (o.n_max - m);
  int got = 0;
  for (const auto& r : identity_suite(p, o)) got += r.family == "factorization";
  EXPECT_EQ(got, expected);
}

TEST(Suites, SmallIdentitySuitePasses) {
  IdentitySuiteOptions o;
  o.n_max = 6;
  o.sequences = 1;
  for (const auto& p : default_test_products()) {
    IdentitySuiteStats st;
    const auto rows = identity_suite(p, o, &st);
    EXPECT_GT(rows.size(), 500u);
    for (const auto& r : rows) ASSERT_TRUE(within_tolerance(r.report, 1e-8, 1e-9)) << p.label << " " << r.report.name;
    EXPECT_LT(st.route_discrepancy, 1e-12) << p.label;
  }
}

TEST(Suites, TransferOnlyMatchesAuto) {
  IdentitySuiteOptions o;
  o.n_max = 5;
  o.sequences = 1;
  const TestProduct p{"zeros[0,0.3,0.7]", BlaschkeProduct::make(1.0, {0.0, 0.3, 0.7})};
  const auto a = identity_suite(p, o);
  o.correlation.method = IntegralMethod::Transfer;
  const auto t = identity_suite(p, o);
  ASSERT_EQ(a.size(), t.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LT(std::abs(a[i].report.lhs - t[i].report.lhs), 1e-12);
}

TEST(Suites, ClarkSuitePasses) {
  ClarkSuiteOptions o;
  o.alpha_count = 32;
  for (const auto& p : clark_test_products()) {
    const auto rows = clark_suite(p, o);
    EXPECT_EQ(rows.size(), static_cast<std::size_t>(32 * (2 + o.l_max) + 2 * o.m_max + 1));
    for (const auto& r : rows) EXPECT_TRUE(r.report.pass) << p.label << " " << r.report.name;
  }
}

TEST(Suites, ToleranceRule) {
  EXPECT_TRUE(within_tolerance(make_report("x", 1e-10, 0.0, 0.0, false), 1e-8, 1e-9));
  EXPECT_FALSE(within_tolerance(make_report("x", 2e-9, 0.0, 0.0, false), 1e-8, 1e-9));
  EXPECT_TRUE(within_tolerance(make_report("x", 1e-3 + 1e-12, 1e-3, 0.0, false), 1e-8, 1e-9));
  EXPECT_FALSE(within_tolerance(make_report("x", 1e-3 + 1e-10, 1e-3, 0.0, false), 1e-8, 1e-9));
}

TEST(Suites, RejectsRotation) {
  const TestProduct p{"rotation", BlaschkeProduct::make(1.0, {0.0})};
  EXPECT_THROW(identity_suite(p, {}), PreconditionError);
}
