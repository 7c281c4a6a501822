#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iclt/correlations.hpp"
#include "iclt/exec.hpp"
#include "iclt/inner.hpp"

namespace iclt {

struct TestProduct {
  std::string label;
  BlaschkeProduct f;
};

/// Degrees 2–3 with |f'(0)| ∈ {0, 0.21, 0.35, 0.5}; two carry a nontrivial phase.
std::vector<TestProduct> default_test_products();
/// Degrees 2–5 for the Clark measure checks.
std::vector<TestProduct> clark_test_products();

struct SuiteRow {
  std::string product;
  std::string family;
  CorrelationReport report;
};

struct IdentitySuiteOptions {
  int n_max = 12;
  /// Factorization tuples are enumerated for 2..max_pairs pairs; n_max covers all of them.
  int max_pairs = 12;
  /// Random explicit sequences per product for the L² identities.
  int sequences = 3;
  std::uint64_t seed = 0;
  CorrelationOptions correlation;
};

struct IdentitySuiteStats {
  std::size_t words = 0;
  std::size_t quadrature_words = 0;
  std::size_t transfer_words = 0;
  std::size_t largest_grid = 0;
  /// max |quadrature − transfer| over the words quadrature resolved.
  double route_discrepancy = 0.0;
};

/// Every enumerated instance of the exact correlation identities for one product.
std::vector<SuiteRow> identity_suite(const TestProduct& product, const IdentitySuiteOptions& options,
                                     IdentitySuiteStats* stats = nullptr);

struct ClarkSuiteOptions {
  int alpha_count = 64;
  int l_max = 8;
  int m_max = 8;
  std::uint64_t seed = 0;
  QuadratureOptions quad;
  Exec exec;
};

/// Weight normalization, pullback, moment identities at random α, and
/// disintegration of trig monomials on an α-grid of alpha_count points.
std::vector<SuiteRow> clark_suite(const TestProduct& product, const ClarkSuiteOptions& options);

/// Pass rule of the acceptance thresholds: relative when the target is nonzero,
/// absolute when it vanishes.
bool within_tolerance(const CorrelationReport& r, double rel_tol, double abs_tol);

}  // namespace iclt
