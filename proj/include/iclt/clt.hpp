#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <cstdint>
#include <string>
#include <vector>

#include "iclt/exec.hpp"
#include "iclt/inner.hpp"
#include "iclt/sequences.hpp"

namespace iclt {

struct SamplingSpec {
  enum class Kind { Grid, MonteCarlo };
  Kind kind = Kind::Grid;
  std::size_t count = 200000;
  std::uint64_t seed = 0;
  double offset = 0.0;  // grid only
};

enum class SumMode { Partial, Tail };

struct GaussianThresholds {
  double cf_gap = 0.02;   // sup over |t| ≤ cf_radius
  double cf_radius = 3.0;
  double ks_p = 0.01;     // each marginal and the radial test
};

struct ExperimentConfig {
  BlaschkeProduct f = BlaschkeProduct::make(1.0, {0.0, 0.5});
  CoefficientSequence seq = CoefficientSequence::constant(1.0);
  std::vector<std::int64_t> N_list{400};
  SumMode mode = SumMode::Partial;
  /// Tail mode: explicit cutoff, or 0 to pick the smallest one whose
  /// relative truncation bound is below tail_rel_tol.
  std::int64_t cutoff = 0;
  double tail_rel_tol = 1e-3;
  SamplingSpec sampling;
  std::vector<cplx> t_grid;  // empty: default_t_grid()
  GaussianThresholds thresholds;
  Exec exec;
};

/// T_N = (√2/σ) Σ a_n fⁿ at each sample point.
struct SampleSet {
  std::vector<cplx> values;
  std::int64_t N = 0;
  std::int64_t last_index = 0;  // N, or the cutoff in tail mode
  double sigma2 = 0.0;
  double S2 = 0.0;
  double truncation_bound = 0.0;  // tail mode, absolute bound on σ² error
  SumMode mode = SumMode::Partial;
  SamplingSpec sampling;
  std::vector<std::string> warnings;
};

/// Sample points: equispaced grid or index-keyed uniform draws.
std::vector<cplx> sample_points(const SamplingSpec& s);

/// Throws PreconditionError for a rotation; tail mode throws DomainError for a
/// divergent sequence. A summable sequence in partial mode is only a warning.
SampleSet simulate(const ExperimentConfig& config, std::int64_t N);

struct CfRow {
  cplx t;
  cplx empirical;
  double target = 0.0;
  double gap = 0.0;
};

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

struct GaussianReport {
  std::size_t count = 0;
  cplx mean;
  double second_moment = 0.0;
  double cov[2][2] = {{0, 0}, {0, 0}};
  std::vector<CfRow> cf_table;
  double cf_sup_gap = 0.0;  // over rows with |t| ≤ cf_radius
  KsResult ks_re, ks_im, radial;
  bool cf_pass = false, ks_re_pass = false, ks_im_pass = false, radial_pass = false;
  bool pass = false;
};

/// Polar grid of radii 0.25..3 (step 0.25) × 8 angles in [0, π), plus t = 0.
std::vector<cplx> default_t_grid();

/// φ̂(t) = mean of exp(i⟨t, T⟩), ⟨t, T⟩ = Re(t̄ T), against e^{−|t|²/2}.
std::vector<CfRow> cf_curve(std::span<const cplx> samples, std::span<const cplx> t_grid, const Exec& exec = {});

/// Kolmogorov asymptotic tail Q(λ) = 2 Σ (−1)^{k−1} e^{−2k²λ²}.
double kolmogorov_q(double lambda);
/// One-sample KS test against a continuous CDF; p from the asymptotic law
/// with the effective-size correction √n + 0.12 + 0.11/√n.
template <class Cdf>
KsResult ks_test(std::vector<double> xs, Cdf&& cdf);
double normal_cdf(double x);

/// Requires at least 1000 samples.
GaussianReport gaussian_tests(std::span<const cplx> samples, std::span<const cplx> t_grid,
                              const GaussianThresholds& thresholds, const Exec& exec = {});

/// Standard complex normal draws (independent N(0,1) parts) by Box–Muller on
/// counter-based uniforms.
std::vector<cplx> synthetic_normal(std::size_t count, std::uint64_t seed);

struct SweepRow {
  std::int64_t N = 0;
  double second_moment = 0.0;
  double cf_sup_gap = 0.0;
  KsResult ks_re, ks_im, radial;
  bool pass = false;
};

std::vector<SweepRow> sweep(const ExperimentConfig& config);

struct OptimalityRow {
  std::int64_t N = 0;
  double growth_ratio = 0.0;
  GaussianReport report;
  double max_abs = 0.0;
  double hard_bound = 0.0;  // √2 Σ|a_n| / σ_N
};

/// Geometric(2) coefficients, which violate the growth condition.
std::vector<OptimalityRow> optimality_demo(const BlaschkeProduct& f, std::span<const std::int64_t> N_list,
                                           const SamplingSpec& sampling, const GaussianThresholds& thresholds,
                                           const Exec& exec = {});

// --- template definitions ---

template <class Cdf>
KsResult ks_test(std::vector<double> xs, Cdf&& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = cdf(xs[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - F, F - static_cast<double>(i) / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_q((sn + 0.12 + 0.11 / sn) * d)};
}

}  // namespace iclt
