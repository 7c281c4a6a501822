#include "iclt/clt.hpp"

#include <cmath>
#include <numbers>

#include "iclt/circle_quad.hpp"
#include "iclt/errors.hpp"
#include "iclt/orbit_kernels.hpp"
#include "iclt/rng.hpp"
#include "iclt/summation.hpp"

namespace iclt {

std::vector<cplx> sample_points(const SamplingSpec& s) {
  if (s.count == 0) throw PreconditionError("sample count must be >= 1");
  if (s.kind == SamplingSpec::Kind::Grid) return uniform_grid(s.count, s.offset).points();
  return mc_points({s.seed, s.count});
}

SampleSet simulate(const ExperimentConfig& config, std::int64_t N) {
  const BlaschkeProduct& f = config.f;
  if (f.is_rotation()) throw PreconditionError("f is a rotation; the limit theorem needs a non-rotation");
  if (N < 1) throw PreconditionError("N must be >= 1");
  SampleSet out;
  out.N = N;
  out.mode = config.mode;
  out.sampling = config.sampling;
  const auto points = sample_points(config.sampling);

  std::vector<cplx> coeffs;
  if (config.mode == SumMode::Partial) {
    if (config.seq.summable())
      out.warnings.push_back("sequence is summable: partial sums converge and no growth to a normal limit is expected");
    out.sigma2 = sigma2(config.seq, f.lambda(), N);
    out.S2 = energy(config.seq, N);
    out.last_index = N;
    coeffs = config.seq.values(1, N);
  } else {
    if (!config.seq.summable()) throw DomainError("divergent sequence for tail mode");
    const TailVariance tv = config.cutoff > 0 ? tail_sigma2(config.seq, f.lambda(), N, config.cutoff)
                                              : tail_sigma2_to_tolerance(config.seq, f.lambda(), N, config.tail_rel_tol);
    if (!(tv.relative_bound() < config.tail_rel_tol))
      throw PreconditionError("tail cutoff " + std::to_string(tv.cutoff) + " leaves relative truncation bound " +
                              std::to_string(tv.relative_bound()));
    out.sigma2 = tv.value;
    out.truncation_bound = tv.truncation_bound;
    out.S2 = energy_range(config.seq, N, tv.cutoff);
    out.last_index = tv.cutoff;
    coeffs = config.seq.values(N, tv.cutoff - N + 1);
  }
  if (!(out.sigma2 > 0)) throw NumericalFailure("nonpositive variance normalizer");

  out.values = kernels::orbit_partial_sums(f, points, config.mode == SumMode::Partial ? 1 : static_cast<int>(N), coeffs,
                                           config.exec);
  const double scale = std::sqrt(2.0 / out.sigma2);
  for (auto& v : out.values) {
    v *= scale;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NumericalFailure("non-finite sample value");
  }
  return out;
}

std::vector<cplx> default_t_grid() {
  std::vector<cplx> t{0.0};
  for (int r = 1; r <= 12; ++r)
    for (int k = 0; k < 8; ++k) t.push_back(std::polar(0.25 * r, std::numbers::pi * k / 8));
  return t;
}

std::vector<CfRow> cf_curve(std::span<const cplx> samples, std::span<const cplx> t_grid, const Exec& exec) {
  std::vector<CfRow> rows(t_grid.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, exec.threads))
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(t_grid.size()); ++i) {
    const cplx t = t_grid[i];
    PairwiseAccumulator<cplx> acc;
    for (const cplx& x : samples) {
      const double s = (std::conj(t) * x).real();
      acc.add({std::cos(s), std::sin(s)});
    }
    CfRow r;
    r.t = t;
    r.empirical = acc.total() / static_cast<double>(samples.size());
    r.target = std::exp(-0.5 * std::norm(t));
    r.gap = std::abs(r.empirical - r.target);
    rows[i] = r;
  }
  return rows;
}

double kolmogorov_q(double lambda) {
  if (lambda <= 0) return 1.0;
  if (lambda < 1.18) {
    // Jacobi-transformed series, fast for small λ.
    const double y = std::exp(-std::numbers::pi * std::numbers::pi / (8 * lambda * lambda));
    double s = 0.0;
    for (int k = 1; k <= 7; k += 2) s += std::pow(y, k * k);
    return std::clamp(1.0 - std::sqrt(2 * std::numbers::pi) / lambda * s, 0.0, 1.0);
  }
  double s = 0.0, sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += sign * term;
    if (term < 1e-300) break;
    sign = -sign;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

GaussianReport gaussian_tests(std::span<const cplx> samples, std::span<const cplx> t_grid,
                              const GaussianThresholds& th, const Exec& exec) {
  if (samples.size() < 1000) throw PreconditionError("gaussian_tests needs at least 1000 samples");
  GaussianReport r;
  r.count = samples.size();
  const double n = static_cast<double>(samples.size());
  PairwiseAccumulator<cplx> mean;
  PairwiseAccumulator<double> m2;
  for (const cplx& x : samples) {
    mean.add(x);
    m2.add(std::norm(x));
  }
  r.mean = mean.total() / n;
  r.second_moment = m2.total() / n;
  PairwiseAccumulator<double> cxx, cyy, cxy;
  for (const cplx& x : samples) {
    const cplx d = x - r.mean;
    cxx.add(d.real() * d.real());
    cyy.add(d.imag() * d.imag());
    cxy.add(d.real() * d.imag());
  }
  r.cov[0][0] = cxx.total() / n;
  r.cov[1][1] = cyy.total() / n;
  r.cov[0][1] = r.cov[1][0] = cxy.total() / n;

  r.cf_table = cf_curve(samples, t_grid, exec);
  for (const auto& row : r.cf_table)
    if (std::abs(row.t) <= th.cf_radius * (1 + 1e-12)) r.cf_sup_gap = std::max(r.cf_sup_gap, row.gap);

  std::vector<double> re, im, rad;
  re.reserve(samples.size());
  im.reserve(samples.size());
  rad.reserve(samples.size());
  for (const cplx& x : samples) {
    re.push_back(x.real());
    im.push_back(x.imag());
    rad.push_back(0.5 * std::norm(x));
  }
  r.ks_re = ks_test(std::move(re), normal_cdf);
  r.ks_im = ks_test(std::move(im), normal_cdf);
  r.radial = ks_test(std::move(rad), [](double x) { return x <= 0 ? 0.0 : -std::expm1(-x); });

  r.cf_pass = r.cf_sup_gap < th.cf_gap;
  r.ks_re_pass = r.ks_re.p_value > th.ks_p;
  r.ks_im_pass = r.ks_im.p_value > th.ks_p;
  r.radial_pass = r.radial.p_value > th.ks_p;
  r.pass = r.cf_pass && r.ks_re_pass && r.ks_im_pass && r.radial_pass;
  return r;
}

std::vector<cplx> synthetic_normal(std::size_t count, std::uint64_t seed) {
  std::vector<cplx> out(count);
  for (std::size_t j = 0; j < count; ++j) {
    // 1 − u lies in (0, 1], so the logarithm is finite.
    const double u1 = 1.0 - rng::uniform(seed, 2, j);
    const double u2 = rng::uniform(seed, 3, j);
    out[j] = std::polar(std::sqrt(-2.0 * std::log(u1)), 2 * std::numbers::pi * u2);
  }
  return out;
}

std::vector<SweepRow> sweep(const ExperimentConfig& config) {
  for (std::size_t i = 1; i < config.N_list.size(); ++i)
    if (!(config.N_list[i] > config.N_list[i - 1])) throw PreconditionError("N list must be increasing");
  const auto tg = config.t_grid.empty() ? default_t_grid() : config.t_grid;
  std::vector<SweepRow> rows;
  for (auto N : config.N_list) {
    const SampleSet s = simulate(config, N);
    const GaussianReport g = gaussian_tests(s.values, tg, config.thresholds, config.exec);
    rows.push_back({N, g.second_moment, g.cf_sup_gap, g.ks_re, g.ks_im, g.radial, g.pass});
  }
  return rows;
}

std::vector<OptimalityRow> optimality_demo(const BlaschkeProduct& f, std::span<const std::int64_t> N_list,
                                           const SamplingSpec& sampling, const GaussianThresholds& thresholds,
                                           const Exec& exec) {
  ExperimentConfig cfg;
  cfg.f = f;
  cfg.seq = CoefficientSequence::geometric(2.0);
  cfg.sampling = sampling;
  cfg.exec = exec;
  const auto tg = default_t_grid();
  std::vector<OptimalityRow> rows;
  for (auto N : N_list) {
    OptimalityRow row;
    row.N = N;
    row.growth_ratio = growth_ratio(cfg.seq, N);
    const SampleSet s = simulate(cfg, N);
    row.report = gaussian_tests(s.values, tg, thresholds, exec);
    for (const cplx& v : s.values) row.max_abs = std::max(row.max_abs, std::abs(v));
    double l1 = 0.0;
    for (std::int64_t n = 1; n <= N; ++n) l1 += std::abs(cfg.seq.a(n));
    row.hard_bound = std::numbers::sqrt2 * l1 / std::sqrt(s.sigma2);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace iclt
