#include "iclt/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "iclt/errors.hpp"
#include "iclt/rng.hpp"
#include "iclt/summation.hpp"

namespace iclt {

namespace {
constexpr std::int64_t kBatch = 1 << 16;
constexpr std::uint64_t kPhaseStream = 1;
}  // namespace

CoefficientSequence CoefficientSequence::constant(cplx c) {
  CoefficientSequence s;
  s.kind_ = Kind::Constant;
  s.c_ = c;
  return s;
}

CoefficientSequence CoefficientSequence::power(double p) {
  CoefficientSequence s;
  s.kind_ = Kind::Power;
  s.p_ = p;
  return s;
}

CoefficientSequence CoefficientSequence::geometric(double r) {
  if (!(r > 0)) throw PreconditionError("geometric ratio must be positive");
  CoefficientSequence s;
  s.kind_ = Kind::Geometric;
  s.p_ = r;
  return s;
}

CoefficientSequence CoefficientSequence::explicit_values(std::vector<cplx> values) {
  if (values.empty()) throw PreconditionError("explicit sequence must be nonempty");
  CoefficientSequence s;
  s.kind_ = Kind::Explicit;
  s.list_ = std::move(values);
  return s;
}

CoefficientSequence CoefficientSequence::random_phase(std::vector<double> moduli, std::uint64_t seed) {
  if (moduli.empty()) throw PreconditionError("random_phase moduli must be nonempty");
  CoefficientSequence s;
  s.kind_ = Kind::RandomPhase;
  s.seed_ = seed;
  for (std::size_t n = 0; n < moduli.size(); ++n)
    s.list_.push_back(std::polar(moduli[n], rng::angle(seed, kPhaseStream, n + 1)));
  return s;
}

cplx CoefficientSequence::a(std::int64_t n) const {
  if (n < 1) throw PreconditionError("coefficient index must be >= 1");
  switch (kind_) {
    case Kind::Constant:
      return c_;
    case Kind::Power:
      return std::pow(static_cast<double>(n), p_);
    case Kind::Geometric:
      return std::pow(p_, static_cast<double>(n));
    case Kind::Explicit:
    case Kind::RandomPhase:
      return n <= static_cast<std::int64_t>(list_.size()) ? list_[n - 1] : cplx{};
  }
  return {};
}

std::vector<cplx> CoefficientSequence::values(std::int64_t first, std::int64_t count) const {
  std::vector<cplx> out(std::max<std::int64_t>(count, 0));
  for (std::int64_t i = 0; i < count; ++i) out[i] = a(first + i);
  return out;
}

bool CoefficientSequence::summable() const {
  switch (kind_) {
    case Kind::Constant:
      return c_ == cplx{};
    case Kind::Power:
      return p_ < -0.5;
    case Kind::Geometric:
      return p_ < 1.0;
    case Kind::Explicit:
    case Kind::RandomPhase:
      return true;
  }
  return false;
}

std::int64_t CoefficientSequence::support_end() const {
  if (kind_ == Kind::Explicit || kind_ == Kind::RandomPhase) return static_cast<std::int64_t>(list_.size());
  return -1;
}

std::string CoefficientSequence::describe() const {
  switch (kind_) {
    case Kind::Constant:
      return "constant";
    case Kind::Power:
      return "power";
    case Kind::Geometric:
      return "geometric";
    case Kind::Explicit:
      return "explicit";
    case Kind::RandomPhase:
      return "random_phase";
  }
  return "";
}

double energy_range(const CoefficientSequence& seq, std::int64_t first, std::int64_t last) {
  if (first < 1) throw PreconditionError("energy range must start at n >= 1");
  PairwiseAccumulator<double> acc;
  for (std::int64_t n0 = first; n0 <= last; n0 += kBatch) {
    const auto v = seq.values(n0, std::min(kBatch, last - n0 + 1));
    for (const cplx& x : v) acc.add(std::norm(x));
  }
  return acc.total();
}

double energy(const CoefficientSequence& seq, std::int64_t N) {
  if (N < 1) throw PreconditionError("energy needs N >= 1");
  return energy_range(seq, 1, N);
}

std::int64_t lag_cutoff(cplx lambda, std::int64_t span) {
  const double a = std::abs(lambda);
  if (a == 0.0 || span <= 0) return 0;
  const auto k = static_cast<std::int64_t>(std::ceil(std::log(1e-16) / std::log(a)));
  return std::min(span, k);
}

namespace {

void check_lambda(cplx lambda) {
  if (!(std::abs(lambda) < 1.0)) throw DomainError("|lambda| must be < 1");
}

// Σ_{n=first}^{last−k} ā_n a_{n+k} for k = 1..K, streamed in batches with K lookahead.
std::vector<cplx> lag_sums(const CoefficientSequence& seq, std::int64_t first, std::int64_t last, std::int64_t K) {
  std::vector<PairwiseAccumulator<cplx>> acc(K);
  for (std::int64_t n0 = first; n0 <= last; n0 += kBatch) {
    const std::int64_t len = std::min(kBatch, last - n0 + 1);
    const std::int64_t ext = std::min(len + K, last - n0 + 1);
    const auto v = seq.values(n0, ext);
    for (std::int64_t i = 0; i < len; ++i) {
      const cplx ab = std::conj(v[i]);
      const std::int64_t kmax = std::min<std::int64_t>(K, ext - 1 - i);
      for (std::int64_t k = 1; k <= kmax; ++k) acc[k - 1].add(ab * v[i + k]);
    }
  }
  std::vector<cplx> out(K);
  for (std::int64_t k = 0; k < K; ++k) out[k] = acc[k].total();
  return out;
}

}  // namespace

double block_sigma2(const CoefficientSequence& seq, cplx lambda, std::int64_t first, std::int64_t last) {
  check_lambda(lambda);
  if (first < 1 || last < first) throw PreconditionError("block must be a nonempty range of indices >= 1");
  const double diag = energy_range(seq, first, last);
  const std::int64_t K = lag_cutoff(lambda, last - first);
  if (K == 0) return diag;
  const auto lags = lag_sums(seq, first, last, K);
  cplx cross{};
  cplx lk = 1.0;
  for (std::int64_t k = 0; k < K; ++k) {
    lk *= lambda;
    cross += lk * lags[k];
  }
  return diag + 2.0 * cross.real();
}

double sigma2(const CoefficientSequence& seq, cplx lambda, std::int64_t N) {
  if (N < 1) throw PreconditionError("sigma2 needs N >= 1");
  return block_sigma2(seq, lambda, 1, N);
}

double kappa(cplx lambda) {
  const double a = std::abs(lambda);
  return (1.0 + a) / (1.0 - a);
}

double energy_tail_bound(const CoefficientSequence& seq, std::int64_t cutoff) {
  const double c = static_cast<double>(cutoff);
  switch (seq.kind()) {
    case CoefficientSequence::Kind::Power: {
      // Σ_{n>c} n^{2p} ≤ ∫_c^∞ x^{2p} dx for 2p < −1.
      const double q = 2.0 * seq.parameter();
      return std::pow(c, q + 1.0) / (-q - 1.0);
    }
    case CoefficientSequence::Kind::Geometric: {
      const double r2 = seq.parameter() * seq.parameter();
      return std::pow(r2, c + 1.0) / (1.0 - r2);
    }
    case CoefficientSequence::Kind::Explicit:
    case CoefficientSequence::Kind::RandomPhase:
      return cutoff >= seq.support_end() ? 0.0 : energy_range(seq, cutoff + 1, seq.support_end());
    case CoefficientSequence::Kind::Constant:
      return seq.summable() ? 0.0 : INFINITY;
  }
  return INFINITY;
}

TailVariance tail_sigma2(const CoefficientSequence& seq, cplx lambda, std::int64_t N, std::int64_t cutoff) {
  check_lambda(lambda);
  if (!seq.summable()) throw DomainError("divergent sequence for tail mode");
  if (N < 1 || cutoff < N) throw PreconditionError("tail needs 1 <= N <= cutoff");
  TailVariance t;
  t.cutoff = cutoff;
  t.value = block_sigma2(seq, lambda, N, cutoff);
  t.lags = lag_cutoff(lambda, cutoff - N);

  // σ²(N) − value = ‖Y‖² + 2 Re⟨X, Y⟩ with X the kept sum and Y the dropped tail:
  // ‖Y‖² ≤ κ E_tail, and ⟨X, Y⟩ only sees pairs straddling the cutoff.
  const double a = std::abs(lambda);
  const double e_tail = energy_tail_bound(seq, cutoff);
  double straddle = 0.0;
  const std::int64_t K = lag_cutoff(lambda, std::int64_t{1} << 40);
  double ak = 1.0;
  for (std::int64_t k = 1; k <= K; ++k) {
    ak *= a;
    for (std::int64_t n = std::max(N, cutoff - k + 1); n <= cutoff; ++n)
      straddle += ak * std::abs(seq.a(n)) * std::abs(seq.a(n + k));
  }
  const double total_energy = energy_range(seq, N, cutoff) + e_tail;
  const double lag_rest = a > 0 ? std::pow(a, static_cast<double>(K + 1)) / (1.0 - a) * total_energy : 0.0;
  const double kept_lag_rest =
      t.lags < cutoff - N && a > 0 ? 2.0 * std::pow(a, static_cast<double>(t.lags + 1)) / (1.0 - a) * total_energy : 0.0;
  t.truncation_bound = kappa(lambda) * e_tail + 2.0 * (straddle + lag_rest) + kept_lag_rest;
  return t;
}

TailVariance tail_sigma2_to_tolerance(const CoefficientSequence& seq, cplx lambda, std::int64_t N, double rel_tol,
                                      std::int64_t max_cutoff) {
  std::int64_t c = std::max<std::int64_t>(2 * N, 64);
  if (seq.support_end() > 0) c = std::max(c, seq.support_end());
  std::int64_t lo = N;
  for (;; c *= 2) {
    if (c > max_cutoff) throw NumericalFailure("tail truncation bound not reached below the cutoff cap");
    if (tail_sigma2(seq, lambda, N, c).relative_bound() < rel_tol) break;
    lo = c;
  }
  // Bisect between the last failing and first passing cutoff.
  std::int64_t hi = c;
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (tail_sigma2(seq, lambda, N, mid).relative_bound() < rel_tol)
      hi = mid;
    else
      lo = mid;
  }
  return tail_sigma2(seq, lambda, N, hi);
}

double growth_ratio(const CoefficientSequence& seq, std::int64_t N) {
  const double s = energy(seq, N);
  if (!(s > 0)) throw PreconditionError("growth ratio undefined: all-zero prefix");
  return std::norm(seq.a(N)) / s;
}

namespace {

double faulhaber_ratio(std::int64_t N, double p) {
  const double n = static_cast<double>(N);
  if (p == 0.0) return 1.0 / n;
  if (p == 1.0) return n * n / (n * (n + 1) * (2 * n + 1) / 6.0);
  if (p == 2.0) return n * n * n * n / (n * (n + 1) * (2 * n + 1) * (3 * n * n + 3 * n - 1) / 30.0);
  return -1.0;
}

}  // namespace

double phi_envelope(const CoefficientSequence& seq, std::int64_t N, std::int64_t horizon) {
  if (N < 1) throw PreconditionError("phi_envelope needs N >= 1");
  using K = CoefficientSequence::Kind;
  if (seq.kind() == K::Constant) {
    if (seq.constant_value() == cplx{}) throw PreconditionError("phi undefined for the zero sequence");
    return 1.0 / static_cast<double>(N);
  }
  if (seq.kind() == K::Power) {
    const double p = seq.parameter();
    // p ≥ 0: max is the last term and the raw ratio decreases; p < 0: max is a_1 = 1.
    if (p < 0) return 1.0 / energy(seq, N);
    const double closed = faulhaber_ratio(N, p);
    if (closed > 0) return closed;
    return std::norm(seq.a(N)) / energy(seq, N);
  }
  if (horizon < N) throw PreconditionError("horizon must be >= N");
  double run_max = 0.0, s = 0.0, phi = 0.0;
  CompensatedSum<double> acc;
  for (std::int64_t m = 1; m <= horizon; ++m) {
    const double e = std::norm(seq.a(m));
    run_max = std::max(run_max, e);
    acc.add(e);
    s = acc.total();
    if (m >= N && s > 0) phi = std::max(phi, run_max / s);
  }
  return phi;
}

VarianceProfile variance_profile(const CoefficientSequence& seq, cplx lambda, std::int64_t N, std::int64_t horizon) {
  VarianceProfile v;
  v.N = N;
  v.S_N2 = energy(seq, N);
  v.sigma_N2 = sigma2(seq, lambda, N);
  v.growth_ratio = growth_ratio(seq, N);
  v.phi = phi_envelope(seq, N, horizon);
  return v;
}

}  // namespace iclt
