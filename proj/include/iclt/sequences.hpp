#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "iclt/inner.hpp"

namespace iclt {

/// Procedural coefficients a_n, n ≥ 1.
class CoefficientSequence {
 public:
  enum class Kind { Constant, Power, Geometric, Explicit, RandomPhase };

  static CoefficientSequence constant(cplx c);
  /// a_n = n^p.
  static CoefficientSequence power(double p);
  /// a_n = r^n.
  static CoefficientSequence geometric(double r);
  /// a_n = values[n−1], zero past the end.
  static CoefficientSequence explicit_values(std::vector<cplx> values);
  /// a_n = moduli[n−1] · e^{iθ_n}, θ_n keyed on (seed, n); zero past the end.
  static CoefficientSequence random_phase(std::vector<double> moduli, std::uint64_t seed);

  Kind kind() const { return kind_; }
  cplx a(std::int64_t n) const;
  /// a_first .. a_{first+count−1}.
  std::vector<cplx> values(std::int64_t first, std::int64_t count) const;
  /// Σ|a_n|² < ∞ for this kind and parameters.
  bool summable() const;
  /// Index past which every coefficient is zero, or −1 if none.
  std::int64_t support_end() const;
  std::string describe() const;

  cplx constant_value() const { return c_; }
  double parameter() const { return p_; }
  const std::vector<cplx>& list() const { return list_; }
  std::uint64_t seed() const { return seed_; }

 private:
  Kind kind_ = Kind::Constant;
  cplx c_{1.0};
  double p_ = 0.0;
  std::vector<cplx> list_;
  std::uint64_t seed_ = 0;
};

/// S_N² = Σ_{n≤N} |a_n|².
double energy(const CoefficientSequence& seq, std::int64_t N);
/// Σ_{first≤n≤last} |a_n|².
double energy_range(const CoefficientSequence& seq, std::int64_t first, std::int64_t last);

/// Lag cutoff: min(span, ⌈log(1e−16)/log|λ|⌉), 0 when λ = 0.
std::int64_t lag_cutoff(cplx lambda, std::int64_t span);

/// σ² of the block first..last: Σ|a_n|² + 2 Re Σ_k λ^k Σ ā_n a_{n+k}, lags inside the block.
double block_sigma2(const CoefficientSequence& seq, cplx lambda, std::int64_t first, std::int64_t last);
/// σ_N² (block 1..N). Throws DomainError when |λ| ≥ 1.
double sigma2(const CoefficientSequence& seq, cplx lambda, std::int64_t N);

struct TailVariance {
  double value = 0.0;
  /// Bound on |σ²(N) − value| from dropping indices past the cutoff and lags past K.
  double truncation_bound = 0.0;
  std::int64_t cutoff = 0;
  std::int64_t lags = 0;
  double relative_bound() const { return value > 0 ? truncation_bound / value : INFINITY; }
};

/// Tail variance σ²(N) over N..cutoff. Throws DomainError for divergent kinds.
TailVariance tail_sigma2(const CoefficientSequence& seq, cplx lambda, std::int64_t N, std::int64_t cutoff);
/// Smallest power-of-two-stepped cutoff whose relative truncation bound is below rel_tol.
TailVariance tail_sigma2_to_tolerance(const CoefficientSequence& seq, cplx lambda, std::int64_t N, double rel_tol,
                                      std::int64_t max_cutoff = std::int64_t{1} << 31);
/// Σ_{n>cutoff} |a_n|², closed form where available.
double energy_tail_bound(const CoefficientSequence& seq, std::int64_t cutoff);

/// |a_N|² / S_N². Throws PreconditionError if S_N = 0.
double growth_ratio(const CoefficientSequence& seq, std::int64_t N);

/// φ(N) = max_{N≤M≤horizon} max_{n≤M}|a_n|² / S_M²; closed forms for constant and power.
double phi_envelope(const CoefficientSequence& seq, std::int64_t N, std::int64_t horizon);

struct VarianceProfile {
  std::int64_t N = 0;
  double S_N2 = 0.0;
  double sigma_N2 = 0.0;
  double growth_ratio = 0.0;
  double phi = 0.0;
};

VarianceProfile variance_profile(const CoefficientSequence& seq, cplx lambda, std::int64_t N, std::int64_t horizon);

/// κ = (1 + |λ|)/(1 − |λ|).
double kappa(cplx lambda);

}  // namespace iclt
