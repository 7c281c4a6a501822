#pragma once

#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "iclt/blocks.hpp"
#include "iclt/circle_quad.hpp"
#include "iclt/clark.hpp"
#include "iclt/inner.hpp"
#include "iclt/sequences.hpp"

namespace iclt {

struct CorrelationReport {
  std::string name;
  cplx lhs;
  cplx rhs;
  double residual = 0.0;
  double tolerance = 0.0;
  bool relative = false;
  bool pass = false;
  std::string note;
};

/// residual = |lhs − rhs|; pass ⇔ residual ≤ tol (· max(|rhs|, tiny) when relative).
CorrelationReport make_report(std::string name, cplx lhs, cplx rhs, double tol, bool relative, std::string note = {});

enum class IntegralMethod { Auto, Quadrature, Transfer };

struct CorrelationOptions {
  IntegralMethod method = IntegralMethod::Auto;
  /// Used by Quadrature, and by Auto for words no deeper than auto_quadrature_depth.
  QuadratureOptions quad;
  int auto_quadrature_depth = 6;
  std::size_t auto_max_points = std::size_t{1} << 16;
};

/// Evaluates ∫ word dm with memoization. Quadrature words are batched into
/// one certified sweep; anything quadrature cannot resolve goes through the
/// transfer operator (exact, cost linear in depth).
class WordIntegrator {
 public:
  WordIntegrator(BlaschkeProduct f, CorrelationOptions options);

  const BlaschkeProduct& f() const { return f_; }
  std::vector<cplx> integrate(std::span<const Word> words);
  cplx integrate(const Word& word);

  /// While recording, integrate() only collects words (returning 1); flush()
  /// then evaluates everything collected in one batch. Lets a caller run a
  /// suite of checks twice and pay for a single quadrature sweep.
  void set_recording(bool on) { recording_ = on; }
  bool recording() const { return recording_; }
  void flush();

  std::size_t quadrature_count() const { return n_quad_; }
  std::size_t transfer_count() const { return n_transfer_; }
  std::size_t largest_grid() const { return largest_grid_; }
  /// Every word evaluated so far with its value.
  const std::map<Word, cplx>& evaluated() const { return cache_; }

 private:
  BlaschkeProduct f_;
  CorrelationOptions options_;
  TransferEngine engine_;
  std::map<Word, cplx> cache_;
  std::vector<Word> pending_;
  bool recording_ = false;
  std::size_t n_quad_ = 0, n_transfer_ = 0, largest_grid_ = 0;
};

/// ∫ conj(f^k) f^j dm = λ^{j−k}; tolerance 1e−10 absolute.
CorrelationReport covariance_check(WordIntegrator& I, int k, int j);

/// ∫ G∘f dm = ∫ G dm for a trig polynomial G; tolerance 1e−10. `level` composes with f^level.
CorrelationReport pushforward_check(WordIntegrator& I, const TrigPolynomial& g, int level = 1);

/// ∫ ∏ f^{n_k} conj(f^{j_k}) dm = ∏ ∫ f^{n_k} conj(f^{j_k}) dm under
/// max{n_k, j_k} < min{n_{k+1}, j_{k+1}}; tolerance 1e−9 absolute.
CorrelationReport factorization_check(WordIntegrator& I, std::span<const std::pair<int, int>> pairs);

/// ∫ ∏|ξ_k|² dm = ∏ ∫|ξ_k|² dm for ordered ranges; tolerance 1e−8 relative.
CorrelationReport uncorrelated_squares_check(WordIntegrator& I, const CoefficientSequence& seq,
                                             std::span<const IndexRange> ranges);

enum class FourFactorCase { Cancellation, Squared, Generic, Equality };

/// Four-factor integrals. Cancellation: n₁,n₂ < n₃,n₄, integrand
/// f^{ε₁n₁} f^{−ε₁n₂} f^{n₃} f^{n₄} (signs[0] = ε₁), |I| < 1e−9.
/// Equality: n₁<n₂<n₃<n₄ with ε₁ε₂ = ε₃ε₄ = −1, ||I| − a^{n₂−n₁+n₄−n₃}| < 1e−9.
/// Squared (n₁<n₂<n₃, (f^{ε₁n₁})² f^{ε₂n₂} f^{ε₃n₃}) and Generic (n₁<…<n₄) report
/// the fitted constant C* = |I| / a^{exponent}; they pass when |I| is finite
/// and, for a = 0, when |I| vanishes.
CorrelationReport four_factor_check(WordIntegrator& I, FourFactorCase c, std::span<const int> n,
                                    std::span<const int> signs);

struct DecayFit {
  std::vector<int> q;
  std::vector<double> magnitude;
  double slope = 0.0;
  double intercept = 0.0;
  double fitted_constant = 0.0;  // exp(intercept)
  double bound_slope = 0.0;      // (k/4) log a + 0.05
  bool underflow = false;
  bool pass = false;
  std::string note;
};

/// |I(ε, n)| along n_j = base + (j−1)q; least-squares slope of log|I| against q
/// over the upper half of the q grid, asserted ≤ (k/4) log a + 0.05.
DecayFit decay_fit(WordIntegrator& I, std::span<const int> signs, std::span<const int> q_values, int base_index);

struct NormComparability {
  CorrelationReport l2;                    // ‖ξ‖² vs σ²
  bool kappa_sandwich = false;
  std::vector<CorrelationReport> scalar;   // ∫⟨t,ξ⟩² vs |t|²σ²/2
  double l4_over_l2 = 0.0;
  double l4_dashboard = 0.0;
  bool l4_pass = false;
  bool l4_certified = false;
};

/// L² facts for ξ = Σ_{n≤N} a_n fⁿ. ‖ξ‖₄/‖ξ‖₂ is compared
/// against `l4_dashboard`, an observed constant, not a bound from theory.
NormComparability norm_comparability_check(WordIntegrator& I, const CoefficientSequence& seq, int N,
                                           double l4_dashboard = 2.0);

}  // namespace iclt
