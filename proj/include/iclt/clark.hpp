#pragma once

#include <complex>
#include <deque>
#include <vector>

#include "iclt/circle_quad.hpp"
#include "iclt/inner.hpp"

namespace iclt {

struct ClarkAtom {
  cplx z;
  double weight;
};

/// Atomic probability measure μ_α carried by f⁻¹({α}), weights 1/|f'|.
class ClarkMeasure {
 public:
  ClarkMeasure(cplx alpha, std::vector<ClarkAtom> atoms) : alpha_(alpha), atoms_(std::move(atoms)) {}

  cplx alpha() const { return alpha_; }
  const std::vector<ClarkAtom>& atoms() const { return atoms_; }
  double total_mass() const;
  /// Σ w_j conj(z_j)^l; negative l gives z_j^{|l|}. Requires |l| ≤ 64.
  cplx moment(int l) const;

 private:
  cplx alpha_;
  std::vector<ClarkAtom> atoms_;
};

/// Roots of P − αQ by companion-matrix eigenvalues, then 3 Newton steps
/// projected to the circle. Atoms are sorted by argument in [0, 2π).
/// Throws NumericalFailure if a polished root is more than 1e−6 off the circle.
ClarkMeasure clark_measure(const BlaschkeProduct& f, cplx alpha);

/// Σ_{m=−L..L} c_m z^m, with coeffs[m + L] = c_m.
struct TrigPolynomial {
  std::vector<cplx> coeffs{cplx{1.0}};

  static TrigPolynomial monomial(int m);
  int half_degree() const { return static_cast<int>(coeffs.size() / 2); }
  cplx coeff(int m) const;
  cplx operator()(cplx z) const;
  /// ∫ G dm, i.e. the constant coefficient.
  cplx mean() const { return coeff(0); }
};

cplx integrate(const ClarkMeasure& mu, const TrigPolynomial& g);

struct MomentResidual {
  int l;
  cplx lhs;
  cplx rhs;
  double residual;
};

/// Moment identities for 1 ≤ l ≤ l_max ≤ 16. The right side is
/// c₁ᾱ for l = 1, c₂ᾱ + c₁²ᾱ² for l = 2 (Taylor coefficients at 0), and
/// Σ_{k=1}^{l} ᾱ^k ∫ f^k z̄^l dm by quadrature for l ≥ 3 (f^k is a power).
std::vector<MomentResidual> verify_moments(const BlaschkeProduct& f, cplx alpha, int l_max,
                                           const QuadratureOptions& options = {});

/// |(1/M_α) Σ_α ∫G dμ_α − ∫G dm| over an equispaced α-grid.
/// Requires half-degree L ≤ 32 and M_α ≥ 2L + 1.
double verify_disintegration(const BlaschkeProduct& f, const TrigPolynomial& g, std::size_t alpha_points,
                             const Exec& exec = {});

/// Transfer operator (LG)(α) = ∫ G dμ_α acting on trig polynomials, with
/// Clark measures cached on a fixed α-grid of `grid_size` points. L never
/// raises the degree, so a grid larger than twice the working degree makes
/// every step exact.
class TransferOperator {
 public:
  TransferOperator(const BlaschkeProduct& f, std::size_t grid_size);

  std::size_t grid_size() const { return measures_.size(); }
  TrigPolynomial apply(const TrigPolynomial& g) const;

 private:
  std::vector<ClarkMeasure> measures_;
  std::vector<cplx> roots_;  // e^{2πij/K}
};

/// ∫ ∏ (fⁿ)^p dm for canonical words, computed by pulling the word through
/// the transfer operator one level at a time. The cost grows linearly in the
/// depth, so deep words stay exact. Operators are cached per grid size.
class TransferEngine {
 public:
  explicit TransferEngine(BlaschkeProduct f) : f_(std::move(f)) {}
  cplx integral(const Word& word);

 private:
  const TransferOperator& op(std::size_t grid_size);

  BlaschkeProduct f_;
  std::deque<std::pair<std::size_t, TransferOperator>> ops_;
};

cplx transfer_integral(const BlaschkeProduct& f, const Word& word);

}  // namespace iclt
