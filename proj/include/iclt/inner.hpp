#pragma once

#include <complex>
#include <span>
#include <vector>

namespace iclt {

using cplx = std::complex<double>;

/// f = P / Q with complex coefficient vectors (index = power of z).
struct RationalForm {
  std::vector<cplx> numerator;
  std::vector<cplx> denominator;

  cplx operator()(cplx z) const;
  /// max(deg P, deg Q) after trimming trailing zero coefficients.
  int degree() const;
};

std::vector<cplx> poly_mul(std::span<const cplx> a, std::span<const cplx> b);
cplx poly_eval(std::span<const cplx> coeffs, cplx z);

/// Composition outer ∘ inner of two rational forms (homogenized substitution).
RationalForm compose(const RationalForm& outer, const RationalForm& inner);

/// Finite Blaschke product fixing the origin:
///   f(z) = phase · ∏_k b_{a_k}(z),  b_0(z) = z,  b_a(z) = (|a|/a)(a − z)/(1 − ā z).
/// Immutable after construction.
class BlaschkeProduct {
 public:
  /// Throws DomainError if a zero lies outside the open disk (|a| > 1 − 1e−12),
  /// if no zero equals 0 exactly, or if |phase| differs from 1 by more than 1e−12.
  static BlaschkeProduct make(cplx phase, std::vector<cplx> zeros);
  /// Convenience: phase given as an angle in radians.
  static BlaschkeProduct from_angle(double phase_angle, std::vector<cplx> zeros);

  cplx phase() const { return phase_; }
  const std::vector<cplx>& zeros() const { return zeros_; }
  int degree() const { return static_cast<int>(zeros_.size()); }
  bool is_rotation() const { return degree() == 1; }
  /// All zeros at the origin: f = phase · z^d, whose iterates are trig monomials.
  bool is_monomial() const { return origin_multiplicity_ == degree(); }

  /// f(w) for |w| ≤ 1 + 1e−12.
  cplx eval(cplx w) const;
  /// f(z) for a boundary point, renormalized to exact unit modulus.
  cplx eval_boundary(cplx z) const;
  /// One boundary step applied in place to kLanes independent points stored as separate re/im arrays.
  static constexpr int kLanes = 8;
  void step_lanes(double* re, double* im) const;
  /// fⁿ(z) by n boundary steps, renormalizing after each one.
  cplx iterate(int n, cplx z) const;

  RationalForm to_rational() const;
  /// Maclaurin coefficients c_0..c_order (order ≤ 16) by series division.
  std::vector<cplx> taylor_at_zero(int order) const;
  /// f'(0); equals phase · ∏_{a_k ≠ 0} |a_k| when exactly one zero is 0.
  cplx lambda() const { return lambda_; }
  /// |f'(z)| on the circle: Σ_k (1 − |a_k|²)/|1 − ā_k z|².
  double boundary_derivative_modulus(cplx z) const;

 private:
  BlaschkeProduct(cplx phase, std::vector<cplx> zeros);

  cplx phase_;
  std::vector<cplx> zeros_;
  // Precomputed per nonzero zero: unit factor |a|/a and the zero itself.
  std::vector<cplx> nonzero_;
  std::vector<cplx> unit_;
  cplx unit_phase_;  // phase · ∏ |a|/a
  int origin_multiplicity_ = 0;
  cplx lambda_;
};

}  // namespace iclt
