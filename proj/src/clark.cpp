#include "iclt/clark.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "iclt/errors.hpp"
#include "iclt/summation.hpp"

namespace iclt {

double ClarkMeasure::total_mass() const {
  CompensatedSum<double> s;
  for (const auto& a : atoms_) s.add(a.weight);
  return s.total();
}

cplx ClarkMeasure::moment(int l) const {
  if (std::abs(l) > 64) throw PreconditionError("moment order must satisfy |l| <= 64");
  CompensatedSum<cplx> s;
  for (const auto& a : atoms_) {
    const cplx u = l >= 0 ? std::conj(a.z) : a.z;
    s.add(a.weight * std::pow(u, std::abs(l)));
  }
  return s.total();
}

namespace {

double arg_2pi(cplx z) {
  const double t = std::arg(z);
  return t < 0 ? t + 2 * std::numbers::pi : t;
}

}  // namespace

ClarkMeasure clark_measure(const BlaschkeProduct& f, cplx alpha) {
  if (std::abs(std::abs(alpha) - 1.0) > 1e-12) throw PreconditionError("alpha must lie on the unit circle");
  const RationalForm r = f.to_rational();
  std::vector<cplx> g = r.numerator;
  g.resize(std::max(g.size(), r.denominator.size()), cplx{});
  for (std::size_t i = 0; i < r.denominator.size(); ++i) g[i] -= alpha * r.denominator[i];
  const int d = static_cast<int>(g.size()) - 1;
  if (d != f.degree()) throw NumericalFailure("unexpected degree of P - alpha Q");

  std::vector<cplx> roots;
  if (d == 1) {
    roots.push_back(-g[0] / g[1]);
  } else {
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) C(i, d - 1) = -g[i] / g[d];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    if (es.info() != Eigen::Success) throw NumericalFailure("companion eigensolver did not converge");
    for (int i = 0; i < d; ++i) roots.push_back(es.eigenvalues()(i));
  }

  std::vector<cplx> dg(d);
  for (int i = 1; i <= d; ++i) dg[i - 1] = static_cast<double>(i) * g[i];

  std::vector<ClarkAtom> atoms;
  for (cplx z : roots) {
    cplx raw = z;
    for (int it = 0; it < 3; ++it) {
      raw = z - poly_eval(g, z) / poly_eval(dg, z);
      z = raw / std::abs(raw);
    }
    if (!std::isfinite(std::abs(raw)) || std::abs(std::abs(raw) - 1.0) > 1e-6)
      throw NumericalFailure("Clark atom off the circle: ||z| - 1| = " + std::to_string(std::abs(std::abs(raw) - 1.0)));
    atoms.push_back({z, 1.0 / f.boundary_derivative_modulus(z)});
  }
  std::sort(atoms.begin(), atoms.end(), [](const ClarkAtom& a, const ClarkAtom& b) { return arg_2pi(a.z) < arg_2pi(b.z); });
  return ClarkMeasure(alpha, std::move(atoms));
}

TrigPolynomial TrigPolynomial::monomial(int m) {
  TrigPolynomial p;
  const int L = std::abs(m);
  p.coeffs.assign(2 * L + 1, cplx{});
  p.coeffs[m + L] = 1.0;
  return p;
}

cplx TrigPolynomial::coeff(int m) const {
  const int L = half_degree();
  return std::abs(m) <= L ? coeffs[m + L] : cplx{};
}

cplx TrigPolynomial::operator()(cplx z) const {
  // Horner in z from the top, then shift by z^{−L} = conj(z)^L on the circle.
  cplx acc{};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc * std::pow(std::conj(z), half_degree());
}

cplx integrate(const ClarkMeasure& mu, const TrigPolynomial& g) {
  CompensatedSum<cplx> s;
  for (const auto& a : mu.atoms()) s.add(a.weight * g(a.z));
  return s.total();
}

std::vector<MomentResidual> verify_moments(const BlaschkeProduct& f, cplx alpha, int l_max,
                                           const QuadratureOptions& options) {
  if (l_max < 1 || l_max > 16) throw PreconditionError("l_max must be in [1, 16]");
  const ClarkMeasure mu = clark_measure(f, alpha);
  const auto c = f.taylor_at_zero(2);
  const cplx ab = std::conj(alpha);

  // ∫ f^k z̄^l dm for 1 ≤ k ≤ l ≤ l_max, batched into one adaptive sweep.
  std::vector<Word> words;
  for (int l = 3; l <= l_max; ++l)
    for (int k = 1; k <= l; ++k) words.push_back(Word{{0, -l}, {1, k}});
  const ResolvedIntegrals quad = integrate_words(f, words, options);
  if (!words.empty() && !quad.resolved) throw NumericalFailure("moment quadrature not resolved");

  std::vector<MomentResidual> out;
  std::size_t w = 0;
  for (int l = 1; l <= l_max; ++l) {
    cplx rhs;
    if (l == 1) {
      rhs = c[1] * ab;
    } else if (l == 2) {
      rhs = c[2] * ab + c[1] * c[1] * ab * ab;
    } else {
      cplx abk = 1.0;
      for (int k = 1; k <= l; ++k) {
        abk *= ab;
        rhs += abk * quad.values[w++];
      }
    }
    const cplx lhs = mu.moment(l);
    out.push_back({l, lhs, rhs, std::abs(lhs - rhs)});
  }
  return out;
}

double verify_disintegration(const BlaschkeProduct& f, const TrigPolynomial& g, std::size_t alpha_points,
                             const Exec& exec) {
  const int L = g.half_degree();
  if (L > 32) throw PreconditionError("trig polynomial degree must be <= 32");
  // α ↦ ∫G dμ_α is a trig polynomial of degree ≤ L, so 2L+1 nodes average it exactly.
  if (alpha_points < static_cast<std::size_t>(2 * L + 1))
    throw PreconditionError("alpha grid needs at least 2L+1 = " + std::to_string(2 * L + 1) + " points");
  const CircleGrid grid(alpha_points, 0.0);
  std::vector<cplx> inner(alpha_points);
#pragma omp parallel for schedule(static) num_threads(std::max(1, exec.threads))
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(alpha_points); ++j)
    inner[j] = integrate(clark_measure(f, grid.point(j)), g);
  return std::abs(integrate(std::span<const cplx>(inner)) - g.mean());
}

TransferOperator::TransferOperator(const BlaschkeProduct& f, std::size_t grid_size) {
  const CircleGrid grid(grid_size, 0.0);
  measures_.reserve(grid_size);
  for (std::size_t j = 0; j < grid_size; ++j) {
    roots_.push_back(grid.point(j));
    measures_.push_back(clark_measure(f, roots_.back()));
  }
}

TrigPolynomial TransferOperator::apply(const TrigPolynomial& g) const {
  const std::size_t K = measures_.size();
  const int L = g.half_degree();
  if (static_cast<std::size_t>(2 * L) >= K) throw PreconditionError("transfer grid too small for the degree");
  std::vector<cplx> vals(K);
  for (std::size_t j = 0; j < K; ++j) vals[j] = integrate(measures_[j], g);
  // Coefficients of the degree-≤L result by exact DFT on the α-grid.
  TrigPolynomial out;
  out.coeffs.assign(2 * L + 1, cplx{});
  for (int m = -L; m <= L; ++m) {
    const std::size_t step = static_cast<std::size_t>((m % static_cast<long>(K) + static_cast<long>(K)) % static_cast<long>(K));
    CompensatedSum<cplx> s;
    std::size_t idx = 0;
    for (std::size_t j = 0; j < K; ++j) {
      s.add(vals[j] * std::conj(roots_[idx]));
      idx = (idx + step) % K;
    }
    out.coeffs[m + L] = s.total() / static_cast<double>(K);
  }
  return out;
}

namespace {

TrigPolynomial times_monomial(const TrigPolynomial& g, int p) {
  const int L = g.half_degree();
  const int L2 = L + std::abs(p);
  TrigPolynomial out;
  out.coeffs.assign(2 * L2 + 1, cplx{});
  for (int m = -L; m <= L; ++m) out.coeffs[m + p + L2] = g.coeff(m);
  return out;
}

}  // namespace

const TransferOperator& TransferEngine::op(std::size_t grid_size) {
  for (const auto& [k, o] : ops_)
    if (k == grid_size) return o;
  ops_.emplace_back(grid_size, TransferOperator(f_, grid_size));
  return ops_.back().second;
}

cplx TransferEngine::integral(const Word& word) {
  const Word w = canonical(word);
  if (w.empty()) return 1.0;
  int total = 0;
  for (const auto& fac : w) total += std::abs(fac.power);
  std::size_t K = 4;
  while (K < static_cast<std::size_t>(2 * total + 2)) K <<= 1;
  const TransferOperator& L = op(K);

  // ∫ G(z) H(f(z)) dm = ∫ (LG) H dm moves the factor at level n onto level n+1.
  TrigPolynomial g = TrigPolynomial::monomial(w[0].power);
  for (std::size_t j = 1; j < w.size(); ++j) {
    for (int s = w[j - 1].n; s < w[j].n; ++s) g = L.apply(g);
    g = times_monomial(g, w[j].power);
  }
  return g.mean();
}

cplx transfer_integral(const BlaschkeProduct& f, const Word& word) { return TransferEngine(f).integral(word); }

}  // namespace iclt
