#include "iclt/inner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "iclt/errors.hpp"

namespace iclt {

namespace {
constexpr double kDiskMargin = 1e-12;
}

std::vector<cplx> poly_mul(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<cplx> out(a.size() + b.size() - 1, cplx{});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

cplx poly_eval(std::span<const cplx> coeffs, cplx z) {
  cplx acc{};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

cplx RationalForm::operator()(cplx z) const {
  return poly_eval(numerator, z) / poly_eval(denominator, z);
}

int RationalForm::degree() const {
  auto trimmed = [](const std::vector<cplx>& c) {
    int d = static_cast<int>(c.size()) - 1;
    while (d > 0 && std::abs(c[d]) < 1e-14) --d;
    return d;
  };
  return std::max(trimmed(numerator), trimmed(denominator));
}

RationalForm compose(const RationalForm& outer, const RationalForm& inner) {
  // P(g/h)·h^D and Q(g/h)·h^D with D = max(deg P, deg Q).
  const int D = static_cast<int>(std::max(outer.numerator.size(), outer.denominator.size())) - 1;
  std::vector<std::vector<cplx>> gpow{{cplx{1.0}}}, hpow{{cplx{1.0}}};
  for (int k = 1; k <= D; ++k) {
    gpow.push_back(poly_mul(gpow.back(), inner.numerator));
    hpow.push_back(poly_mul(hpow.back(), inner.denominator));
  }
  auto substitute = [&](const std::vector<cplx>& coeffs) {
    std::vector<cplx> out;
    for (int k = 0; k < static_cast<int>(coeffs.size()); ++k) {
      auto term = poly_mul(gpow[k], hpow[D - k]);
      if (out.size() < term.size()) out.resize(term.size());
      for (std::size_t i = 0; i < term.size(); ++i) out[i] += coeffs[k] * term[i];
    }
    return out;
  };
  RationalForm r{substitute(outer.numerator), substitute(outer.denominator)};
  const cplx q0 = r.denominator.front();
  for (auto& c : r.numerator) c /= q0;
  for (auto& c : r.denominator) c /= q0;
  return r;
}

BlaschkeProduct BlaschkeProduct::make(cplx phase, std::vector<cplx> zeros) {
  if (std::abs(std::abs(phase) - 1.0) > 1e-12)
    throw DomainError("phase must have unit modulus, got |phase| = " + std::to_string(std::abs(phase)));
  bool has_origin = false;
  for (const cplx& a : zeros) {
    if (a == cplx{}) {
      has_origin = true;
      continue;
    }
    if (!(std::abs(a) <= 1.0 - kDiskMargin))
      throw DomainError("zero outside open disk: |a| = " + std::to_string(std::abs(a)));
  }
  if (!has_origin) throw DomainError("f(0) != 0: no zero at the origin");
  return BlaschkeProduct(phase / std::abs(phase), std::move(zeros));
}

BlaschkeProduct BlaschkeProduct::from_angle(double phase_angle, std::vector<cplx> zeros) {
  return make(std::polar(1.0, phase_angle), std::move(zeros));
}

BlaschkeProduct::BlaschkeProduct(cplx phase, std::vector<cplx> zeros)
    : phase_(phase), zeros_(std::move(zeros)) {
  unit_phase_ = phase_;
  for (const cplx& a : zeros_) {
    if (a == cplx{}) {
      ++origin_multiplicity_;
    } else {
      nonzero_.push_back(a);
      unit_.push_back(std::abs(a) / a);
      unit_phase_ *= unit_.back();
    }
  }
  if (origin_multiplicity_ == 1) {
    lambda_ = phase_;
    for (const cplx& a : nonzero_) lambda_ *= std::abs(a);
  } else {
    lambda_ = cplx{};
  }
}

cplx BlaschkeProduct::eval(cplx w) const {
  cplx num = unit_phase_;
  for (int k = 0; k < origin_multiplicity_; ++k) num *= w;
  cplx den{1.0};
  for (const cplx& a : nonzero_) {
    num *= (a - w);
    den *= (1.0 - std::conj(a) * w);
  }
  return num / den;
}

cplx BlaschkeProduct::eval_boundary(cplx z) const {
  // On the circle num/den has unit modulus, so normalizing num·conj(den) avoids the division.
  cplx num = unit_phase_;
  for (int k = 0; k < origin_multiplicity_; ++k) num *= z;
  cplx den{1.0};
  for (const cplx& a : nonzero_) {
    num *= (a - z);
    den *= (1.0 - std::conj(a) * z);
  }
  const cplx v = num * std::conj(den);
  return v * (1.0 / std::sqrt(std::norm(v)));
}

void BlaschkeProduct::step_lanes(double* re, double* im) const {
  double nr[kLanes], ni[kLanes], dr[kLanes], di[kLanes];
  for (int l = 0; l < kLanes; ++l) {
    nr[l] = unit_phase_.real();
    ni[l] = unit_phase_.imag();
    dr[l] = 1.0;
    di[l] = 0.0;
  }
  for (int k = 0; k < origin_multiplicity_; ++k) {
    for (int l = 0; l < kLanes; ++l) {
      const double r = nr[l] * re[l] - ni[l] * im[l];
      ni[l] = nr[l] * im[l] + ni[l] * re[l];
      nr[l] = r;
    }
  }
  for (const cplx& a : nonzero_) {
    const double ar = a.real(), ai = a.imag();
    for (int l = 0; l < kLanes; ++l) {
      // (a − w) and (1 − ā w)
      const double pr = ar - re[l], pi = ai - im[l];
      const double qr = 1.0 - (ar * re[l] + ai * im[l]), qi = -(ar * im[l] - ai * re[l]);
      const double n0 = nr[l] * pr - ni[l] * pi;
      ni[l] = nr[l] * pi + ni[l] * pr;
      nr[l] = n0;
      const double d0 = dr[l] * qr - di[l] * qi;
      di[l] = dr[l] * qi + di[l] * qr;
      dr[l] = d0;
    }
  }
  for (int l = 0; l < kLanes; ++l) {
    const double vr = nr[l] * dr[l] + ni[l] * di[l];
    const double vi = ni[l] * dr[l] - nr[l] * di[l];
    const double s = 1.0 / std::sqrt(vr * vr + vi * vi);
    re[l] = vr * s;
    im[l] = vi * s;
  }
}

cplx BlaschkeProduct::iterate(int n, cplx z) const {
  for (int k = 0; k < n; ++k) z = eval_boundary(z);
  return z;
}

RationalForm BlaschkeProduct::to_rational() const {
  std::vector<cplx> P(origin_multiplicity_ + 1, cplx{});
  P.back() = unit_phase_;
  std::vector<cplx> Q{cplx{1.0}};
  for (const cplx& a : nonzero_) {
    const cplx num_factor[2] = {a, cplx{-1.0}};
    const cplx den_factor[2] = {cplx{1.0}, -std::conj(a)};
    P = poly_mul(P, num_factor);
    Q = poly_mul(Q, den_factor);
  }
  return {std::move(P), std::move(Q)};
}

std::vector<cplx> BlaschkeProduct::taylor_at_zero(int order) const {
  if (order < 0 || order > 16) throw PreconditionError("taylor_at_zero: order must be in [0, 16]");
  const RationalForm r = to_rational();
  // c = P / Q as power series; Q_0 = 1.
  std::vector<cplx> c(order + 1, cplx{});
  for (int k = 0; k <= order; ++k) {
    cplx acc = k < static_cast<int>(r.numerator.size()) ? r.numerator[k] : cplx{};
    for (int j = 1; j <= k && j < static_cast<int>(r.denominator.size()); ++j) acc -= r.denominator[j] * c[k - j];
    c[k] = acc;
  }
  return c;
}

double BlaschkeProduct::boundary_derivative_modulus(cplx z) const {
  double s = origin_multiplicity_;
  for (const cplx& a : nonzero_) s += (1.0 - std::norm(a)) / std::norm(1.0 - std::conj(a) * z);
  return s;
}

}  // namespace iclt
