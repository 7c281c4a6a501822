#include "iclt/orbit_kernels.hpp"

#include <algorithm>

#include "iclt/errors.hpp"

namespace iclt::kernels {

namespace {
constexpr int kCompensateAbove = 10000;
constexpr int kLanes = BlaschkeProduct::kLanes;

// Loads up to kLanes points starting at g·kLanes; short groups repeat their last point.
int load_group(std::span<const cplx> points, std::ptrdiff_t g, double* re, double* im) {
  const std::ptrdiff_t base = g * kLanes;
  const int live = static_cast<int>(std::min<std::ptrdiff_t>(kLanes, static_cast<std::ptrdiff_t>(points.size()) - base));
  for (int l = 0; l < kLanes; ++l) {
    const cplx z = points[base + std::min(l, live - 1)];
    re[l] = z.real();
    im[l] = z.imag();
  }
  return live;
}

std::ptrdiff_t group_count(std::size_t n) { return static_cast<std::ptrdiff_t>((n + kLanes - 1) / kLanes); }
}  // namespace

std::vector<cplx> orbit_partial_sums(const BlaschkeProduct& f, std::span<const cplx> points, int first,
                                     std::span<const cplx> coeffs, const Exec& exec) {
  if (first < 1) throw PreconditionError("orbit sums start at n >= 1");
  const bool compensated = static_cast<int>(coeffs.size()) > kCompensateAbove;
  std::vector<cplx> out(points.size());
  const std::ptrdiff_t groups = group_count(points.size());
#pragma omp parallel for schedule(static, 32) num_threads(std::max(1, exec.threads))
  for (std::ptrdiff_t g = 0; g < groups; ++g) {
    double re[kLanes], im[kLanes];
    const int live = load_group(points, g, re, im);
    for (int n = 1; n < first; ++n) f.step_lanes(re, im);
    cplx result[kLanes];
    if (compensated) {
      CompensatedSum<cplx> acc[kLanes];
      for (const cplx& a : coeffs) {
        f.step_lanes(re, im);
        for (int l = 0; l < kLanes; ++l) acc[l].add(a * cplx(re[l], im[l]));
      }
      for (int l = 0; l < kLanes; ++l) result[l] = acc[l].total();
    } else {
      double sr[kLanes] = {}, si[kLanes] = {};
      for (const cplx& a : coeffs) {
        f.step_lanes(re, im);
        for (int l = 0; l < kLanes; ++l) {
          sr[l] += a.real() * re[l] - a.imag() * im[l];
          si[l] += a.real() * im[l] + a.imag() * re[l];
        }
      }
      for (int l = 0; l < kLanes; ++l) result[l] = {sr[l], si[l]};
    }
    for (int l = 0; l < live; ++l) out[g * kLanes + l] = result[l];
  }
  return out;
}

std::vector<cplx> orbit_partial_sums_multi(const BlaschkeProduct& f, std::span<const cplx> points,
                                           std::span<const cplx> coeffs, std::span<const int> stops,
                                           const Exec& exec) {
  for (std::size_t s = 0; s < stops.size(); ++s) {
    if (stops[s] < 1 || stops[s] > static_cast<int>(coeffs.size()) || (s > 0 && stops[s] <= stops[s - 1]))
      throw PreconditionError("stops must be increasing and within the coefficient range");
  }
  const std::size_t M = points.size();
  const bool compensated = static_cast<int>(coeffs.size()) > kCompensateAbove;
  std::vector<cplx> out(stops.size() * M);
  if (stops.empty()) return out;
  const std::ptrdiff_t groups = group_count(M);
#pragma omp parallel for schedule(static, 32) num_threads(std::max(1, exec.threads))
  for (std::ptrdiff_t g = 0; g < groups; ++g) {
    double re[kLanes], im[kLanes];
    const int live = load_group(points, g, re, im);
    CompensatedSum<cplx> comp[kLanes];
    double sr[kLanes] = {}, si[kLanes] = {};
    std::size_t s = 0;
    for (int n = 1; n <= stops.back(); ++n) {
      f.step_lanes(re, im);
      const cplx a = coeffs[n - 1];
      for (int l = 0; l < kLanes; ++l) {
        if (compensated) {
          comp[l].add(a * cplx(re[l], im[l]));
        } else {
          sr[l] += a.real() * re[l] - a.imag() * im[l];
          si[l] += a.real() * im[l] + a.imag() * re[l];
        }
      }
      if (n == stops[s]) {
        for (int l = 0; l < live; ++l)
          out[s * M + g * kLanes + l] = compensated ? comp[l].total() : cplx(sr[l], si[l]);
        ++s;
      }
    }
  }
  return out;
}

namespace reference {

cplx word_integral(const BlaschkeProduct& f, const CircleGrid& grid, const Word& word) {
  std::vector<cplx> values(grid.size());
  const int d = depth(word);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    cplx w = grid.point(j);
    cplx v{1.0};
    std::size_t next = 0;
    for (int n = 0; n <= d; ++n) {
      if (n > 0) w = f.eval_boundary(w);
      if (next < word.size() && word[next].n == n) v *= unit_power(w, word[next++].power);
    }
    values[j] = v;
  }
  return integrate(values);
}

std::vector<cplx> orbit_partial_sums(const BlaschkeProduct& f, std::span<const cplx> points, int first,
                                     std::span<const cplx> coeffs) {
  std::vector<cplx> out;
  out.reserve(points.size());
  for (const cplx& z : points) {
    cplx w = f.iterate(first - 1, z);
    cplx acc{};
    for (const cplx& a : coeffs) {
      w = f.eval_boundary(w);
      acc += a * w;
    }
    out.push_back(acc);
  }
  return out;
}

}  // namespace reference

}  // namespace iclt::kernels
