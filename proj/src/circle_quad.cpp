#include "iclt/circle_quad.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "iclt/errors.hpp"
#include "iclt/orbit_kernels.hpp"
#include "iclt/rng.hpp"
#include "iclt/summation.hpp"

namespace iclt {

CircleGrid::CircleGrid(std::size_t points, double offset) : points_(points), offset_(offset) {
  if (points == 0) throw PreconditionError("grid needs at least one point");
}

cplx CircleGrid::point(std::size_t j) const {
  // Reduce j/M exactly-ish before scaling so large grids keep full accuracy.
  const double frac = static_cast<double>(j) / static_cast<double>(points_);
  return std::polar(1.0, 2.0 * std::numbers::pi * frac + offset_);
}

std::vector<cplx> CircleGrid::points() const {
  std::vector<cplx> out(points_);
  for (std::size_t j = 0; j < points_; ++j) out[j] = point(j);
  return out;
}

CircleGrid uniform_grid(std::size_t points, double offset) { return CircleGrid(points, offset); }

cplx integrate(std::span<const cplx> values) {
  if (values.empty()) throw PreconditionError("integrate: empty value list");
  return pairwise_sum(values) / static_cast<double>(values.size());
}

double integrate(std::span<const double> values) {
  if (values.empty()) throw PreconditionError("integrate: empty value list");
  return pairwise_sum(values) / static_cast<double>(values.size());
}

cplx mc_point(std::uint64_t seed, std::size_t j) { return std::polar(1.0, rng::angle(seed, 0, j)); }

std::vector<cplx> mc_points(const MCSampler& sampler) {
  if (sampler.count == 0) throw PreconditionError("mc_points: count must be >= 1");
  std::vector<cplx> out(sampler.count);
  for (std::size_t j = 0; j < sampler.count; ++j) out[j] = mc_point(sampler.seed, j);
  return out;
}

Word canonical(Word word) {
  std::map<int, int> by_index;
  for (const auto& fac : word) {
    if (fac.n < 0) throw PreconditionError("iterate index must be nonnegative");
    by_index[fac.n] += fac.power;
  }
  Word out;
  for (auto [n, p] : by_index)
    if (p != 0) out.push_back({n, p});
  return out;
}

Word signed_word(std::span<const int> indices, std::span<const int> signs) {
  if (indices.size() != signs.size() || indices.empty())
    throw PreconditionError("indices and signs must be nonempty and of equal length");
  Word w;
  for (std::size_t j = 0; j < indices.size(); ++j) {
    if (indices[j] < 1) throw PreconditionError("iterate indices must be positive");
    if (signs[j] != 1 && signs[j] != -1) throw PreconditionError("signs must be +1 or -1");
    w.push_back({indices[j], signs[j]});
  }
  return canonical(std::move(w));
}

int depth(const Word& word) {
  int d = 0;
  for (const auto& fac : word) d = std::max(d, fac.n);
  return d;
}

double degree_bound(const Word& word, int degree) {
  double b = 0.0;
  for (const auto& fac : word) b += std::abs(fac.power) * std::pow(static_cast<double>(degree), fac.n);
  return b;
}

std::string to_string(const Word& word) {
  if (word.empty()) return "1";
  std::string s;
  for (const auto& fac : word) {
    if (!s.empty()) s += "*";
    s += "f^" + std::to_string(fac.n);
    if (fac.power != 1) s += "^(" + std::to_string(fac.power) + ")";
  }
  return s;
}

cplx correlation_integral(const BlaschkeProduct& f, std::span<const int> indices, std::span<const int> signs,
                          const CircleGrid& grid, const Exec& exec) {
  // Keep the factors as given (no canonicalization) so repeated indices are
  // still evaluated along the single orbit.
  if (indices.size() != signs.size() || indices.empty())
    throw PreconditionError("indices and signs must be nonempty and of equal length");
  Word w;
  for (std::size_t j = 0; j < indices.size(); ++j) w.push_back({indices[j], signs[j]});
  const Word words[1] = {canonical(std::move(w))};
  auto sums = kernels::orbit_sweep(f, grid, depth(words[0]), 1, kernels::WordIntegrand{words}, exec);
  return sums.mean(0);
}

namespace {

std::size_t next_pow2(double x) {
  std::size_t p = 1;
  while (static_cast<double>(p) < x) p <<= 1;
  return p;
}

}  // namespace

ResolvedIntegrals integrate_words(const BlaschkeProduct& f, std::span<const Word> words,
                                  const QuadratureOptions& options) {
  ResolvedIntegrals result;
  result.values.resize(words.size());
  result.certificates.assign(words.size(), 0.0);
  if (words.empty()) {
    result.resolved = true;
    return result;
  }
  int max_depth = 0;
  double bound = 0.0;
  for (const auto& w : words) {
    max_depth = std::max(max_depth, depth(w));
    bound = std::max(bound, degree_bound(w, f.degree()));
  }

  auto run = [&](std::size_t M) {
    const CircleGrid grid(M, options.offset);
    auto sums = kernels::orbit_sweep(f, grid, max_depth, words.size(), kernels::WordIntegrand{words}, options.exec);
    bool ok = true;
    for (std::size_t o = 0; o < words.size(); ++o) {
      result.values[o] = sums.mean(o);
      if (M % 2 == 0) {
        result.certificates[o] = std::abs(sums.mean(o) - sums.half_mean(o));
        ok = ok && result.certificates[o] <= options.certificate_tol * std::max(1.0, std::abs(result.values[o]));
      } else {
        result.certificates[o] = std::nan("");
      }
    }
    result.points = M;
    return ok;
  };

  if (options.fixed_points) {
    if (static_cast<double>(*options.fixed_points) < bound + 1.0)
      throw PreconditionError("grid of " + std::to_string(*options.fixed_points) +
                              " points is below the exactness bound " + std::to_string(bound + 1.0));
    result.resolved = run(*options.fixed_points);
    return result;
  }

  if (f.is_monomial()) {
    // Words are trig polynomials of degree ≤ bound: any grid above it is exact.
    const auto M = static_cast<std::size_t>(bound) + 1;
    if (M > options.max_points) {
      result.resolved = false;
      for (auto& c : result.certificates) c = std::nan("");
      return result;
    }
    run(std::max<std::size_t>(M, 1));
    std::fill(result.certificates.begin(), result.certificates.end(), 0.0);
    result.resolved = true;
    return result;
  }

  std::size_t M = std::max(next_pow2(2.0 * bound + 2.0), next_pow2(static_cast<double>(options.min_points)));
  if (M > options.max_points) {
    result.resolved = false;
    result.points = 0;
    for (auto& c : result.certificates) c = std::nan("");
    return result;
  }
  for (; M <= options.max_points; M <<= 1) {
    if (run(M)) {
      result.resolved = true;
      return result;
    }
  }
  result.resolved = false;
  return result;
}

}  // namespace iclt
