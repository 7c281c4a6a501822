#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iclt/exec.hpp"
#include "iclt/inner.hpp"

namespace iclt {

/// Equispaced nodes z_j = exp(i(2πj/M + offset)), j = 0..M−1.
/// Means of z^m over the grid vanish for 0 < |m| < M.
class CircleGrid {
 public:
  CircleGrid(std::size_t points, double offset);

  std::size_t size() const { return points_; }
  double offset() const { return offset_; }
  cplx point(std::size_t j) const;
  std::vector<cplx> points() const;

 private:
  std::size_t points_;
  double offset_;
};

CircleGrid uniform_grid(std::size_t points, double offset = 0.0);

/// Arithmetic mean by pairwise summation. Throws PreconditionError on empty input.
cplx integrate(std::span<const cplx> values);
double integrate(std::span<const double> values);

struct MCSampler {
  std::uint64_t seed = 0;
  std::size_t count = 1;
};

/// Uniform i.i.d. boundary points; point j depends only on (seed, j).
std::vector<cplx> mc_points(const MCSampler& sampler);
cplx mc_point(std::uint64_t seed, std::size_t j);

/// One factor (fⁿ)^power of an iterate monomial. Negative powers are
/// conjugates (|fⁿ| = 1 on the circle); n = 0 is the identity z.
struct IterateFactor {
  int n = 0;
  int power = 0;
  friend bool operator==(const IterateFactor&, const IterateFactor&) = default;
  friend auto operator<=>(const IterateFactor&, const IterateFactor&) = default;
};

/// Product of iterate factors, kept canonical: sorted by n, one factor per n,
/// no zero powers. The empty word is the constant 1.
using Word = std::vector<IterateFactor>;

Word canonical(Word word);
/// ∏ f^{ε_j n_j} with n_j ≥ 1 and ε_j = ±1.
Word signed_word(std::span<const int> indices, std::span<const int> signs);
int depth(const Word& word);
/// Σ |power| · dⁿ: exact trig degree bound when f is a monomial z^d.
double degree_bound(const Word& word, int degree);
std::string to_string(const Word& word);

/// Quadrature estimate of ∫ ∏ f^{ε_j n_j} dm on the given grid; one forward
/// orbit of length n_k per grid point. f^{−n} denotes conj(fⁿ).
cplx correlation_integral(const BlaschkeProduct& f, std::span<const int> indices, std::span<const int> signs,
                          const CircleGrid& grid, const Exec& exec = {});

struct QuadratureOptions {
  /// Use exactly this many points instead of the adaptive dyadic search.
  std::optional<std::size_t> fixed_points;
  std::size_t min_points = 64;
  std::size_t max_points = std::size_t{1} << 22;
  /// Accept when |I_M − I_{M/2}| ≤ certificate_tol · max(1, |I_M|).
  double certificate_tol = 1e-11;
  double offset = 0.0;
  Exec exec;
};

struct ResolvedIntegrals {
  std::vector<cplx> values;
  /// |I_M − I_{M/2}| per integrand (NaN when M is odd).
  std::vector<double> certificates;
  std::size_t points = 0;
  bool resolved = false;
};

/// Integrates a batch of words on the smallest dyadic grid (starting at the
/// degree bound) whose even/odd certificate holds for every word. For a
/// monomial f the words are trig polynomials and the grid is bound + 1.
ResolvedIntegrals integrate_words(const BlaschkeProduct& f, std::span<const Word> words,
                                  const QuadratureOptions& options = {});

}  // namespace iclt
