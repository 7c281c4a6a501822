#pragma once

// Data-parallel orbit kernels. Each kernel splits the grid into fixed chunks
// of kChunk points; chunk results are reduced in chunk order, so the output is
// bit-identical for any thread count. The `reference` namespace keeps plain
// serial versions used by tests and the benchmark.

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "iclt/circle_quad.hpp"
#include "iclt/exec.hpp"
#include "iclt/inner.hpp"
#include "iclt/summation.hpp"

namespace iclt::kernels {

inline constexpr std::size_t kChunk = 4096;

/// fⁿ(z_i) for n = 0..depth over one chunk of grid points, row-major by n.
class OrbitTable {
 public:
  OrbitTable(int depth, std::size_t capacity) : depth_(depth), capacity_(capacity), data_((depth + 1) * capacity) {}

  void fill(const BlaschkeProduct& f, std::span<const cplx> start) {
    len_ = start.size();
    std::copy(start.begin(), start.end(), data_.begin());
    for (int n = 1; n <= depth_; ++n) {
      const cplx* prev = row_ptr(n - 1);
      cplx* cur = row_ptr(n);
      for (std::size_t i = 0; i < len_; ++i) cur[i] = f.eval_boundary(prev[i]);
    }
  }

  int depth() const { return depth_; }
  std::size_t size() const { return len_; }
  std::span<const cplx> row(int n) const { return {data_.data() + n * capacity_, len_}; }

 private:
  cplx* row_ptr(int n) { return data_.data() + n * capacity_; }

  int depth_;
  std::size_t capacity_;
  std::size_t len_ = 0;
  std::vector<cplx> data_;
};

/// Per-output sums over the even- and odd-indexed grid points.
struct SweepSums {
  std::vector<cplx> even;
  std::vector<cplx> odd;
  std::size_t points = 0;

  cplx mean(std::size_t output) const { return (even[output] + odd[output]) / static_cast<double>(points); }
  /// Mean over the even nodes, i.e. the same integral on the M/2 grid.
  cplx half_mean(std::size_t output) const { return even[output] / static_cast<double>((points + 1) / 2); }
};

/// Runs `integrand(table, output, values)` for every chunk and output, where
/// `values` receives the integrand at the chunk's points.
template <class Integrand>
SweepSums orbit_sweep(const BlaschkeProduct& f, const CircleGrid& grid, int depth, std::size_t outputs,
                      const Integrand& integrand, const Exec& exec) {
  const std::size_t M = grid.size();
  const std::size_t chunk = std::min(kChunk, M);
  const std::size_t chunks = (M + chunk - 1) / chunk;
  std::vector<cplx> chunk_even(chunks * outputs), chunk_odd(chunks * outputs);

#pragma omp parallel num_threads(std::max(1, exec.threads))
  {
    OrbitTable table(depth, chunk);
    std::vector<cplx> start(chunk), values(chunk);
#pragma omp for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
      const std::size_t first = static_cast<std::size_t>(c) * chunk;
      const std::size_t len = std::min(chunk, M - first);
      for (std::size_t i = 0; i < len; ++i) start[i] = grid.point(first + i);
      table.fill(f, std::span<const cplx>(start.data(), len));
      for (std::size_t o = 0; o < outputs; ++o) {
        std::span<cplx> out(values.data(), len);
        integrand(table, o, out);
        PairwiseAccumulator<cplx> ev, od;
        for (std::size_t i = 0; i < len; i += 2) ev.add(out[i]);
        for (std::size_t i = 1; i < len; i += 2) od.add(out[i]);
        chunk_even[c * outputs + o] = ev.total();
        chunk_odd[c * outputs + o] = od.total();
      }
    }
  }

  SweepSums sums{std::vector<cplx>(outputs), std::vector<cplx>(outputs), M};
  for (std::size_t o = 0; o < outputs; ++o) {
    PairwiseAccumulator<cplx> ev, od;
    for (std::size_t c = 0; c < chunks; ++c) {
      ev.add(chunk_even[c * outputs + o]);
      od.add(chunk_odd[c * outputs + o]);
    }
    sums.even[o] = ev.total();
    sums.odd[o] = od.total();
  }
  return sums;
}

inline cplx unit_power(cplx v, int power) {
  if (power < 0) {
    v = std::conj(v);
    power = -power;
  }
  cplx r = v;
  for (int k = 1; k < power; ++k) r *= v;
  return power == 0 ? cplx{1.0} : r;
}

/// Evaluates a batch of words on an orbit table.
struct WordIntegrand {
  std::span<const Word> words;

  void operator()(const OrbitTable& table, std::size_t o, std::span<cplx> values) const {
    const Word& w = words[o];
    std::fill(values.begin(), values.end(), cplx{1.0});
    for (const IterateFactor& fac : w) {
      auto row = table.row(fac.n);
      if (fac.power == 1) {
        for (std::size_t i = 0; i < values.size(); ++i) values[i] *= row[i];
      } else if (fac.power == -1) {
        for (std::size_t i = 0; i < values.size(); ++i) values[i] *= std::conj(row[i]);
      } else {
        for (std::size_t i = 0; i < values.size(); ++i) values[i] *= unit_power(row[i], fac.power);
      }
    }
  }
};

/// T-style samples: per point Σ_{n=first}^{last} a_n fⁿ(z), one orbit per point.
/// `coeffs[k]` is the coefficient of index first + k. Compensated summation
/// is used when the orbit is longer than 10⁴ steps.
std::vector<cplx> orbit_partial_sums(const BlaschkeProduct& f, std::span<const cplx> points, int first,
                                     std::span<const cplx> coeffs, const Exec& exec);

/// Partial sums snapshotted at several lengths: result[s * M + i] is the sum
/// over n ≤ stops[s] at point i. `stops` must be increasing.
std::vector<cplx> orbit_partial_sums_multi(const BlaschkeProduct& f, std::span<const cplx> points,
                                           std::span<const cplx> coeffs, std::span<const int> stops,
                                           const Exec& exec);

namespace reference {

/// Straightforward serial quadrature of a word: orbit per point, pairwise mean.
cplx word_integral(const BlaschkeProduct& f, const CircleGrid& grid, const Word& word);

std::vector<cplx> orbit_partial_sums(const BlaschkeProduct& f, std::span<const cplx> points, int first,
                                     std::span<const cplx> coeffs);

}  // namespace reference

}  // namespace iclt::kernels
