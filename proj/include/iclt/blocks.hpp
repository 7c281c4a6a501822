#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iclt/exec.hpp"
#include "iclt/inner.hpp"
#include "iclt/sequences.hpp"

namespace iclt {

/// Inclusive index range first..last; empty when last < first.
struct IndexRange {
  std::int64_t first = 1;
  std::int64_t last = 0;
  std::int64_t count() const { return last >= first ? last - first + 1 : 0; }
  bool empty() const { return last < first; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

struct BlockPartition {
  std::int64_t N = 0;
  double phi = 0.0;
  double threshold = 0.0;  // φ^{1/8} S_N²
  double S_N2 = 0.0;
  std::vector<std::int64_t> J_bounds;  // J_0 = 0 < J_1 < … < J_P
  int P = 0;
  int Q = 0;
  std::int64_t sub_block_length = 0;  // ⌊φ^{−1/2}⌋
  std::vector<IndexRange> A;
  std::vector<IndexRange> B;
  std::vector<int> sub_block_counts;  // p_k for J(2k)
  std::vector<double> J_even_energy;  // Σ_{J(2k)} |a_n|²
  std::vector<double> A_energy;
  std::vector<double> B_energy;
  IndexRange residual;
  double residual_energy = 0.0;

  IndexRange J(int i) const { return {J_bounds[i - 1] + 1, J_bounds[i]}; }
  double q_phi() const;
};

/// Greedy construction: J-blocks by the energy threshold φ^{1/8}S_N²; J(2k)
/// split into sub-blocks of length ⌊φ^{−1/2}⌋ (the first r get one more when
/// the remainder r allows it, otherwise the short fragment trails the split);
/// B(k) is the lowest-energy sub-block, ties to the lowest start; A(k) fills
/// the gap before B(k). With P odd the last A-block runs to N.
/// Throws PreconditionError ("insufficient scale") when N is too small for φ.
BlockPartition build_blocks(const CoefficientSequence& seq, std::int64_t N, double phi);

/// Smallest N ≤ 2²⁴ at which build_blocks succeeds with φ = phi_envelope(seq, N, N),
/// or −1 if none is found.
std::int64_t minimal_block_scale(const CoefficientSequence& seq);

struct PartitionCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct PartitionReport {
  std::vector<PartitionCheck> checks;
  double q_phi = 0.0;
  bool all_pass() const;
};

PartitionReport verify_partition(const CoefficientSequence& seq, const BlockPartition& partition);

/// Σ_k σ²(A(k)) / σ_N², lags kept inside each A(k).
double block_variance_ratio(const CoefficientSequence& seq, cplx lambda, const BlockPartition& partition);

/// Per-point block sums from a single orbit of length N.
struct BlockSums {
  std::size_t points = 0;
  std::size_t nA = 0;
  std::size_t nB = 0;
  std::vector<cplx> xi;   // xi[i * nA + k]
  std::vector<cplx> eta;  // eta[i * nB + k]
  std::vector<cplx> residual;
  std::vector<cplx> total;  // full partial sum, accumulated independently
};

BlockSums block_sums(const BlaschkeProduct& f, const CoefficientSequence& seq, const BlockPartition& partition,
                     std::span<const cplx> points, const Exec& exec = {});

}  // namespace iclt
