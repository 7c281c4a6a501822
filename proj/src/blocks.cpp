#include "iclt/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "iclt/errors.hpp"
#include "iclt/summation.hpp"

namespace iclt {

namespace {

constexpr double kSlack = 1e-12;
constexpr std::int64_t kBatch = 1 << 16;

// Real-valued bounds such as φ^{−7/8} are compared through this relative
// slack so that exact values like 10⁷ survive the rounding of pow().
bool at_least(double value, double bound) { return value >= bound * (1.0 - kSlack); }
std::int64_t floor_slack(double x) { return static_cast<std::int64_t>(std::floor(x * (1.0 + kSlack))); }

// Streams |a_n|² for n in [first, last] in batches.
template <class Fn>
void for_each_energy(const CoefficientSequence& seq, std::int64_t first, std::int64_t last, Fn&& fn) {
  for (std::int64_t n0 = first; n0 <= last; n0 += kBatch) {
    const std::int64_t len = std::min(kBatch, last - n0 + 1);
    const auto v = seq.values(n0, len);
    for (std::int64_t i = 0; i < len; ++i)
      if (!fn(n0 + i, std::norm(v[i]))) return;
  }
}

}  // namespace

double BlockPartition::q_phi() const { return Q * std::pow(phi, 0.125); }

BlockPartition build_blocks(const CoefficientSequence& seq, std::int64_t N, double phi) {
  if (N < 1) throw PreconditionError("build_blocks needs N >= 1");
  if (!(phi > 0) || !at_least(std::pow(phi, -0.875), 2.0))
    throw PreconditionError("insufficient scale: phi^(-7/8) must be >= 2 (phi = " + std::to_string(phi) + ")");

  BlockPartition bp;
  bp.N = N;
  bp.phi = phi;
  bp.S_N2 = energy(seq, N);
  if (!(bp.S_N2 > 0)) throw PreconditionError("insufficient scale: zero energy up to N");
  bp.threshold = std::pow(phi, 0.125) * bp.S_N2;
  bp.sub_block_length = floor_slack(std::pow(phi, -0.5));

  // Greedy J-blocks: J_{i+1} is the smallest index whose run energy reaches the threshold.
  bp.J_bounds.push_back(0);
  CompensatedSum<double> run;
  for_each_energy(seq, 1, N, [&](std::int64_t n, double e) {
    run.add(e);
    if (at_least(run.total(), bp.threshold)) {
      bp.J_bounds.push_back(n);
      run = {};
    }
    return true;
  });
  bp.P = static_cast<int>(bp.J_bounds.size()) - 1;
  if (bp.P < 2)
    throw PreconditionError("insufficient scale: only " + std::to_string(bp.P) + " auxiliary block(s) at N = " +
                            std::to_string(N) + "; at least 2 are needed");
  bp.Q = (bp.P + 1) / 2;
  const int nB = bp.P / 2 < bp.Q ? bp.Q - 1 : bp.Q;  // odd P: one more A than B

  const std::int64_t L = bp.sub_block_length;
  std::int64_t prev_end = 0;
  for (int k = 1; k <= nB; ++k) {
    const IndexRange J = bp.J(2 * k);
    const std::int64_t len = J.count();
    const std::int64_t p = len / L;
    if (p < 1)
      throw PreconditionError("insufficient scale: J(" + std::to_string(2 * k) + ") has " + std::to_string(len) +
                              " indices, shorter than the sub-block length " + std::to_string(L));
    const std::int64_t r = len - p * L;
    const std::int64_t longer = r <= p ? r : 0;

    std::vector<double> sub(p, 0.0);
    std::vector<std::int64_t> starts(p);
    std::int64_t s = J.first;
    for (std::int64_t j = 0; j < p; ++j) {
      starts[j] = s;
      s += L + (j < longer ? 1 : 0);
    }
    CompensatedSum<double> jsum;
    std::vector<CompensatedSum<double>> subsum(p);
    std::int64_t j = 0;
    for_each_energy(seq, J.first, J.last, [&](std::int64_t n, double e) {
      jsum.add(e);
      while (j + 1 < p && n >= starts[j + 1]) ++j;
      const std::int64_t end = j + 1 < p ? starts[j + 1] : starts[j] + L + (j < longer ? 1 : 0);
      if (n < end) subsum[j].add(e);
      return true;
    });
    std::int64_t best = 0;
    for (std::int64_t q = 0; q < p; ++q) {
      sub[q] = subsum[q].total();
      if (sub[q] < sub[best]) best = q;
    }
    const IndexRange Bk{starts[best], starts[best] + L + (best < longer ? 1 : 0) - 1};
    bp.A.push_back({prev_end + 1, Bk.first - 1});
    bp.B.push_back(Bk);
    bp.sub_block_counts.push_back(static_cast<int>(p));
    bp.J_even_energy.push_back(jsum.total());
    bp.B_energy.push_back(sub[best]);
    prev_end = Bk.last;
  }
  if (nB < bp.Q) {
    bp.A.push_back({prev_end + 1, N});
    bp.residual = {N + 1, N};
  } else {
    bp.residual = {prev_end + 1, N};
  }
  for (const auto& a : bp.A) bp.A_energy.push_back(a.empty() ? 0.0 : energy_range(seq, a.first, a.last));
  bp.residual_energy = bp.residual.empty() ? 0.0 : energy_range(seq, bp.residual.first, bp.residual.last);
  return bp;
}

std::int64_t minimal_block_scale(const CoefficientSequence& seq) {
  auto ok = [&](std::int64_t n) {
    try {
      build_blocks(seq, n, phi_envelope(seq, n, n));
      return true;
    } catch (const PreconditionError&) {
      return false;
    }
  };
  std::int64_t hi = 2;
  while (hi <= (std::int64_t{1} << 24) && !ok(hi)) hi *= 2;
  if (hi > (std::int64_t{1} << 24)) return -1;
  // First success on the doubling ladder; scan down to the smallest success.
  std::int64_t n = hi;
  while (n > 1 && ok(n - 1)) --n;
  return n;
}

bool PartitionReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const PartitionCheck& c) { return c.pass; });
}

PartitionReport verify_partition(const CoefficientSequence& seq, const BlockPartition& bp) {
  PartitionReport rep;
  rep.q_phi = bp.q_phi();
  auto add = [&](std::string name, bool pass, std::string detail = {}) {
    rep.checks.push_back({std::move(name), pass, std::move(detail)});
  };

  // Alternation A(1) B(1) A(2) B(2) … with no gaps, starting at 1.
  std::vector<IndexRange> seqr;
  for (std::size_t k = 0; k < bp.A.size(); ++k) {
    seqr.push_back(bp.A[k]);
    if (k < bp.B.size()) seqr.push_back(bp.B[k]);
  }
  bool consecutive = !seqr.empty() && seqr.front().first == 1 && bp.B.size() <= bp.A.size() &&
                     bp.A.size() <= bp.B.size() + 1;
  for (std::size_t i = 0; consecutive && i < seqr.size(); ++i) {
    consecutive = !seqr[i].empty() && (i == 0 || seqr[i - 1].last + 1 == seqr[i].first);
  }
  if (consecutive) {
    const std::int64_t end = seqr.back().last;
    consecutive = bp.residual.empty() ? end == bp.N : (bp.residual.first == end + 1 && bp.residual.last == bp.N);
  }
  add("consecutive_alternation", consecutive);

  const double a_bound = std::pow(bp.phi, -0.875);
  bool a_ok = true;
  std::string a_detail;
  for (std::size_t k = 0; k < bp.A.size(); ++k) {
    if (!at_least(static_cast<double>(bp.A[k].count()), a_bound)) {
      a_ok = false;
      a_detail = "A(" + std::to_string(k + 1) + ") has " + std::to_string(bp.A[k].count()) + " < " + std::to_string(a_bound);
    }
  }
  add("A_size_lower_bound", a_ok, a_detail);

  const double b_bound = std::pow(bp.phi, -0.5) / 2.0;
  bool b_ok = true, window_ok = true, inside_ok = true, energy_ok = true;
  for (std::size_t k = 0; k < bp.B.size(); ++k) {
    const auto& b = bp.B[k];
    b_ok = b_ok && at_least(static_cast<double>(b.count()), b_bound);
    window_ok = window_ok && b.count() >= bp.sub_block_length && b.count() <= bp.sub_block_length + 1;
    const int j = 2 * static_cast<int>(k + 1);
    inside_ok = inside_ok && j <= bp.P && b.first >= bp.J(j).first && b.last <= bp.J(j).last;
    if (inside_ok) {
      // Recomputed from the sequence, not read back from the partition.
      const double eb = energy_range(seq, b.first, b.last);
      const double ej = energy_range(seq, bp.J(j).first, bp.J(j).last);
      energy_ok = energy_ok && eb <= ej / bp.sub_block_counts[k] * (1.0 + kSlack);
    }
  }
  add("B_size_lower_bound", b_ok);
  add("B_length_window", window_ok);
  add("B_inside_even_J", inside_ok);
  add("B_energy_at_most_share", energy_ok && inside_ok);

  bool j_ok = bp.J_bounds.size() >= 2 && bp.J_bounds.front() == 0;
  for (std::size_t i = 1; j_ok && i < bp.J_bounds.size(); ++i) {
    const double e = energy_range(seq, bp.J_bounds[i - 1] + 1, bp.J_bounds[i]);
    const double e_short =
        bp.J_bounds[i] - 1 > bp.J_bounds[i - 1] ? energy_range(seq, bp.J_bounds[i - 1] + 1, bp.J_bounds[i] - 1) : 0.0;
    j_ok = at_least(e, bp.threshold) && !at_least(e_short, bp.threshold);
  }
  add("J_threshold_minimal", j_ok);
  add("Q_from_P", bp.Q == (bp.P + 1) / 2, "Q_N*phi^(1/8) = " + std::to_string(rep.q_phi));
  return rep;
}

double block_variance_ratio(const CoefficientSequence& seq, cplx lambda, const BlockPartition& bp) {
  PairwiseAccumulator<double> acc;
  for (const auto& a : bp.A)
    if (!a.empty()) acc.add(block_sigma2(seq, lambda, a.first, a.last));
  return acc.total() / sigma2(seq, lambda, bp.N);
}

BlockSums block_sums(const BlaschkeProduct& f, const CoefficientSequence& seq, const BlockPartition& bp,
                     std::span<const cplx> points, const Exec& exec) {
  BlockSums out;
  out.points = points.size();
  out.nA = bp.A.size();
  out.nB = bp.B.size();
  out.xi.assign(out.points * out.nA, cplx{});
  out.eta.assign(out.points * out.nB, cplx{});
  out.residual.assign(out.points, cplx{});
  out.total.assign(out.points, cplx{});

  // Owner of each index: k ≥ 0 for A(k+1), −k−1 for B(k), INT_MIN for the residual.
  const auto coeffs = seq.values(1, bp.N);
  std::vector<int> owner(bp.N, -(1 << 30));
  for (std::size_t k = 0; k < bp.A.size(); ++k)
    for (std::int64_t n = bp.A[k].first; n <= bp.A[k].last; ++n) owner[n - 1] = static_cast<int>(k);
  for (std::size_t k = 0; k < bp.B.size(); ++k)
    for (std::int64_t n = bp.B[k].first; n <= bp.B[k].last; ++n) owner[n - 1] = -static_cast<int>(k) - 1;

#pragma omp parallel for schedule(static, 64) num_threads(std::max(1, exec.threads))
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(out.points); ++i) {
    cplx w = points[i];
    cplx total{};
    for (std::int64_t n = 1; n <= bp.N; ++n) {
      w = f.eval_boundary(w);
      const cplx term = coeffs[n - 1] * w;
      total += term;
      const int o = owner[n - 1];
      if (o >= 0)
        out.xi[i * out.nA + o] += term;
      else if (o > -(1 << 30))
        out.eta[i * out.nB + (-o - 1)] += term;
      else
        out.residual[i] += term;
    }
    out.total[i] = total;
  }
  return out;
}

}  // namespace iclt
