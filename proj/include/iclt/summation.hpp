#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace iclt {

/// Streaming pairwise summation.
///
/// Values are folded into leaves of `kLeaf` consecutive terms (naive sum
/// inside a leaf); completed leaves are merged like a binary counter, so the
/// reduction tree depends only on the number of terms and never on how the
/// terms were produced. Parallel kernels reduce fixed-size chunks with this
/// tree and feed the chunk sums, in chunk order, into a second accumulator.
template <class T>
class PairwiseAccumulator {
 public:
  static constexpr std::size_t kLeaf = 64;

  void add(const T& value) {
    leaf_ += value;
    if (++in_leaf_ == kLeaf) {
      merge(leaf_);
      leaf_ = T{};
      in_leaf_ = 0;
    }
  }

  T total() const {
    T acc = leaf_;
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) acc = it->value + acc;
    return acc;
  }

 private:
  void merge(const T& leaf) {
    T carry = leaf;
    std::size_t level = 0;
    while (!stack_.empty() && stack_.back().level == level) {
      carry = stack_.back().value + carry;
      stack_.pop_back();
      ++level;
    }
    stack_.push_back({level, carry});
  }

  struct Node {
    std::size_t level;
    T value;
  };
  std::vector<Node> stack_;
  T leaf_{};
  std::size_t in_leaf_ = 0;
};

template <class T>
T pairwise_sum(std::span<const T> values) {
  PairwiseAccumulator<T> acc;
  for (const T& v : values) acc.add(v);
  return acc.total();
}

/// Neumaier compensated running sum, used for long orbit accumulations.
template <class T>
class CompensatedSum {
 public:
  void add(const T& value);
  T total() const { return sum_ + comp_; }

 private:
  T sum_{};
  T comp_{};
};

template <>
inline void CompensatedSum<double>::add(const double& value) {
  const double t = sum_ + value;
  if (std::abs(sum_) >= std::abs(value))
    comp_ += (sum_ - t) + value;
  else
    comp_ += (value - t) + sum_;
  sum_ = t;
}

template <>
inline void CompensatedSum<std::complex<double>>::add(const std::complex<double>& value) {
  auto step = [](double& s, double& c, double v) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  };
  double sr = sum_.real(), si = sum_.imag(), cr = comp_.real(), ci = comp_.imag();
  step(sr, cr, value.real());
  step(si, ci, value.imag());
  sum_ = {sr, si};
  comp_ = {cr, ci};
}

}  // namespace iclt
