#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <thread>
#include <utility>
#include <vector>

namespace mgvp {

/// Paths are grouped in fixed-size blocks. Each block is accumulated in
/// path order and blocks are merged by a fixed pairwise tree, so results do
/// not depend on the number of worker threads.
inline constexpr std::size_t kPathBlock = 1024;

std::size_t default_worker_count();

/// make() builds an empty accumulator; body(acc, path_index) adds one path.
/// Acc must provide merge(const Acc&).
template <class Acc, class Make, class Body>
Acc reduce_paths(std::size_t n_paths, Make make, Body body, std::size_t workers = 0) {
  const std::size_t blocks = (n_paths + kPathBlock - 1) / kPathBlock;
  if (blocks == 0) return make();
  if (workers == 0) workers = default_worker_count();
  workers = std::clamp<std::size_t>(workers, 1, blocks);

  std::vector<Acc> partial;
  partial.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b) partial.push_back(make());

  auto run = [&](std::size_t w) {
    for (std::size_t b = w; b < blocks; b += workers) {
      const std::size_t end = std::min(n_paths, (b + 1) * kPathBlock);
      for (std::size_t p = b * kPathBlock; p < end; ++p) body(partial[b], p);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }

  for (std::size_t stride = 1; stride < blocks; stride *= 2) {
    for (std::size_t b = 0; b + stride < blocks; b += 2 * stride) partial[b].merge(partial[b + stride]);
  }
  return std::move(partial.front());
}

/// Running sums for sample means, variances and pairwise covariances of a
/// fixed set of variables, with the standard error of each covariance.
class PairMoments {
 public:
  using Pair = std::pair<std::size_t, std::size_t>;

  PairMoments(std::size_t variables, std::vector<Pair> pairs);

  void add(std::span<const double> x);
  void merge(const PairMoments& other);

  std::size_t count() const { return count_; }
  std::size_t variables() const { return sum_.size(); }
  const std::vector<Pair>& pairs() const { return pairs_; }

  double mean(std::size_t k) const;
  /// Unbiased sample variance.
  double variance(std::size_t k) const;

  struct Estimate {
    double value;
    double standard_error;
  };
  /// Sample covariance of pair p; the standard error is the sample sd of the
  /// products over sqrt(N).
  Estimate covariance(std::size_t p) const;

  /// Mean of x_k^2 (no centring) with its standard error.
  Estimate second_moment(std::size_t k) const;

 private:
  std::size_t count_ = 0;
  std::vector<Pair> pairs_;
  std::vector<double> sum_;
  std::vector<double> sum_sq_;
  std::vector<double> sum_fourth_;
  std::vector<double> sum_prod_;
  std::vector<double> sum_prod_sq_;
};

}  // namespace mgvp
