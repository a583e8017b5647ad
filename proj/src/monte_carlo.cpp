#include "mgvp/monte_carlo.h"

#include <cmath>
#include <stdexcept>

namespace mgvp {

std::size_t default_worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

PairMoments::PairMoments(std::size_t variables, std::vector<Pair> pairs)
    : pairs_(std::move(pairs)),
      sum_(variables, 0.0),
      sum_sq_(variables, 0.0),
      sum_fourth_(variables, 0.0),
      sum_prod_(pairs_.size(), 0.0),
      sum_prod_sq_(pairs_.size(), 0.0) {
  for (const auto& [i, k] : pairs_) {
    if (i >= variables || k >= variables) throw std::invalid_argument("pair refers to unknown variable");
  }
}

void PairMoments::add(std::span<const double> x) {
  if (x.size() != sum_.size()) throw std::invalid_argument("sample has wrong number of variables");
  ++count_;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double sq = x[k] * x[k];
    sum_[k] += x[k];
    sum_sq_[k] += sq;
    sum_fourth_[k] += sq * sq;
  }
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    const double prod = x[pairs_[p].first] * x[pairs_[p].second];
    sum_prod_[p] += prod;
    sum_prod_sq_[p] += prod * prod;
  }
}

void PairMoments::merge(const PairMoments& other) {
  if (other.sum_.size() != sum_.size() || other.pairs_ != pairs_) {
    throw std::invalid_argument("cannot merge moments over different variables");
  }
  count_ += other.count_;
  for (std::size_t k = 0; k < sum_.size(); ++k) {
    sum_[k] += other.sum_[k];
    sum_sq_[k] += other.sum_sq_[k];
    sum_fourth_[k] += other.sum_fourth_[k];
  }
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    sum_prod_[p] += other.sum_prod_[p];
    sum_prod_sq_[p] += other.sum_prod_sq_[p];
  }
}

double PairMoments::mean(std::size_t k) const { return sum_[k] / static_cast<double>(count_); }

double PairMoments::variance(std::size_t k) const {
  const double n = static_cast<double>(count_);
  return std::max(0.0, (sum_sq_[k] - sum_[k] * sum_[k] / n) / (n - 1.0));
}

PairMoments::Estimate PairMoments::covariance(std::size_t p) const {
  const double n = static_cast<double>(count_);
  const auto [i, k] = pairs_[p];
  const double cov = (sum_prod_[p] - sum_[i] * sum_[k] / n) / (n - 1.0);
  const double mean_prod = sum_prod_[p] / n;
  const double var_prod = std::max(0.0, (sum_prod_sq_[p] - n * mean_prod * mean_prod) / (n - 1.0));
  return {cov, std::sqrt(var_prod / n)};
}

PairMoments::Estimate PairMoments::second_moment(std::size_t k) const {
  const double n = static_cast<double>(count_);
  const double m2 = sum_sq_[k] / n;
  const double var_sq = std::max(0.0, (sum_fourth_[k] - n * m2 * m2) / (n - 1.0));
  return {m2, std::sqrt(var_sq / n)};
}

}  // namespace mgvp
