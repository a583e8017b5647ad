#pragma once

#include <cstddef>
#include <vector>

#include "mgvp/grid.h"
#include "mgvp/kernel.h"

namespace mgvp {

/// Symmetric matrix indexed by grid-node pairs, (n+1) x (n+1) row-major.
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(const TimeGrid& grid);
  CovarianceMatrix(const TimeGrid& grid, std::vector<double> values);

  const TimeGrid& grid() const { return grid_; }
  std::size_t size() const { return dim_; }
  double operator()(std::size_t i, std::size_t k) const { return values_[i * dim_ + k]; }
  double& operator()(std::size_t i, std::size_t k) { return values_[i * dim_ + k]; }
  const std::vector<double>& values() const { return values_; }

  /// Replace with (M + M^T)/2.
  void symmetrize();
  double max_asymmetry() const;
  double trace() const;
  double min_eigenvalue() const;

  /// Symmetric within 1e-12 absolute and min eigenvalue >= -1e-10 * trace.
  bool is_valid_covariance() const;

 private:
  TimeGrid grid_;
  std::size_t dim_;
  std::vector<double> values_;
};

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kPsdRelativeTolerance = 1e-10;

/// Unconditional r(t_i, t_k) over all node pairs.
CovarianceMatrix covariance_matrix(const KernelMatrix& km);

}  // namespace mgvp
