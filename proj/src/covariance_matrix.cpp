#include "mgvp/covariance_matrix.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mgvp {

CovarianceMatrix::CovarianceMatrix(const TimeGrid& grid)
    : grid_(grid), dim_(grid.nodes()), values_(dim_ * dim_, 0.0) {}

CovarianceMatrix::CovarianceMatrix(const TimeGrid& grid, std::vector<double> values)
    : grid_(grid), dim_(grid.nodes()), values_(std::move(values)) {
  if (values_.size() != dim_ * dim_) throw std::invalid_argument("covariance matrix size mismatch");
}

void CovarianceMatrix::symmetrize() {
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t k = i + 1; k < dim_; ++k) {
      const double m = 0.5 * ((*this)(i, k) + (*this)(k, i));
      (*this)(i, k) = m;
      (*this)(k, i) = m;
    }
  }
}

double CovarianceMatrix::max_asymmetry() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t k = i + 1; k < dim_; ++k) {
      worst = std::max(worst, std::abs((*this)(i, k) - (*this)(k, i)));
    }
  }
  return worst;
}

double CovarianceMatrix::trace() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) acc += (*this)(i, i);
  return acc;
}

double CovarianceMatrix::min_eigenvalue() const {
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      values_.data(), static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalue computation failed");
  return solver.eigenvalues().minCoeff();
}

bool CovarianceMatrix::is_valid_covariance() const {
  if (max_asymmetry() > kSymmetryTolerance) return false;
  return min_eigenvalue() >= -kPsdRelativeTolerance * std::abs(trace());
}

CovarianceMatrix covariance_matrix(const KernelMatrix& km) {
  CovarianceMatrix out(km.grid());
  const std::size_t dim = out.size();
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t k = 0; k <= i; ++k) {
      const double r = covariance(km, i, k);
      out(i, k) = r;
      out(k, i) = r;
    }
  }
  return out;
}

}  // namespace mgvp
