#include "mgvp/prediction.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mgvp {

namespace {

// Cell-averaged product sums over [0, u) and [u, t^s): r = head + tail and
// the cross integral is head.
struct SplitSum {
  double head;
  double tail;
};

SplitSum split_product_sum(std::span<const double> ri, std::span<const double> rk, std::size_t mu, std::size_t m,
                           double dt) {
  double head = 0.0;
  for (std::size_t j = 0; j < mu; ++j) head += ri[j] * rk[j];
  double tail = 0.0;
  for (std::size_t j = mu; j < m; ++j) tail += ri[j] * rk[j];
  return {head * dt, tail * dt};
}

}  // namespace

double prediction_kernel(const VolterraKernel& kernel, const MixParams& params, double t, double v) {
  if (!(v < t)) return 0.0;
  return params.gain() * kernel_eval(kernel, t, v);
}

double conditional_mean(const KernelMatrix& km, const MixParams& params, std::span<const double> dWab,
                        std::size_t iu, std::size_t it) {
  if (dWab.size() != km.grid().cells()) throw std::invalid_argument("increment length does not match grid");
  const auto row = km.row(it);
  const std::size_t m = std::min(iu, it);
  double acc = 0.0;
  for (std::size_t j = 0; j < m; ++j) acc += row[j] * dWab[j];
  return params.gain() * acc;
}

double conditional_mean(const VolterraKernel& kernel, const MixParams& params, std::span<const double> dWab,
                        double u, double t, const TimeGrid& grid) {
  return conditional_mean(KernelMatrix(kernel, grid), params, dWab, grid.node_index(u), grid.node_index(t));
}

double conditional_covariance(const KernelMatrix& km, const MixParams& params, std::size_t iu, std::size_t it,
                              std::size_t is) {
  const double a2 = params.a() * params.a();
  const double b2 = params.b() * params.b();
  const double e = a2 + b2;
  // 1 - a^2/(a^2+b^2) on v < u, evaluated as b^2/(a^2+b^2) to avoid cancellation.
  const double weight_observed = b2 / e;
  const double disturbance = a2 * b2 / (e * e);
  const double dt = km.grid().dt();
  const auto rt = km.row(it);
  const auto rs = km.row(is);
  const std::size_t m = std::min(it, is);

  double driver = 0.0;
  double observed = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double kk = rt[j] * rs[j] * dt;
    const double w = j < iu ? weight_observed : 1.0;
    driver += w * w * kk;
    if (j < iu) observed += kk;
  }
  return driver + disturbance * observed;
}

double conditional_covariance(const VolterraKernel& kernel, const MixParams& params, double u, double t, double s,
                              const TimeGrid& grid) {
  return conditional_covariance(KernelMatrix(kernel, grid), params, grid.node_index(u), grid.node_index(t),
                                grid.node_index(s));
}

double conditional_covariance_closed(const KernelMatrix& km, const MixParams& params, std::size_t iu,
                                     std::size_t it, std::size_t is) {
  const std::size_t m = std::min(it, is);
  const std::size_t mu = std::min(m, iu);
  const SplitSum parts = split_product_sum(km.row(it), km.row(is), mu, m, km.grid().dt());
  return parts.tail + params.residual_share() * parts.head;
}

double conditional_covariance_closed(const VolterraKernel& kernel, const MixParams& params, double u, double t,
                                     double s, const TimeGrid& grid) {
  return conditional_covariance_closed(KernelMatrix(kernel, grid), params, grid.node_index(u),
                                       grid.node_index(t), grid.node_index(s));
}

double present_variance(const KernelMatrix& km, const MixParams& params, std::size_t iu) {
  return params.residual_share() * covariance(km, iu, iu);
}

double present_variance(const VolterraKernel& kernel, const MixParams& params, double u, const TimeGrid& grid) {
  return params.residual_share() * covariance(kernel, u, u, grid);
}

MixParams rho_to_mix(double rho) {
  if (!(std::abs(rho) <= 1.0)) throw std::invalid_argument("rho must lie in [-1,1]");
  return MixParams(rho, std::sqrt((1.0 - rho) * (1.0 + rho)));
}

CovarianceMatrix conditional_covariance_matrix(const KernelMatrix& km, const MixParams& params, std::size_t iu) {
  const TimeGrid& grid = km.grid();
  if (iu > grid.cells()) throw std::out_of_range("observation node beyond horizon");
  CovarianceMatrix out(grid);
  const double share = params.residual_share();
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t k = 0; k <= i; ++k) {
      const SplitSum parts = split_product_sum(km.row(i), km.row(k), std::min(k, iu), k, grid.dt());
      const double v = parts.tail + share * parts.head;
      out(i, k) = v;
      out(k, i) = v;
    }
  }
  out.symmetrize();
  return out;
}

PredictionLaw prediction_law(const KernelMatrix& km, const MixParams& params, std::span<const double> dWab,
                             std::size_t iu) {
  const TimeGrid& grid = km.grid();
  if (iu > grid.cells()) throw std::out_of_range("observation node beyond horizon");
  std::vector<double> mean(grid.nodes());
  for (std::size_t i = 0; i < mean.size(); ++i) mean[i] = conditional_mean(km, params, dWab, iu, i);
  CovarianceMatrix cov = conditional_covariance_matrix(km, params, iu);
  if (!cov.is_valid_covariance()) {
    throw std::runtime_error("conditional covariance fails the PSD tolerance");
  }
  return PredictionLaw{iu, grid.node(iu), std::move(mean), std::move(cov), params};
}

}  // namespace mgvp
