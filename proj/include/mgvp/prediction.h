#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mgvp/covariance_matrix.h"
#include "mgvp/grid.h"
#include "mgvp/kernel.h"
#include "mgvp/simulation.h"

namespace mgvp {

// Conditional law of X given the mixed observation W^{a,b} on [0, u]:
// Gaussian with mean gain * int_0^u k(t,s) dW^{a,b}_s and deterministic
// covariance r(t,s) - c * int_0^{u^t^s} k(t,v) k(s,v) dv.

/// a/(a^2+b^2) k(t,v); zero for v >= t.
double prediction_kernel(const VolterraKernel& kernel, const MixParams& params, double t, double v);

double conditional_mean(const KernelMatrix& km, const MixParams& params, std::span<const double> dWab,
                        std::size_t iu, std::size_t it);
double conditional_mean(const VolterraKernel& kernel, const MixParams& params, std::span<const double> dWab,
                        double u, double t, const TimeGrid& grid);

/// Term-by-term quadrature of the conditional covariance with the indicator
/// weight (1 - c 1[v < u])^2 plus the a^2 b^2 / (a^2+b^2)^2 disturbance term.
/// Kept as the reference for conditional_covariance_closed.
double conditional_covariance(const KernelMatrix& km, const MixParams& params, std::size_t iu, std::size_t it,
                              std::size_t is);
double conditional_covariance(const VolterraKernel& kernel, const MixParams& params, double u, double t, double s,
                              const TimeGrid& grid);

/// r(t,s) - c * cross_integral(t, s, u), evaluated from cell-averaged product
/// sums split at u as (r - cross) + (1 - c) * cross.
double conditional_covariance_closed(const KernelMatrix& km, const MixParams& params, std::size_t iu,
                                     std::size_t it, std::size_t is);
double conditional_covariance_closed(const VolterraKernel& kernel, const MixParams& params, double u, double t,
                                     double s, const TimeGrid& grid);

/// Variance of X_u given observations up to u: b^2/(a^2+b^2) r(u,u).
double present_variance(const KernelMatrix& km, const MixParams& params, std::size_t iu);
double present_variance(const VolterraKernel& kernel, const MixParams& params, double u, const TimeGrid& grid);

/// Correlation parametrization: a = rho, b = sqrt(1 - rho^2).
MixParams rho_to_mix(double rho);

/// Closed-form conditional covariance over all node pairs, symmetrized.
CovarianceMatrix conditional_covariance_matrix(const KernelMatrix& km, const MixParams& params, std::size_t iu);

struct PredictionLaw {
  std::size_t u_index;
  double u;
  std::vector<double> mean;
  CovarianceMatrix cov;
  MixParams params;
};

/// Mean at every node and covariance at every node pair; throws
/// std::runtime_error if the covariance fails the PSD tolerance.
PredictionLaw prediction_law(const KernelMatrix& km, const MixParams& params, std::span<const double> dWab,
                             std::size_t iu);

}  // namespace mgvp
