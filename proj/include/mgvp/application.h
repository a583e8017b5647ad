#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mgvp/grid.h"
#include "mgvp/kernel.h"

namespace mgvp {

// Measurement-error model X^b = X + b X~ observed through the a = 1 channel.
// The naive estimator uses X^b_t directly; the filtered estimator uses the
// conditional mean given observations up to t.

enum class Estimator { kNaive, kFiltered };

/// b^2 r(t,t).
double naive_mse_analytic(const KernelMatrix& km, double b, std::size_t it);
double naive_mse_analytic(const VolterraKernel& kernel, double b, double t, const TimeGrid& grid);

/// b^2/(1+b^2) r(t,t); never above min(1, b^2) r(t,t).
double filtered_mse_analytic(const KernelMatrix& km, double b, std::size_t it);
double filtered_mse_analytic(const VolterraKernel& kernel, double b, double t, const TimeGrid& grid);

struct MseEstimate {
  double mse;
  double standard_error;
};

/// Monte Carlo MSE over paths 0..n_paths-1 of `seed`.
MseEstimate mc_mse(const KernelMatrix& km, double b, std::size_t it, Estimator estimator, std::size_t n_paths,
                   std::uint64_t seed);
MseEstimate mc_mse(const VolterraKernel& kernel, double b, double t, Estimator estimator, std::size_t n_paths,
                   std::uint64_t seed, const TimeGrid& grid);

struct MseReport {
  double t;
  double b;
  double naive_analytic;
  double filtered_analytic;
  MseEstimate naive_mc;
  MseEstimate filtered_mc;
  std::size_t n_paths;
  double reduction_ratio;
  bool naive_within_band;
  bool filtered_within_band;

  bool pass() const { return naive_within_band && filtered_within_band; }
};

inline constexpr double kMseBandSigmas = 3.0;

/// One row per b. Both estimators share the same simulated paths.
std::vector<MseReport> variance_reduction_report(const KernelMatrix& km, std::span<const double> b_values,
                                                 std::size_t it, std::size_t n_paths, std::uint64_t seed);

}  // namespace mgvp
