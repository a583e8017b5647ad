#include "mgvp/application.h"

#include <cmath>
#include <stdexcept>

#include "mgvp/monte_carlo.h"
#include "mgvp/prediction.h"
#include "mgvp/simulation.h"

namespace mgvp {

namespace {

// Variables per path: naive error, filtered error.
PairMoments simulate_errors(const KernelMatrix& km, double b, std::size_t it, std::size_t n_paths,
                            std::uint64_t seed) {
  if (n_paths < 2) throw std::invalid_argument("mc_mse needs at least 2 paths");
  if (it > km.grid().cells()) throw std::out_of_range("evaluation node beyond horizon");
  const MixParams params(1.0, b);
  return reduce_paths<PairMoments>(
      n_paths, [] { return PairMoments(2, {}); },
      [&](PairMoments& acc, std::size_t p) {
        const NoiseDraw noise = draw_noise(km.grid(), seed, p);
        const double x = path_value(km, noise.dW, it);
        const double xt = path_value(km, noise.dWt, it);
        const std::vector<double> dwab = mix(noise, params);
        const double filtered = conditional_mean(km, params, dwab, it, it);
        const double errors[2] = {(x + b * xt) - x, filtered - x};
        acc.add(errors);
      });
}

MseEstimate to_estimate(const PairMoments& m, std::size_t k) {
  const auto e = m.second_moment(k);
  return {e.value, e.standard_error};
}

bool within_band(const MseEstimate& mc, double analytic) {
  return std::abs(mc.mse - analytic) <= kMseBandSigmas * mc.standard_error;
}

}  // namespace

double naive_mse_analytic(const KernelMatrix& km, double b, std::size_t it) {
  return b * b * covariance(km, it, it);
}

double naive_mse_analytic(const VolterraKernel& kernel, double b, double t, const TimeGrid& grid) {
  return b * b * covariance(kernel, t, t, grid);
}

double filtered_mse_analytic(const KernelMatrix& km, double b, std::size_t it) {
  return b * b / (1.0 + b * b) * covariance(km, it, it);
}

double filtered_mse_analytic(const VolterraKernel& kernel, double b, double t, const TimeGrid& grid) {
  return b * b / (1.0 + b * b) * covariance(kernel, t, t, grid);
}

MseEstimate mc_mse(const KernelMatrix& km, double b, std::size_t it, Estimator estimator, std::size_t n_paths,
                   std::uint64_t seed) {
  const PairMoments m = simulate_errors(km, b, it, n_paths, seed);
  return to_estimate(m, estimator == Estimator::kNaive ? 0 : 1);
}

MseEstimate mc_mse(const VolterraKernel& kernel, double b, double t, Estimator estimator, std::size_t n_paths,
                   std::uint64_t seed, const TimeGrid& grid) {
  return mc_mse(KernelMatrix(kernel, grid), b, grid.node_index(t), estimator, n_paths, seed);
}

std::vector<MseReport> variance_reduction_report(const KernelMatrix& km, std::span<const double> b_values,
                                                 std::size_t it, std::size_t n_paths, std::uint64_t seed) {
  std::vector<MseReport> rows;
  rows.reserve(b_values.size());
  for (double b : b_values) {
    const PairMoments m = simulate_errors(km, b, it, n_paths, seed);
    MseReport row{};
    row.t = km.grid().node(it);
    row.b = b;
    row.naive_analytic = naive_mse_analytic(km, b, it);
    row.filtered_analytic = filtered_mse_analytic(km, b, it);
    row.naive_mc = to_estimate(m, 0);
    row.filtered_mc = to_estimate(m, 1);
    row.n_paths = n_paths;
    // b = 0 (or t = 0) makes both errors vanish; report the limiting ratio.
    row.reduction_ratio =
        row.naive_analytic > 0.0 ? row.filtered_analytic / row.naive_analytic : 1.0 / (1.0 + b * b);
    row.naive_within_band = within_band(row.naive_mc, row.naive_analytic);
    row.filtered_within_band = within_band(row.filtered_mc, row.filtered_analytic);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mgvp
