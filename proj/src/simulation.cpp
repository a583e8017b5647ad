#include "mgvp/simulation.h"

#include <cmath>
#include <stdexcept>

#include "mgvp/rng.h"

namespace mgvp {

MixParams::MixParams(double a, double b) : a_(a), b_(b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("channel parameters must be finite");
  if (a * a + b * b <= 0.0) throw std::invalid_argument("degenerate observation channel");
}

NoiseDraw draw_noise(const TimeGrid& grid, std::uint64_t seed, std::uint64_t path_index) {
  const std::size_t n = grid.cells();
  const double sd = std::sqrt(grid.dt());
  NoiseDraw out{std::vector<double>(n), std::vector<double>(n), seed, path_index};
  CounterRng driver(seed, path_index, Channel::kDriver);
  CounterRng disturbance(seed, path_index, Channel::kDisturbance);
  for (std::size_t j = 0; j < n; ++j) out.dW[j] = sd * driver.gaussian();
  for (std::size_t j = 0; j < n; ++j) out.dWt[j] = sd * disturbance.gaussian();
  return out;
}

double path_value(const KernelMatrix& km, std::span<const double> increments, std::size_t i) {
  if (increments.size() != km.grid().cells()) throw std::invalid_argument("increment length does not match grid");
  const auto row = km.row(i);
  double acc = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * increments[j];
  return acc;
}

std::vector<double> build_path(const KernelMatrix& km, std::span<const double> increments) {
  if (increments.size() != km.grid().cells()) throw std::invalid_argument("increment length does not match grid");
  std::vector<double> out(km.grid().nodes(), 0.0);
  for (std::size_t i = 1; i < out.size(); ++i) out[i] = path_value(km, increments, i);
  return out;
}

std::vector<double> build_path(const VolterraKernel& kernel, std::span<const double> increments,
                               const TimeGrid& grid) {
  if (increments.size() != grid.cells()) throw std::invalid_argument("increment length does not match grid");
  return build_path(KernelMatrix(kernel, grid), increments);
}

std::vector<double> mix(const NoiseDraw& noise, const MixParams& params) {
  if (noise.dW.size() != noise.dWt.size()) throw std::invalid_argument("noise streams differ in length");
  std::vector<double> out(noise.dW.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = params.a() * noise.dW[j] + params.b() * noise.dWt[j];
  return out;
}

PathBundle make_bundle(const KernelMatrix& km, const NoiseDraw& noise, const MixParams& params) {
  PathBundle out;
  out.X = build_path(km, noise.dW);
  out.Xt = build_path(km, noise.dWt);
  out.dWab = mix(noise, params);
  out.Xb.resize(out.X.size());
  for (std::size_t i = 0; i < out.X.size(); ++i) out.Xb[i] = out.X[i] + params.b() * out.Xt[i];
  return out;
}

PathBundle make_bundle(const VolterraKernel& kernel, const NoiseDraw& noise, const MixParams& params,
                       const TimeGrid& grid) {
  return make_bundle(KernelMatrix(kernel, grid), noise, params);
}

}  // namespace mgvp
