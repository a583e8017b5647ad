#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mgvp/grid.h"
#include "mgvp/kernel.h"

namespace mgvp {

/// Observation channel W^{a,b} = a W + b W~. Rejects a = b = 0.
class MixParams {
 public:
  MixParams(double a, double b);

  double a() const { return a_; }
  double b() const { return b_; }
  double energy() const { return a_ * a_ + b_ * b_; }
  /// a / (a^2 + b^2), the prediction-kernel coefficient.
  double gain() const { return a_ / energy(); }
  /// c = a^2 / (a^2 + b^2) in [0, 1].
  double information() const { return a_ * a_ / energy(); }
  /// 1 - c = b^2 / (a^2 + b^2), computed without cancellation.
  double residual_share() const { return b_ * b_ / energy(); }

 private:
  double a_;
  double b_;
};

struct NoiseDraw {
  std::vector<double> dW;
  std::vector<double> dWt;
  std::uint64_t seed = 0;
  std::uint64_t path_index = 0;
};

struct PathBundle {
  std::vector<double> X;
  std::vector<double> Xt;
  std::vector<double> dWab;
  std::vector<double> Xb;
};

/// Increments of W (channel 0) and W~ (channel 1), each N(0, dt).
NoiseDraw draw_noise(const TimeGrid& grid, std::uint64_t seed, std::uint64_t path_index);

/// Discretized Wiener integral sum_{j<i} kbar(t_i, j) dW_j at one node.
double path_value(const KernelMatrix& km, std::span<const double> increments, std::size_t i);

/// Same, at every node; value at t_0 is 0.
std::vector<double> build_path(const KernelMatrix& km, std::span<const double> increments);
std::vector<double> build_path(const VolterraKernel& kernel, std::span<const double> increments,
                               const TimeGrid& grid);

std::vector<double> mix(const NoiseDraw& noise, const MixParams& params);

PathBundle make_bundle(const KernelMatrix& km, const NoiseDraw& noise, const MixParams& params);
PathBundle make_bundle(const VolterraKernel& kernel, const NoiseDraw& noise, const MixParams& params,
                       const TimeGrid& grid);

}  // namespace mgvp
