#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mgvp/grid.h"

namespace mgvp {

struct BrownianIdentity {};

/// k(t,s) = (t-s)^{H-1/2} / Gamma(H+1/2).
struct RiemannLiouville {
  double hurst;
};

/// k(t,s) = sigma * exp(-theta (t-s)).
struct ExponentialOU {
  double theta;
  double sigma;
};

/// Cell-averaged values on a fixed grid, packed lower-triangular: row i
/// (node t_i, i = 1..n) holds i values for cells j = 0..i-1.
struct Tabulated {
  TimeGrid grid;
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const { return values[i * (i - 1) / 2 + j]; }
};

using KernelSpec = std::variant<BrownianIdentity, RiemannLiouville, ExponentialOU, Tabulated>;

/// Deterministic Volterra kernel: k(t,s) = 0 whenever s >= t.
class VolterraKernel {
 public:
  static VolterraKernel brownian();
  static VolterraKernel riemann_liouville(double hurst);
  static VolterraKernel exponential_ou(double theta, double sigma);
  static VolterraKernel tabulated(const TimeGrid& grid, std::vector<double> packed_values);

  const KernelSpec& spec() const { return spec_; }
  bool is_brownian() const { return std::holds_alternative<BrownianIdentity>(spec_); }
  std::string describe() const;

 private:
  explicit VolterraKernel(KernelSpec spec) : spec_(std::move(spec)) {}
  KernelSpec spec_;
};

double gamma_fn(double x);

/// Pointwise k(t,s). Diverges on the diagonal for Riemann-Liouville with
/// H < 1/2; use cell_integral there.
double kernel_eval(const VolterraKernel& kernel, double t, double s);

/// Integral of k(t,.) over cell j, clipped to s < t.
double cell_integral(const VolterraKernel& kernel, double t, std::size_t j, const TimeGrid& grid);

/// Integral of k(t,.)^2 over cell j, clipped to s < t.
double cell_integral_sq(const VolterraKernel& kernel, double t, std::size_t j, const TimeGrid& grid);

/// Every cell integral of k^2 up to every node is finite.
bool is_admissible(const VolterraKernel& kernel, const TimeGrid& grid);

/// Closed-form r(t,t) where one exists (Brownian, Riemann-Liouville, OU).
double self_covariance_closed_form(const VolterraKernel& kernel, double t);

/// Cell-averaged kernel kbar(t_i, j) = cell_integral / dt for every node i and
/// cell j < i, packed lower-triangular.
class KernelMatrix {
 public:
  KernelMatrix(VolterraKernel kernel, TimeGrid grid);

  const VolterraKernel& kernel() const { return kernel_; }
  const TimeGrid& grid() const { return grid_; }

  /// kbar(t_i, j) for j < i; row(0) is empty.
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * (i - 1) / 2, i};
  }
  double at(std::size_t i, std::size_t j) const { return j < i ? row(i)[j] : 0.0; }

  /// Sum over cells j < m of kbar(t_i, j) kbar(t_k, j) dt. No shortcuts.
  double product_sum(std::size_t i, std::size_t k, std::size_t m) const;

 private:
  VolterraKernel kernel_;
  TimeGrid grid_;
  std::vector<double> values_;
};

/// r(t,s) from cell averages; Brownian uses r = t ^ s.
double covariance(const KernelMatrix& km, std::size_t i, std::size_t k);
double covariance(const VolterraKernel& kernel, double t, double s, const TimeGrid& grid);

/// Integral over [0, u ^ t ^ s] of k(t,v) k(s,v) dv.
double cross_integral(const KernelMatrix& km, std::size_t i, std::size_t k, std::size_t iu);
double cross_integral(const VolterraKernel& kernel, double t, double s, double u, const TimeGrid& grid);

}  // namespace mgvp
