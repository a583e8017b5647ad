#include "mgvp/kernel.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mgvp {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Tabulated kernels are only meaningful on the grid they were tabulated on.
std::vector<double> averaged_row(const VolterraKernel& kernel, const TimeGrid& grid, std::size_t i) {
  std::vector<double> row(i);
  const double t = grid.node(i);
  for (std::size_t j = 0; j < i; ++j) row[j] = cell_integral(kernel, t, j, grid) / grid.dt();
  return row;
}

double averaged_product_sum(const VolterraKernel& kernel, const TimeGrid& grid, std::size_t i,
                            std::size_t k, std::size_t m) {
  m = std::min({m, i, k});
  const auto ri = averaged_row(kernel, grid, i);
  const auto rk = averaged_row(kernel, grid, k);
  double acc = 0.0;
  for (std::size_t j = 0; j < m; ++j) acc += ri[j] * rk[j];
  return acc * grid.dt();
}

void require_same_grid(const Tabulated& tab, const TimeGrid& grid) {
  if (tab.grid.cells() != grid.cells() || tab.grid.horizon() != grid.horizon()) {
    throw std::invalid_argument("tabulated kernel grid mismatch");
  }
}

}  // namespace

VolterraKernel VolterraKernel::brownian() { return VolterraKernel(BrownianIdentity{}); }

VolterraKernel VolterraKernel::riemann_liouville(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw std::invalid_argument("hurst must lie in (0,1)");
  return VolterraKernel(RiemannLiouville{hurst});
}

VolterraKernel VolterraKernel::exponential_ou(double theta, double sigma) {
  if (!(theta >= 0.0) || !std::isfinite(theta)) throw std::invalid_argument("theta must be >= 0");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be > 0");
  return VolterraKernel(ExponentialOU{theta, sigma});
}

VolterraKernel VolterraKernel::tabulated(const TimeGrid& grid, std::vector<double> packed_values) {
  const std::size_t n = grid.cells();
  if (packed_values.size() != n * (n + 1) / 2) {
    throw std::invalid_argument("tabulated kernel needs n(n+1)/2 cell values");
  }
  for (double v : packed_values) {
    if (!std::isfinite(v)) throw std::invalid_argument("tabulated kernel value is not finite");
  }
  return VolterraKernel(Tabulated{grid, std::move(packed_values)});
}

std::string VolterraKernel::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const BrownianIdentity&) { os << "bm"; },
                 [&](const RiemannLiouville& k) { os << "rl(hurst=" << k.hurst << ")"; },
                 [&](const ExponentialOU& k) { os << "ou(theta=" << k.theta << ",sigma=" << k.sigma << ")"; },
                 [&](const Tabulated& k) { os << "tabulated(n=" << k.grid.cells() << ")"; },
             },
             spec_);
  return os.str();
}

double gamma_fn(double x) { return std::tgamma(x); }

double kernel_eval(const VolterraKernel& kernel, double t, double s) {
  if (t < 0.0 || s < 0.0) throw std::invalid_argument("kernel_eval needs t, s >= 0");
  return std::visit(
      Overloaded{
          [&](const BrownianIdentity&) { return s < t ? 1.0 : 0.0; },
          [&](const RiemannLiouville& k) {
            if (!(s < t)) return 0.0;
            return std::pow(t - s, k.hurst - 0.5) / gamma_fn(k.hurst + 0.5);
          },
          [&](const ExponentialOU& k) { return s < t ? k.sigma * std::exp(-k.theta * (t - s)) : 0.0; },
          [&](const Tabulated& k) {
            if (!k.grid.is_node(t) || !k.grid.is_node(s)) throw std::invalid_argument("off-grid query");
            const std::size_t i = k.grid.node_index(t);
            const std::size_t j = k.grid.node_index(s);
            return j < i ? k.at(i, j) : 0.0;
          },
      },
      kernel.spec());
}

double cell_integral(const VolterraKernel& kernel, double t, std::size_t j, const TimeGrid& grid) {
  if (j >= grid.cells()) throw std::out_of_range("cell index beyond grid");
  const double lo = grid.node(j);
  if (lo >= t) return 0.0;
  const double hi = std::min(grid.node(j + 1), t);
  return std::visit(
      Overloaded{
          [&](const BrownianIdentity&) { return hi - lo; },
          [&](const RiemannLiouville& k) {
            const double alpha = k.hurst + 0.5;
            return (std::pow(t - lo, alpha) - std::pow(t - hi, alpha)) / gamma_fn(alpha + 1.0);
          },
          [&](const ExponentialOU& k) {
            if (k.theta == 0.0) return k.sigma * (hi - lo);
            // sigma/theta [e^{-theta(t-hi)} - e^{-theta(t-lo)}]
            return k.sigma * std::exp(-k.theta * (t - hi)) * -std::expm1(-k.theta * (hi - lo)) / k.theta;
          },
          [&](const Tabulated& k) {
            require_same_grid(k, grid);
            return k.at(grid.node_index(t), j) * grid.dt();
          },
      },
      kernel.spec());
}

double cell_integral_sq(const VolterraKernel& kernel, double t, std::size_t j, const TimeGrid& grid) {
  if (j >= grid.cells()) throw std::out_of_range("cell index beyond grid");
  const double lo = grid.node(j);
  if (lo >= t) return 0.0;
  const double hi = std::min(grid.node(j + 1), t);
  return std::visit(
      Overloaded{
          [&](const BrownianIdentity&) { return hi - lo; },
          [&](const RiemannLiouville& k) {
            const double g = gamma_fn(k.hurst + 0.5);
            const double p = 2.0 * k.hurst;
            return (std::pow(t - lo, p) - std::pow(t - hi, p)) / (p * g * g);
          },
          [&](const ExponentialOU& k) {
            const double s2 = k.sigma * k.sigma;
            if (k.theta == 0.0) return s2 * (hi - lo);
            const double th2 = 2.0 * k.theta;
            return s2 * std::exp(-th2 * (t - hi)) * -std::expm1(-th2 * (hi - lo)) / th2;
          },
          [&](const Tabulated& k) {
            require_same_grid(k, grid);
            const double v = k.at(grid.node_index(t), j);
            return v * v * grid.dt();
          },
      },
      kernel.spec());
}

bool is_admissible(const VolterraKernel& kernel, const TimeGrid& grid) {
  for (std::size_t i = 1; i <= grid.cells(); ++i) {
    const double t = grid.node(i);
    for (std::size_t j = 0; j < i; ++j) {
      const double v = cell_integral_sq(kernel, t, j, grid);
      if (!std::isfinite(v) || v < 0.0) return false;
    }
  }
  return true;
}

double self_covariance_closed_form(const VolterraKernel& kernel, double t) {
  return std::visit(
      Overloaded{
          [&](const BrownianIdentity&) { return t; },
          [&](const RiemannLiouville& k) {
            const double g = gamma_fn(k.hurst + 0.5);
            return std::pow(t, 2.0 * k.hurst) / (2.0 * k.hurst * g * g);
          },
          [&](const ExponentialOU& k) {
            if (k.theta == 0.0) return k.sigma * k.sigma * t;
            return k.sigma * k.sigma * -std::expm1(-2.0 * k.theta * t) / (2.0 * k.theta);
          },
          [&](const Tabulated&) -> double {
            throw std::invalid_argument("no closed-form covariance for a tabulated kernel");
          },
      },
      kernel.spec());
}

KernelMatrix::KernelMatrix(VolterraKernel kernel, TimeGrid grid)
    : kernel_(std::move(kernel)), grid_(grid) {
  const std::size_t n = grid_.cells();
  values_.resize(n * (n + 1) / 2);
  const double dt = grid_.dt();
  for (std::size_t i = 1; i <= n; ++i) {
    const double t = grid_.node(i);
    double* out = values_.data() + i * (i - 1) / 2;
    for (std::size_t j = 0; j < i; ++j) out[j] = cell_integral(kernel_, t, j, grid_) / dt;
  }
}

double KernelMatrix::product_sum(std::size_t i, std::size_t k, std::size_t m) const {
  m = std::min({m, i, k});
  const auto ri = row(i);
  const auto rk = row(k);
  double acc = 0.0;
  for (std::size_t j = 0; j < m; ++j) acc += ri[j] * rk[j];
  return acc * grid_.dt();
}

double covariance(const KernelMatrix& km, std::size_t i, std::size_t k) {
  const std::size_t m = std::min(i, k);
  if (km.kernel().is_brownian()) return km.grid().node(m);
  return km.product_sum(i, k, m);
}

double covariance(const VolterraKernel& kernel, double t, double s, const TimeGrid& grid) {
  const std::size_t i = grid.node_index(t);
  const std::size_t k = grid.node_index(s);
  if (kernel.is_brownian()) return grid.node(std::min(i, k));
  return averaged_product_sum(kernel, grid, i, k, std::min(i, k));
}

double cross_integral(const KernelMatrix& km, std::size_t i, std::size_t k, std::size_t iu) {
  const std::size_t m = std::min({i, k, iu});
  if (km.kernel().is_brownian()) return km.grid().node(m);
  return km.product_sum(i, k, m);
}

double cross_integral(const VolterraKernel& kernel, double t, double s, double u, const TimeGrid& grid) {
  const std::size_t i = grid.node_index(t);
  const std::size_t k = grid.node_index(s);
  const std::size_t m = std::min({i, k, grid.node_index(u)});
  if (kernel.is_brownian()) return grid.node(m);
  return averaged_product_sum(kernel, grid, i, k, m);
}

}  // namespace mgvp
