#include "mgvp/grid.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mgvp {

namespace {
constexpr double kNodeTolerance = 1e-9;
}

TimeGrid::TimeGrid(double horizon, std::size_t cells) : horizon_(horizon), cells_(cells) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("grid horizon must be positive and finite");
  }
  if (cells == 0) throw std::invalid_argument("grid must have at least one cell");
}

double TimeGrid::node(std::size_t i) const {
  if (i > cells_) throw std::out_of_range("node index beyond horizon");
  if (i == cells_) return horizon_;
  return static_cast<double>(i) * horizon_ / static_cast<double>(cells_);
}

bool TimeGrid::is_node(double t) const {
  if (!std::isfinite(t)) return false;
  const double x = t / dt();
  const double r = std::round(x);
  return r >= 0.0 && r <= static_cast<double>(cells_) && std::abs(x - r) <= kNodeTolerance;
}

std::size_t TimeGrid::node_index(double t) const {
  if (!is_node(t)) {
    throw std::invalid_argument("time " + std::to_string(t) + " is not a grid node");
  }
  return static_cast<std::size_t>(std::round(t / dt()));
}

TimeGrid::Snap TimeGrid::snap(double t) const {
  if (std::isnan(t)) throw std::invalid_argument("cannot snap NaN to the grid");
  if (t <= 0.0) return {0, 0.0, -t};
  if (t >= horizon_) return {cells_, horizon_, t - horizon_};
  const double x = t / dt();
  auto lo = static_cast<std::size_t>(std::floor(x));
  if (lo >= cells_) lo = cells_ - 1;
  const double d_lo = t - node(lo);
  const double d_hi = node(lo + 1) - t;
  if (d_hi < d_lo) return {lo + 1, node(lo + 1), d_hi};
  return {lo, node(lo), d_lo};
}

}  // namespace mgvp
