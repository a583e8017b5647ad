#pragma once

#include <cstddef>

namespace mgvp {

/// Uniform partition of [0, T] into n cells; node i sits at i*T/n.
class TimeGrid {
 public:
  TimeGrid(double horizon, std::size_t cells);

  double horizon() const { return horizon_; }
  std::size_t cells() const { return cells_; }
  std::size_t nodes() const { return cells_ + 1; }
  double dt() const { return horizon_ / static_cast<double>(cells_); }

  /// Node i is computed as i*T/n, so the last node equals T exactly.
  double node(std::size_t i) const;

  /// Index of the node equal to t, or throws std::invalid_argument when t is
  /// off the grid by more than a relative 1e-9 of a cell.
  std::size_t node_index(double t) const;
  bool is_node(double t) const;

  struct Snap {
    std::size_t index;
    double time;
    double distance;  // |requested - snapped|
  };
  /// Nearest node, ties toward the smaller node, clamped to [0, T].
  Snap snap(double t) const;

  bool operator==(const TimeGrid& other) const = default;

 private:
  double horizon_;
  std::size_t cells_;
};

}  // namespace mgvp
