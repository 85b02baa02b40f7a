#pragma once

#include "hjb/problem.hpp"

#include <array>
#include <iosfwd>
#include <vector>

namespace hjb {

/// Rectangular grid on [-M_1,M_1] x [-M_2,M_2] (one or two axes).
struct Grid {
  int dim = 1;
  std::array<double, 2> extent{1.0, 1.0};
  std::array<int, 2> nodes{3, 1};
  double horizon = 1.0;
  /// Nominal step; solve() recomputes the admissible step every iteration.
  double dt = 0.0;

  static Grid uniform(int dim, double extent, int nodes, double horizon);

  /// Throws EmptyGrid for zero nodes, DegenerateGrid for < 3 nodes per axis,
  /// non-positive extent or horizon.
  void validate() const;

  [[nodiscard]] int size() const { return dim == 1 ? nodes[0] : nodes[0] * nodes[1]; }
  [[nodiscard]] double h(int axis) const { return 2.0 * extent[axis] / (nodes[axis] - 1); }
  [[nodiscard]] double coord(int axis, int i) const { return -extent[axis] + h(axis) * i; }
  [[nodiscard]] int index(int i, int j = 0) const { return i + nodes[0] * j; }
  /// Axis indices of a flat node index.
  [[nodiscard]] std::array<int, 2> unflatten(int k) const { return {k % nodes[0], dim == 1 ? 0 : k / nodes[0]}; }
  [[nodiscard]] Vec point(int k) const;
  [[nodiscard]] bool is_boundary(int k) const;
};

struct GridFunction {
  Grid grid;
  std::vector<double> values;
  double time = 0.0;

  GridFunction() = default;
  GridFunction(const Grid& g, double t) : grid(g), values(static_cast<std::size_t>(g.size()), 0.0), time(t) {}

  static GridFunction sample(const Grid& g, const SpaceTimeFn& fn, double t);
  static GridFunction sample(const Grid& g, const ScalarFieldFn& fn);

  /// Max |value| with a fixed left-to-right reduction order.
  [[nodiscard]] double max_abs() const;
  [[nodiscard]] bool all_finite() const;
};

/// CSV with header x1[,x2],t,value; one row per node per snapshot.
void write_csv(std::ostream& os, const std::vector<GridFunction>& snapshots);

}  // namespace hjb
