#include "hjb/grid.hpp"

#include "hjb/errors.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace hjb {

Grid Grid::uniform(int dim, double extent, int nodes, double horizon) {
  Grid g;
  g.dim = dim;
  g.extent = {extent, dim == 2 ? extent : 1.0};
  g.nodes = {nodes, dim == 2 ? nodes : 1};
  g.horizon = horizon;
  g.validate();
  return g;
}

void Grid::validate() const {
  if (dim != 1 && dim != 2) throw Error(ErrorCode::DegenerateGrid, "grid dimension must be 1 or 2");
  for (int a = 0; a < dim; ++a) {
    if (nodes[a] <= 0) throw Error(ErrorCode::EmptyGrid, "grid has no nodes");
    if (nodes[a] < 3) throw Error(ErrorCode::DegenerateGrid, "need at least 3 nodes per axis");
    if (!(extent[a] > 0.0) || !std::isfinite(extent[a])) throw Error(ErrorCode::DegenerateGrid, "bad extent");
  }
  if (!(horizon > 0.0)) throw Error(ErrorCode::DegenerateGrid, "horizon must be positive");
  if (dt < 0.0) throw Error(ErrorCode::DegenerateGrid, "negative dt");
}

Vec Grid::point(int k) const {
  const auto ij = unflatten(k);
  Vec x(dim);
  x[0] = coord(0, ij[0]);
  if (dim == 2) x[1] = coord(1, ij[1]);
  return x;
}

bool Grid::is_boundary(int k) const {
  const auto ij = unflatten(k);
  if (ij[0] == 0 || ij[0] == nodes[0] - 1) return true;
  return dim == 2 && (ij[1] == 0 || ij[1] == nodes[1] - 1);
}

GridFunction GridFunction::sample(const Grid& g, const SpaceTimeFn& fn, double t) {
  GridFunction out(g, t);
  for (int k = 0; k < g.size(); ++k) out.values[k] = fn(g.point(k), t);
  return out;
}

GridFunction GridFunction::sample(const Grid& g, const ScalarFieldFn& fn) {
  GridFunction out(g, 0.0);
  for (int k = 0; k < g.size(); ++k) out.values[k] = fn(g.point(k));
  return out;
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

bool GridFunction::all_finite() const {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

void write_csv(std::ostream& os, const std::vector<GridFunction>& snapshots) {
  if (snapshots.empty()) return;
  const int dim = snapshots.front().grid.dim;
  os << (dim == 1 ? "x1,t,value\n" : "x1,x2,t,value\n");
  os << std::setprecision(17);
  for (const auto& s : snapshots) {
    for (int k = 0; k < s.grid.size(); ++k) {
      const Vec x = s.grid.point(k);
      os << x[0] << ',';
      if (dim == 2) os << x[1] << ',';
      os << s.time << ',' << s.values[k] << '\n';
    }
  }
}

}  // namespace hjb
