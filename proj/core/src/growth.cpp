#include "hjb/growth.hpp"

#include "hjb/errors.hpp"

#include <algorithm>
#include <cmath>

namespace hjb {

GrowthClassWitness::GrowthClassWitness(GrowthMode mode, double bound,
                                       std::vector<std::pair<double, double>> samples)
    : mode_(mode), bound_(bound), samples_(std::move(samples)) {}

double GrowthClassWitness::M(double eps) const {
  double m = 0.0;
  for (const auto& [au, w] : samples_) m = std::max(m, au - eps * w);
  return m;
}

bool GrowthClassWitness::verify(double eps, double tol) const {
  if (mode_ == GrowthMode::Bounded) {
    return std::all_of(samples_.begin(), samples_.end(),
                       [&](const auto& s) { return s.first <= bound_ * s.second + tol; });
  }
  const double m = M(eps);
  return std::all_of(samples_.begin(), samples_.end(),
                     [&](const auto& s) { return s.first <= m + eps * s.second + tol; });
}

GrowthClassWitness growth_witness(const std::vector<GridFunction>& u, double p, GrowthMode mode) {
  if (u.empty()) throw Error(ErrorCode::EmptyGrid, "no grid functions supplied");
  std::vector<std::pair<double, double>> samples;
  double c = 0.0;
  for (const auto& g : u) {
    if (g.values.empty()) throw Error(ErrorCode::EmptyGrid, "grid function has no nodes");
    for (int k = 0; k < static_cast<int>(g.values.size()); ++k) {
      const double w = 1.0 + std::pow(g.grid.point(k).norm(), p);
      const double au = std::abs(g.values[k]);
      samples.emplace_back(au, w);
      c = std::max(c, au / w);
    }
  }
  return GrowthClassWitness(mode, c, std::move(samples));
}

}  // namespace hjb
