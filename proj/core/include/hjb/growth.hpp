#pragma once

#include "hjb/grid.hpp"

#include <vector>

namespace hjb {

enum class GrowthMode { Strict, Bounded };

/// Evidence that sampled values lie in a polynomial growth class with the
/// weight 1 + |x|^p. Bounded mode carries the constant C with
/// |u| <= C(1+|x|^p); strict mode evaluates M(eps) = max(|u| - eps(1+|x|^p))_+.
class GrowthClassWitness {
 public:
  GrowthClassWitness(GrowthMode mode, double bound, std::vector<std::pair<double, double>> samples);

  [[nodiscard]] GrowthMode mode() const { return mode_; }
  /// Smallest C with |u| <= C(1+|x|^p) over the samples.
  [[nodiscard]] double bound() const { return bound_; }
  /// Exhaustive max over the stored samples; nonincreasing in eps.
  [[nodiscard]] double M(double eps) const;
  /// Checks the witness inequality at every stored sample.
  [[nodiscard]] bool verify(double eps, double tol = 1e-12) const;

 private:
  GrowthMode mode_;
  double bound_;
  // (|u|, 1 + |x|^p) per grid node and time slice.
  std::vector<std::pair<double, double>> samples_;
};

/// Throws EmptyGrid when the sequence or any slice is empty.
GrowthClassWitness growth_witness(const std::vector<GridFunction>& u, double p, GrowthMode mode);

}  // namespace hjb
