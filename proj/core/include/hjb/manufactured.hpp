#pragma once

#include "hjb/problem.hpp"

#include <string_view>

namespace hjb {

enum class ManufacturedKind { GaussianDecay, PolynomialPGrowth, SeparatedSine };

/// Throws UnknownKind.
ManufacturedKind manufactured_kind_from_string(std::string_view name);
std::string_view to_string(ManufacturedKind kind);

struct ManufacturedParams {
  /// Wave vector for separated_sine; defaults to (1,...,1) when empty.
  Vec k;
  /// Decay rate for separated_sine; negative selects |k|^2.
  double lambda = -1.0;
  double amplitude = 1.0;
  /// Time shift of the gaussian_decay heat kernel.
  double t0 = 1.0;
  /// Exponent of polynomial_p_growth; negative selects spec.p.
  double p = -1.0;
};

struct ManufacturedSolution {
  std::function<Jet(const Vec&, double)> jet;
  SpaceTimeFn u;
  /// Residual of the problem's equation at u; the problem with f replaced by
  /// f - forcing (ProblemSpec::with_forcing) has u as exact solution.
  SpaceTimeFn forcing;
};

/// separated_sine:      A e^{-lambda t} sin(<k,x>)
/// gaussian_decay:      A (t0/(t+t0))^{N/2} exp(-|x|^2 / (4(t+t0)))
/// polynomial_p_growth: A (1+|x|^2)^{p/2} (1+t)
/// The forcing uses the model residual for control-free problems and
/// u_t + H(Du,D^2u) + f for controlled ones.
ManufacturedSolution manufactured_solution(ManufacturedKind kind, const ManufacturedParams& params,
                                           const ProblemSpec& spec);

}  // namespace hjb
