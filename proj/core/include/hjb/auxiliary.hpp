#pragma once

#include <vector>

namespace hjb {

/// phi_R and its derivatives at one (r, t).
struct AuxiliaryValue {
  double value = 0.0;
  double dr = 0.0;
  double drr = 0.0;
  double dt = 0.0;
};

/// Solution of phi_t - r^2 phi_rr - r phi_r = 0, phi(r,0) = max(0, r - R).
/// With y = ln r the equation is U_t = U_yy, so phi is the expectation of the
/// ramp at y + sqrt(2t) xi, xi standard normal. The expectation and the
/// first-derivative moment are computed by composite Gauss-Legendre over
/// xi in [max(xi_k, -12), 12 + sqrt(2t)], xi_k the kink; phi_rr and phi_t
/// follow from the Gaussian density at the kink.
/// Throws NonPositiveR for R <= 0, InvalidArgument for r < 0, t < 0 or
/// quad_points < 64.
AuxiliaryValue auxiliary_phi(double R, double r, double t, int quad_points = 128);

/// Nodal values of a finite-difference solution.
struct AuxiliaryProfile {
  std::vector<double> r;
  std::vector<double> value;

  /// Linear interpolation; throws InvalidArgument outside [0, r.back()].
  [[nodiscard]] double at(double x) const;
};

/// Crank-Nicolson solve of the same problem directly in r, starting with
/// four implicit Euler quarter steps. The nodes are r = 0 followed by a
/// geometric grid on [R e^{-W}, R e^{W}], W = 8 sqrt(2t) + 2, with phi = 0
/// at the inner end and phi_rr = 0 at the outer end.
AuxiliaryProfile auxiliary_fd_profile(double R, double t, int nodes = 16001, int time_steps = 2000);

double auxiliary_fd_value(double R, double r, double t, int nodes = 16001, int time_steps = 2000);

}  // namespace hjb
