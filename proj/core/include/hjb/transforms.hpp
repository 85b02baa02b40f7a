#pragma once

#include "hjb/problem.hpp"

#include <functional>
#include <utility>

namespace hjb {

/// u~ = e^{-Lt} u + h(x) with h(x) = C_bar (1+|x|^2)^{p/2}.
struct ChangeOfFunctions {
  double L = 1.0;
  double C_bar = 1.0;
  double p = 2.0;

  [[nodiscard]] double h(const Vec& x) const;
  [[nodiscard]] Vec grad_h(const Vec& x) const;
  [[nodiscard]] Mat hess_h(const Vec& x) const;

  /// C_bar = 2 * bound + 1, where bound dominates |u|, |v|, |psi| / (1+|x|^p).
  static double choose_C_bar(double bound);
  /// L = max(C_hat, 4p(p-1) N C_sigma^2 + 4p C_b + 10 C_hat) + 1.
  static double choose_L(const ProblemSpec& spec);
  static ChangeOfFunctions for_problem(const ProblemSpec& spec, double bound);
};

double forward_transform(const ChangeOfFunctions& cf, double u, const Vec& x, double t);
double inverse_transform(const ChangeOfFunctions& cf, double u_tilde, const Vec& x, double t);

/// Jet of u~ from the jet of u.
Jet transform_jet(const ChangeOfFunctions& cf, const Jet& u, const Vec& x, double t);

/// f~(x,t,v,z) = L v + g~(x,t) + e^{-Lt} f(x,t,e^{Lt}v,e^{Lt}z),
/// g~ = Tr(sigma sigma^T D^2h) - <b,Dh>.
double transformed_nonlinearity(const ChangeOfFunctions& cf, const ProblemSpec& spec, const Vec& x, double t,
                                double v, const Vec& z);

/// u~_t - Tr(sigma sigma^T D^2u~) + <b,Du~> + f~(x,t,u~-h,s(Du~-Dh)).
/// Equals e^{-Lt} times the model residual of the untransformed u.
double transformed_residual(const ChangeOfFunctions& cf, const ProblemSpec& spec, const Jet& u_tilde, const Vec& x,
                            double t);

/// Both sides of -mu Psi(xi) + Psi(zeta) <= (1-mu) Psi((mu xi - zeta)/(mu-1)).
std::pair<double, double> convex_combination_bound(const std::function<double(const Vec&)>& psi, double mu,
                                                   const Vec& xi, const Vec& zeta);

}  // namespace hjb
