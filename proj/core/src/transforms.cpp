#include "hjb/transforms.hpp"

#include "hjb/errors.hpp"

#include <algorithm>
#include <cmath>

namespace hjb {

double ChangeOfFunctions::h(const Vec& x) const { return C_bar * std::pow(1.0 + x.squaredNorm(), 0.5 * p); }

Vec ChangeOfFunctions::grad_h(const Vec& x) const {
  return C_bar * p * std::pow(1.0 + x.squaredNorm(), 0.5 * p - 1.0) * x;
}

Mat ChangeOfFunctions::hess_h(const Vec& x) const {
  const double w2 = 1.0 + x.squaredNorm();
  const int n = static_cast<int>(x.size());
  return C_bar * p * std::pow(w2, 0.5 * p - 1.0) *
         (Mat::Identity(n, n) + (p - 2.0) / w2 * (x * x.transpose()));
}

double ChangeOfFunctions::choose_C_bar(double bound) {
  if (!(bound >= 0.0) || !std::isfinite(bound)) throw Error(ErrorCode::InvalidArgument, "bound must be finite");
  return 2.0 * bound + 1.0;
}

double ChangeOfFunctions::choose_L(const ProblemSpec& spec) {
  const auto& c = spec.constants;
  const double p = spec.p;
  const double n = spec.space_dim;
  return std::max(c.C_hat, 4.0 * p * (p - 1.0) * n * c.C_sigma * c.C_sigma + 4.0 * p * c.C_b + 10.0 * c.C_hat) + 1.0;
}

ChangeOfFunctions ChangeOfFunctions::for_problem(const ProblemSpec& spec, double bound) {
  return {choose_L(spec), choose_C_bar(bound), spec.p};
}

double forward_transform(const ChangeOfFunctions& cf, double u, const Vec& x, double t) {
  return std::exp(-cf.L * t) * u + cf.h(x);
}

double inverse_transform(const ChangeOfFunctions& cf, double u_tilde, const Vec& x, double t) {
  return std::exp(cf.L * t) * (u_tilde - cf.h(x));
}

Jet transform_jet(const ChangeOfFunctions& cf, const Jet& u, const Vec& x, double t) {
  const double e = std::exp(-cf.L * t);
  Jet out;
  out.value = e * u.value + cf.h(x);
  out.dt = e * (u.dt - cf.L * u.value);
  out.grad = e * u.grad + cf.grad_h(x);
  out.hess = e * u.hess + cf.hess_h(x);
  return out;
}

double transformed_nonlinearity(const ChangeOfFunctions& cf, const ProblemSpec& spec, const Vec& x, double t,
                                double v, const Vec& z) {
  const Mat a = diffusion_matrix(spec, x, t);
  const Vec b = spec.drift_at(x, t);
  const double g = (a * cf.hess_h(x)).trace() - b.dot(cf.grad_h(x));
  const double e = std::exp(cf.L * t);
  return cf.L * v + g + spec.f(x, t, e * v, e * z) / e;
}

double transformed_residual(const ChangeOfFunctions& cf, const ProblemSpec& spec, const Jet& ut, const Vec& x,
                            double t) {
  const Mat a = diffusion_matrix(spec, x, t);
  const Vec b = spec.drift_at(x, t);
  const Vec z = spec.grad_weight(x, t) * (ut.grad - cf.grad_h(x));
  return ut.dt - (a * ut.hess).trace() + b.dot(ut.grad) +
         transformed_nonlinearity(cf, spec, x, t, ut.value - cf.h(x), z);
}

std::pair<double, double> convex_combination_bound(const std::function<double(const Vec&)>& psi, double mu,
                                                   const Vec& xi, const Vec& zeta) {
  if (!(mu > 0.0 && mu < 1.0)) throw Error(ErrorCode::InvalidArgument, "mu must lie in (0,1)");
  const double lhs = -mu * psi(xi) + psi(zeta);
  const double rhs = (1.0 - mu) * psi(Vec((mu * xi - zeta) / (mu - 1.0)));
  return {lhs, rhs};
}

}  // namespace hjb
