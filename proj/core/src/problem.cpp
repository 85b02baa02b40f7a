#include "hjb/problem.hpp"

#include "hjb/errors.hpp"

#include <cmath>
#include <utility>

namespace hjb {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

void AssumptionConstants::validate() const {
  require(std::isfinite(nu) && nu > 0.0, "nu must be positive and finite");
  require(finite_nonneg(C_b), "C_b must be finite and nonnegative");
  require(finite_nonneg(C_sigma), "C_sigma must be finite and nonnegative");
  require(finite_nonneg(C_ell), "C_ell must be finite and nonnegative");
  require(finite_nonneg(C_f), "C_f must be finite and nonnegative");
  require(finite_nonneg(C_s), "C_s must be finite and nonnegative");
  require(finite_nonneg(C_hat), "C_hat must be finite and nonnegative");
  require(finite_nonneg(grad_lower), "grad_lower must be finite and nonnegative");
}

void ProblemSpec::validate() const {
  require(space_dim >= 1 && space_dim <= kMaxDim, "space_dim out of range");
  require(control_dim >= 0 && control_dim <= kMaxDim, "control_dim out of range");
  require(std::isfinite(p) && p > 1.0, "p must exceed 1");
  require(std::isfinite(horizon) && horizon > 0.0, "horizon must be positive");
  require(static_cast<bool>(drift) && static_cast<bool>(sigma), "drift and sigma are required");
  require(static_cast<bool>(grad_weight) && static_cast<bool>(f), "grad_weight and f are required");
  require(static_cast<bool>(initial), "initial datum is required");
  require(!controlled() || static_cast<bool>(running_cost), "controlled problems need a running cost");
  const double pc = p_conj();
  require(std::abs(1.0 / p + 1.0 / pc - 1.0) < 1e-14, "conjugate exponent mismatch");
  constants.validate();
}

Vec ProblemSpec::drift_at(const Vec& x, double t) const { return drift(x, t, Vec()); }

Mat ProblemSpec::diffusion_at(const Vec& x, double t) const { return sigma(x, t, Vec()); }

ProblemSpec ProblemSpec::with_forcing(SpaceTimeFn forcing) const {
  ProblemSpec out = *this;
  NonlinearityFn base = f;
  out.f = [base, forcing = std::move(forcing)](const Vec& x, double t, double u, const Vec& z) {
    return base(x, t, u, z) - forcing(x, t);
  };
  return out;
}

Mat diffusion_matrix(const ProblemSpec& spec, const Vec& x, double t) {
  const Mat s = spec.diffusion_at(x, t);
  return s * s.transpose();
}

double model_residual(const ProblemSpec& spec, const Jet& jet, const Vec& x, double t) {
  const Mat a = diffusion_matrix(spec, x, t);
  const Vec b = spec.drift_at(x, t);
  const Vec z = spec.grad_weight(x, t) * jet.grad;
  return jet.dt - (a * jet.hess).trace() + b.dot(jet.grad) + spec.f(x, t, jet.value, z);
}

double control_objective(const ProblemSpec& spec, const Vec& x, double t, const Vec& q, const Mat& X,
                         const Vec& alpha) {
  const Vec b = spec.drift(x, t, alpha);
  const Mat s = spec.sigma(x, t, alpha);
  return -b.dot(q) - spec.running_cost(x, t, alpha) - ((s * s.transpose()) * X).trace();
}

double controlled_residual(const ProblemSpec& spec, const Jet& jet, const Vec& x, double t, const Vec& alpha) {
  const Vec z = spec.grad_weight(x, t) * jet.grad;
  return jet.dt + control_objective(spec, x, t, jet.grad, jet.hess, alpha) + spec.f(x, t, jet.value, z);
}

}  // namespace hjb
