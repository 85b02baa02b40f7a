#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <optional>
#include <string>

namespace hjb {

/// Small fixed-capacity vectors and matrices. The state dimension is at most
/// kMaxDim, so these never touch the heap inside hot loops.
inline constexpr int kMaxDim = 8;
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

using DriftFn = std::function<Vec(const Vec& x, double t, const Vec& alpha)>;
using DiffusionFn = std::function<Mat(const Vec& x, double t, const Vec& alpha)>;
using GradientWeightFn = std::function<Mat(const Vec& x, double t)>;
using RunningCostFn = std::function<double(const Vec& x, double t, const Vec& alpha)>;
using NonlinearityFn = std::function<double(const Vec& x, double t, double u, const Vec& z)>;
using ScalarFieldFn = std::function<double(const Vec& x)>;
using SpaceTimeFn = std::function<double(const Vec& x, double t)>;

/// Growth and Lipschitz constants of the drift, diffusion, running cost and
/// nonlinearity. They are inputs; the library only verifies them (see
/// validate_assumptions).
struct AssumptionConstants {
  double C_b = 0.0;
  double C_sigma = 0.0;
  double C_ell = 0.0;
  double nu = 1.0;
  double C_f = 0.0;
  double C_s = 0.0;
  double C_hat = 0.0;
  /// Coefficient c >= 0 in the lower bound f >= -C_f(1+|x|^p+|u|) - c|z|^{p'}.
  /// Zero when the gradient part of f is nonnegative (e.g. |z|^{p'}).
  double grad_lower = 0.0;
  /// Envelopes of the strict-class growth hypotheses: ell >= nu|a|^p - chi(x)
  /// and |f| <= C_f(1 + gamma(x) + |u| + |z|^{p'}).
  ScalarFieldFn chi;
  ScalarFieldFn gamma;
  /// False when the constants were never supplied for this problem.
  bool specified = true;

  /// Throws InvalidArgument unless nu > 0 and every constant is finite and >= 0.
  void validate() const;
  [[nodiscard]] bool has_envelopes() const { return static_cast<bool>(chi) && static_cast<bool>(gamma); }
};

/// Registration of a control problem whose Hamiltonian has a closed form:
///   b     = b0(x,t) + drift_gain * alpha
///   ell   = cost_weight * |alpha|^p + ell0(x,t)
///   s s^T = a0(x,t) + diffusion_gain * |alpha|^2 * I     (s = sigma)
struct PowerForm {
  double drift_gain = 1.0;
  double cost_weight = 1.0;
  double diffusion_gain = 0.0;
  std::function<Vec(const Vec&, double)> b0;
  SpaceTimeFn ell0;
  std::function<Mat(const Vec&, double)> a0;
};

/// One HJB instance. With control_dim == 0 the problem is the control-free
/// model  u_t - Tr(sigma sigma^T D^2u) + <b,Du> + f(x,t,u,sDu) = 0;
/// otherwise it is the control form  u_t + H(x,t,Du,D^2u) + f(x,t,u,sDu) = 0
/// with H = sup_alpha { -<b,q> - ell - Tr(sigma sigma^T X) }.
struct ProblemSpec {
  std::string name;
  int space_dim = 1;
  int control_dim = 0;
  double p = 2.0;
  double horizon = 1.0;

  DriftFn drift;
  DiffusionFn sigma;
  GradientWeightFn grad_weight;
  RunningCostFn running_cost;
  NonlinearityFn f;
  ScalarFieldFn initial;
  AssumptionConstants constants;
  std::optional<PowerForm> power_form;

  [[nodiscard]] double p_conj() const { return p / (p - 1.0); }
  [[nodiscard]] bool controlled() const { return control_dim > 0; }

  /// Checks p > 1, horizon > 0, dimensions, presence of callables and the
  /// constant set. Throws InvalidArgument.
  void validate() const;

  /// Drift and diffusion for control-free problems (alpha is empty).
  [[nodiscard]] Vec drift_at(const Vec& x, double t) const;
  [[nodiscard]] Mat diffusion_at(const Vec& x, double t) const;

  /// Copy of this problem with f replaced by f - forcing(x,t).
  [[nodiscard]] ProblemSpec with_forcing(SpaceTimeFn forcing) const;
};

/// Value and derivatives of a smooth candidate at one space-time point.
struct Jet {
  double value = 0.0;
  double dt = 0.0;
  Vec grad;
  Mat hess;
};

/// sigma sigma^T at (x,t) for control-free problems.
Mat diffusion_matrix(const ProblemSpec& spec, const Vec& x, double t);

/// Left-hand side of the control-free model equation at a smooth jet:
///   u_t - Tr(sigma sigma^T D^2u) + <b,Du> + f(x,t,u,s Du).
double model_residual(const ProblemSpec& spec, const Jet& jet, const Vec& x, double t);

/// Control-form integrand for one control value (without the f term):
///   -<b(x,t,a),q> - ell(x,t,a) - Tr(sigma sigma^T(x,t,a) X).
double control_objective(const ProblemSpec& spec, const Vec& x, double t, const Vec& q, const Mat& X,
                         const Vec& alpha);

/// Left-hand side of the sub/supersolution inequality for a fixed control:
///   u_t - <b,Du> - ell - Tr(sigma sigma^T D^2u) + f(x,t,u,sDu).
double controlled_residual(const ProblemSpec& spec, const Jet& jet, const Vec& x, double t, const Vec& alpha);

/// (1 + |x|^2)^{1/2}, the smooth weight used by barriers and the change of functions.
inline double japanese_bracket(const Vec& x) { return std::sqrt(1.0 + x.squaredNorm()); }

}  // namespace hjb
