#pragma once

#include "hjb/problem.hpp"
#include "hjb/transforms.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace hjb {

enum class BarrierForm { PowerBarrier, EpsFamily, PhiRComposite };
enum class BarrierSign { Sub, Super };

/// Closed-form barrier with exact first time derivative and two space
/// derivatives. Weight w = (1+|x|^2)^{1/2}.
///   PowerBarrier:  +/- K e^{rho t} w^p
///   EpsFamily:     -e^{rho t} (M_eps + eps w^p)
///   PhiRComposite: phi_R(C_bar w^p, C_time t)
struct BarrierFamily {
  BarrierForm form = BarrierForm::PowerBarrier;
  BarrierSign sign = BarrierSign::Super;
  int dim = 1;
  double p = 2.0;
  double rho = 0.0;
  double tau_valid = 0.0;
  double K = 0.0;
  double eps = 0.0;
  double M_eps = 0.0;
  double C_bar = 0.0;
  double C_time = 0.0;
  double R = 0.0;
  double L = 0.0;
  double mu = 0.0;
  int quad_points = 128;

  [[nodiscard]] Jet evaluate(const Vec& x, double t) const;
  [[nodiscard]] double value(const Vec& x, double t) const { return evaluate(x, t).value; }
};

struct SamplePoint {
  Vec x;
  double t = 0.0;
};

struct ResidualReport {
  std::vector<SamplePoint> points;
  /// Raw left-hand side at each point (sup over controls when controlled).
  std::vector<double> residual;
  /// Signed distance to violation: >= 0 when the inequality holds.
  std::vector<double> margin;
  /// Maximising control per point (empty vectors for control-free problems).
  std::vector<Vec> witness;
  double min_residual = 0.0;
  double max_residual = 0.0;
  double worst_margin = 0.0;
  int worst_index = -1;
  bool passed = true;
  /// Name of the error code describing the failure, empty when passed.
  std::string failure;

  [[nodiscard]] std::string to_json(int top = 10) const;
};

/// Points on rays along fixed directions with radii 0 and log-spaced up to
/// max_radius; used to take sampled sups over all of R^N.
std::vector<Vec> envelope_probe_points(int dim, double max_radius = 1e4, int radii = 400);

/// Sampled bounded-class constant of psi: max |psi| / w^p.
double initial_growth_constant(const ProblemSpec& spec, double max_radius = 1e4);

/// Returns (sub, super) with K = C_psi + 1. The super barrier is valid on
/// [0,T] when grad_lower = 0 and otherwise on [0, 1/((p'-1)rho)]; the sub
/// barrier on [0, min(T, 1/((p'-1)rho))]. Throws MissingConstants, and
/// ParameterInfeasible for controlled problems whose diffusion growth in the
/// control cannot be absorbed by the coercive cost.
std::pair<BarrierFamily, BarrierFamily> build_power_barriers(const ProblemSpec& spec);
BarrierFamily build_power_super(const ProblemSpec& spec);
BarrierFamily build_power_sub(const ProblemSpec& spec);

/// u_eps = -e^{rho t}(M_eps + eps w^p) with M_eps the sampled
/// max(|psi|,|chi|,|gamma|) - eps w^p, clamped at 0; tau = (p-1)/rho.
/// Throws MissingEnvelopes, ParameterInfeasible.
BarrierFamily build_eps_subsolution(const ProblemSpec& spec, double eps);

/// Phi(x,t) = phi_R(h(x), C t) with
///   C = max{2p m_p C_sigma^2 + sqrt2 p C_b, 2p^2 C_sigma^2} + 1, m_p = max(1,p-1)
///   L = max(L_fix, 8C_f/C_bar + 4C_f p^{p'} C_s^{p'} C_bar^{p'-1} e^{p'}
///           (e^E/(1-mu) + 1)^{p'} + 1) + 1,  E = max(T, C/L_fix)
/// and tau_valid = 1/L. Throws ParameterInfeasible when L is not finite.
BarrierFamily build_strict_supersolution(const ChangeOfFunctions& cf, const ProblemSpec& spec, double R, double mu,
                                         int quad_points = 128);

/// Linearised operator
///   w_t - Tr(sigma sigma^T D^2w) - C_b(1+|x|)|Dw| + (L/4)(1-mu)h
///   - (1-mu) e^{-Lt} f(x,t,0, e^{Lt} s (Dw/(mu-1) - Dh))
/// at w = Phi. Passes when the minimum is > 0. Throws DerivativeUnavailable
/// unless Phi is a PhiRComposite barrier.
ResidualReport check_linearized_operator(const BarrierFamily& phi, const ChangeOfFunctions& cf,
                                         const ProblemSpec& spec, double mu, const std::vector<SamplePoint>& samples);

enum class ResidualRole { Sub, Super };

/// Sub role: the residual is <= eta for every control in the truncated ball
/// (sup found by grid search). Super role: some control brings the residual
/// to >= -eta; the best one is recorded as witness. For control-free
/// problems both reduce to a sign check. Failures are recorded with
/// failure = "NoWitnessFound" (super) or "InvalidArgument" (sub), not thrown.
ResidualReport viscosity_residual_check(const std::function<Jet(const Vec&, double)>& candidate,
                                        const ProblemSpec& spec, ResidualRole role, double eta,
                                        const std::vector<SamplePoint>& samples, int control_points = 64);

/// Uniform samples in the ball of the given radius times [t_lo, t_hi].
std::vector<SamplePoint> sample_points(int dim, double radius, double t_lo, double t_hi, int count,
                                       std::uint64_t seed);

}  // namespace hjb
