#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace hjb {

/// -phi' + |phi|^{p'}/p' = rho on (tau, T], phi(T) = -1.
struct RiccatiProblem {
  double p = 2.0;
  double rho = 0.0;
  double T = 1.0;

  [[nodiscard]] double p_conj() const { return p / (p - 1.0); }
  /// rho p' < 1 and T beyond the quadrature threshold.
  [[nodiscard]] bool blowup_predicted() const;
  void validate() const;
};

struct BlowUpReport {
  RiccatiProblem problem;
  double dt = 0.0;
  /// Trajectory in decreasing t, starting at t = T.
  std::vector<double> t;
  std::vector<double> phi;
  bool blew_up = false;
  double tau = std::numeric_limits<double>::quiet_NaN();
  double tau_lo = std::numeric_limits<double>::quiet_NaN();
  double tau_hi = std::numeric_limits<double>::quiet_NaN();
  /// integral_{-inf}^{-1} p'/(|y|^{p'} - rho p') dy; +inf when rho p' >= 1.
  double quadrature_threshold = std::numeric_limits<double>::infinity();
  double tau_quadrature = std::numeric_limits<double>::quiet_NaN();
  /// Largest |t_k - t(phi_k)| over sampled trajectory nodes, t(phi) from the
  /// integral identity. Zero when no blow-up.
  double trajectory_gap = 0.0;

  [[nodiscard]] double bracket_width() const { return tau_hi - tau_lo; }
  [[nodiscard]] std::string to_json() const;
  /// CSV with header t,phi.
  [[nodiscard]] std::string trajectory_csv() const;
};

/// Integrates backward from t = T with RK4 in s = T - t, shrinking the step
/// like |phi|^{1-p'} so each step changes phi by a bounded relative amount.
/// Blow-up is declared once |phi| > 1e8 and the analytic tail bound for the
/// remaining time is below 5e-7. Throws QuadratureDivergence when
/// assert_blowup is set and rho p' >= 1.
BlowUpReport riccati_solve(const RiccatiProblem& prob, double dt, bool assert_blowup = false);

/// The integral threshold; +inf when rho p' >= 1.
double quadrature_threshold(const RiccatiProblem& prob);

/// T - t(phi) = integral_{phi}^{-1} p'/(|y|^{p'} - rho p') dy for phi <= -1.
double quadrature_elapsed(const RiccatiProblem& prob, double phi);

/// Dense output of a Riccati trajectory by quintic Hermite interpolation.
class RiccatiTrajectory {
 public:
  RiccatiTrajectory(const RiccatiProblem& prob, double dt);

  [[nodiscard]] double phi(double t) const;
  [[nodiscard]] double dphi(double t) const;
  /// Earliest time covered; the blow-up bracket end when blow-up occurs.
  [[nodiscard]] double t_min() const { return t_min_; }
  [[nodiscard]] const BlowUpReport& report() const { return report_; }

 private:
  void locate(double t, std::size_t& k, double& theta, double& hs) const;

  RiccatiProblem prob_;
  BlowUpReport report_;
  std::vector<double> s_, d1_, d2_;
  double t_min_ = 0.0;
};

/// |-w_t + p^{-p'} |w_x|^{p'}/p' - rho |x|^p| at w = phi(t)|x|^p. With this
/// normalisation of the Hamiltonian the ansatz reduces exactly to the
/// Riccati equation. Throws BeyondBlowUp for t at or before the blow-up time.
double lp_value_residual(const RiccatiProblem& prob, double x, double t, double dt = 1e-3);
double lp_value_residual(const RiccatiTrajectory& traj, double x, double t);

}  // namespace hjb
