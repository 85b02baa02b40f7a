#pragma once

#include "hjb/barriers.hpp"
#include "hjb/grid.hpp"
#include "hjb/hamiltonian.hpp"

#include <limits>
#include <string>
#include <vector>

namespace hjb {

enum class BoundaryKind {
  /// Values from a space-time function at the new time level.
  Dirichlet,
  /// Boundary nodes keep the values they had in the previous slice.
  Frozen,
  /// Cubic extrapolation u_0 = 3u_1 - 3u_2 + u_3 from the interior, for
  /// inflow boundaries of first-order problems. Not monotone.
  Extrapolate,
};

struct BoundaryCondition {
  BoundaryKind kind = BoundaryKind::Frozen;
  SpaceTimeFn value;

  static BoundaryCondition dirichlet(SpaceTimeFn fn) { return {BoundaryKind::Dirichlet, std::move(fn)}; }
  static BoundaryCondition frozen() { return {BoundaryKind::Frozen, {}}; }
  static BoundaryCondition extrapolate() { return {BoundaryKind::Extrapolate, {}}; }
};

enum class BarrierSide { Upper, Lower };

/// Dirichlet data from the supersolution (upper evolutions) or the
/// subsolution (lower evolutions).
BoundaryCondition barrier_boundary(const BarrierFamily& sub, const BarrierFamily& super, BarrierSide side);

struct SchemeOptions {
  /// Upper bound on dt as a fraction of the horizon.
  double dt_cap_fraction = 0.01;
  /// Control search inside controlled updates.
  HamiltonianOptions control{true, 33, 30, 1e-6};
};

/// Largest monotone step for the explicit update, computed node by node:
///   dt = 1 / max_k [ sum_j (2 a_jj/h_j^2 + |b_j|/h_j + slope_j/h_j) + C_hat ],
/// slope_j the largest z_j-slope of f over the Godunov candidate range at
/// node k, measured by outward secants. Capped at dt_cap_fraction * T.
/// Throws DegenerateGrid.
double cfl_dt(const ProblemSpec& spec, const Grid& grid, const GridFunction& current, const SchemeOptions& opts = {});

/// One explicit step. Interior nodes:
///   u + dt [ sum_j a_jj D2_j u - sum_j b_j D^up_j u - F ]
/// with the drift differenced upwind and F the Godunov value of
/// f(x,t,u,s g): per axis g_j ranges over {max(D-_j,0), min(D+_j,0)} and F
/// is the max over these combinations. This is monotone when f(x,t,u,.) is
/// smallest at z = 0 and nondecreasing in each |z_j|, s diagonal and
/// sigma sigma^T diagonal. Controlled problems replace the linear part by the
/// discrete inf over controls. Throws CflViolation when dt exceeds cfl_dt and
/// NonFiniteValue when the new slice is not finite.
GridFunction step_explicit(const ProblemSpec& spec, const Grid& grid, const GridFunction& u_n, double dt,
                           const BoundaryCondition& boundary, const SchemeOptions& opts = {});

enum class SolveStatus { Completed, BlewUp, CflViolation };
std::string_view to_string(SolveStatus s);

struct SolveOptions {
  /// Zero selects 1e6 (1 + max|initial|).
  double blowup_threshold = 0.0;
  long max_steps = 20'000'000;
  /// Steps below this size end the run with CflViolation.
  double min_dt = 1e-14;
  /// Keep every n-th slice (0 keeps only the first and the last).
  int snapshot_every = 0;
  SchemeOptions scheme;
};

struct SolveOutcome {
  GridFunction final;
  SolveStatus status = SolveStatus::Completed;
  double tau_num = std::numeric_limits<double>::quiet_NaN();
  long steps = 0;
  std::vector<double> times;
  std::vector<double> max_norm;
  std::vector<GridFunction> snapshots;

  [[nodiscard]] std::string to_json() const;
};

/// Advances from init.time to the horizon with dt = min(cfl_dt, remaining).
SolveOutcome solve(const ProblemSpec& spec, const Grid& grid, const GridFunction& init,
                   const BoundaryCondition& boundary, const SolveOptions& opts = {});

struct ComparisonReport {
  /// max over steps and nodes of (u_n - v_n)_+.
  double max_violation = 0.0;
  long steps = 0;
  double final_time = 0.0;
};

/// Evolves u0 <= v0 with a shared dt sequence min(cfl(u), cfl(v)), stopping
/// after `steps` steps or at the horizon. Throws InvalidArgument unless
/// u0 <= v0 nodewise.
ComparisonReport discrete_comparison_trial(const ProblemSpec& spec, const Grid& grid, const GridFunction& u0,
                                           const GridFunction& v0, long steps,
                                           const BoundaryCondition& bu = BoundaryCondition::frozen(),
                                           const BoundaryCondition& bv = BoundaryCondition::frozen(),
                                           const SchemeOptions& opts = {});

}  // namespace hjb
