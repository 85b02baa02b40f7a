#include "hjb/scheme.hpp"

#include "hjb/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace hjb {

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Completed: return "completed";
    case SolveStatus::BlewUp: return "blew_up";
    case SolveStatus::CflViolation: return "cfl_violation";
  }
  return "unknown";
}

BoundaryCondition barrier_boundary(const BarrierFamily& sub, const BarrierFamily& super, BarrierSide side) {
  const BarrierFamily b = side == BarrierSide::Upper ? super : sub;
  return BoundaryCondition::dirichlet([b](const Vec& x, double t) { return b.value(x, t); });
}

namespace {

// Local data of the update at one interior node.
struct NodeData {
  Vec x;
  int dim = 1;
  double u = 0.0;
  std::array<double, 2> dm{}, dp{}, d2{}, h{};
};

NodeData gather(const Grid& g, const GridFunction& u, int k) {
  NodeData nd;
  nd.dim = g.dim;
  nd.x = g.point(k);
  nd.u = u.values[k];
  const std::array<int, 2> stride{1, g.nodes[0]};
  for (int j = 0; j < g.dim; ++j) {
    const double h = g.h(j);
    const double um = u.values[k - stride[j]], up = u.values[k + stride[j]];
    nd.h[j] = h;
    nd.dm[j] = (nd.u - um) / h;
    nd.dp[j] = (up - nd.u) / h;
    nd.d2[j] = (up - 2.0 * nd.u + um) / (h * h);
  }
  return nd;
}

struct Godunov {
  double value;
  Vec g;
};

// Max over per-axis candidates {max(D-,0), min(D+,0)} of f(x,t,u,S g).
Godunov godunov_f(const ProblemSpec& spec, const NodeData& nd, double t, const Mat& S) {
  const int n = nd.dim;
  Godunov best{-std::numeric_limits<double>::infinity(), Vec::Zero(n)};
  Vec g(n);
  for (int mask = 0; mask < (1 << n); ++mask) {
    for (int j = 0; j < n; ++j) g[j] = (mask >> j) & 1 ? std::min(nd.dp[j], 0.0) : std::max(nd.dm[j], 0.0);
    const double v = spec.f(nd.x, t, nd.u, S * g);
    if (v > best.value) best = {v, g};
  }
  return best;
}

// Largest |df/dg_j| over the candidate interval, by outward secants at its ends.
double godunov_slope(const ProblemSpec& spec, const NodeData& nd, double t, const Mat& S, const Vec& g_best, int j) {
  const double hi = std::max(nd.dm[j], 0.0), lo = std::min(nd.dp[j], 0.0);
  Vec g = g_best;
  auto f_at = [&](double gj) {
    g[j] = gj;
    return spec.f(nd.x, t, nd.u, S * g);
  };
  const double dh = 1e-6 * (1.0 + std::abs(hi)), dl = 1e-6 * (1.0 + std::abs(lo));
  const double s_hi = (f_at(hi + dh) - f_at(hi)) / dh;
  const double s_lo = (f_at(lo) - f_at(lo - dl)) / dl;
  return std::max(std::abs(s_hi), std::abs(s_lo));
}

void check_diagonal(const Mat& a) {
  if (a.rows() == 2 && std::abs(a(0, 1)) > 1e-14 * (1.0 + a.norm())) {
    throw Error(ErrorCode::InvalidArgument, "the scheme needs diagonal sigma sigma^T");
  }
}

double control_ball(const ProblemSpec& spec, const NodeData& nd) {
  Vec q(nd.dim);
  Mat X = Mat::Zero(nd.dim, nd.dim);
  for (int j = 0; j < nd.dim; ++j) {
    q[j] = std::max(std::abs(nd.dm[j]), std::abs(nd.dp[j]));
    X(j, j) = nd.d2[j];
  }
  return control_radius(spec, q, X);
}

// Inverse of the admissible step at one interior node.
double node_rate(const ProblemSpec& spec, const NodeData& nd, double t) {
  const Mat S = spec.grad_weight(nd.x, t);
  const Godunov gd = godunov_f(spec, nd, t, S);
  double rate = spec.constants.C_hat;
  if (!spec.controlled()) {
    const Mat a = diffusion_matrix(spec, nd.x, t);
    check_diagonal(a);
    const Vec b = spec.drift_at(nd.x, t);
    for (int j = 0; j < nd.dim; ++j) {
      rate += 2.0 * a(j, j) / (nd.h[j] * nd.h[j]) + std::abs(b[j]) / nd.h[j];
    }
  } else if (spec.power_form) {
    // Exact sup of a_jj and |b_j| over the control ball.
    const PowerForm& pf = *spec.power_form;
    const double A = control_ball(spec, nd);
    const Mat a0 = pf.a0 ? pf.a0(nd.x, t) : Mat::Zero(nd.dim, nd.dim);
    const Vec b0 = pf.b0 ? pf.b0(nd.x, t) : Vec::Zero(nd.dim);
    for (int j = 0; j < nd.dim; ++j) {
      const double a_max = a0(j, j) + std::abs(pf.diffusion_gain) * A * A;
      const double b_max = std::abs(b0[j]) + std::abs(pf.drift_gain) * A;
      rate += 2.0 * a_max / (nd.h[j] * nd.h[j]) + b_max / nd.h[j];
    }
  } else {
    const auto& c = spec.constants;
    const double A = control_ball(spec, nd);
    const double grow = 1.0 + nd.x.norm() + A;
    for (int j = 0; j < nd.dim; ++j) {
      rate += 2.0 * c.C_sigma * c.C_sigma * grow * grow / (nd.h[j] * nd.h[j]) + c.C_b * grow / nd.h[j];
    }
  }
  for (int j = 0; j < nd.dim; ++j) rate += godunov_slope(spec, nd, t, S, gd.g, j) / nd.h[j];
  return rate;
}

double node_update(const ProblemSpec& spec, const NodeData& nd, double t, double dt, const SchemeOptions& opts) {
  const Mat S = spec.grad_weight(nd.x, t);
  const double F = godunov_f(spec, nd, t, S).value;
  if (!spec.controlled()) {
    const Mat a = diffusion_matrix(spec, nd.x, t);
    const Vec b = spec.drift_at(nd.x, t);
    double lin = 0.0;
    for (int j = 0; j < nd.dim; ++j) {
      lin += a(j, j) * nd.d2[j] - b[j] * (b[j] > 0.0 ? nd.dm[j] : nd.dp[j]);
    }
    return nd.u + dt * (lin - F);
  }
  // u_t = -H - f with H discretised upwind for each control: b_j > 0 pairs
  // with the forward difference because the drift enters H as -<b,q>.
  auto objective = [&](const Vec& alpha) {
    const Vec b = spec.drift(nd.x, t, alpha);
    const Mat s = spec.sigma(nd.x, t, alpha);
    const Mat a = s * s.transpose();
    double v = -spec.running_cost(nd.x, t, alpha);
    for (int j = 0; j < nd.dim; ++j) v -= b[j] * (b[j] > 0.0 ? nd.dp[j] : nd.dm[j]) + a(j, j) * nd.d2[j];
    return v;
  };
  const auto best = maximize_over_controls(objective, spec.control_dim, control_ball(spec, nd), opts.control);
  if (!best.value.is_finite()) throw Error(ErrorCode::NonFiniteValue, "discrete Hamiltonian is +inf");
  return nd.u - dt * (best.value.value() + F);
}

void apply_boundary(const Grid& g, const GridFunction& prev, GridFunction& next, const BoundaryCondition& bc) {
  switch (bc.kind) {
    case BoundaryKind::Frozen:
      for (int k = 0; k < g.size(); ++k)
        if (g.is_boundary(k)) next.values[k] = prev.values[k];
      return;
    case BoundaryKind::Dirichlet:
      if (!bc.value) throw Error(ErrorCode::InvalidArgument, "Dirichlet boundary without values");
      for (int k = 0; k < g.size(); ++k)
        if (g.is_boundary(k)) next.values[k] = bc.value(g.point(k), next.time);
      return;
    case BoundaryKind::Extrapolate: {
      for (int a = 0; a < g.dim; ++a)
        if (g.nodes[a] < 4) throw Error(ErrorCode::DegenerateGrid, "extrapolation needs 4 nodes per axis");
      auto& v = next.values;
      const int n0 = g.nodes[0], n1 = g.dim == 2 ? g.nodes[1] : 1;
      const int j_lo = g.dim == 2 ? 1 : 0, j_hi = g.dim == 2 ? n1 - 2 : 0;
      for (int j = j_lo; j <= j_hi; ++j) {
        const int r = j * n0;
        v[r] = 3 * v[r + 1] - 3 * v[r + 2] + v[r + 3];
        v[r + n0 - 1] = 3 * v[r + n0 - 2] - 3 * v[r + n0 - 3] + v[r + n0 - 4];
      }
      if (g.dim == 2) {
        for (int i = 0; i < n0; ++i) {
          v[i] = 3 * v[i + n0] - 3 * v[i + 2 * n0] + v[i + 3 * n0];
          const int top = (n1 - 1) * n0 + i;
          v[top] = 3 * v[top - n0] - 3 * v[top - 2 * n0] + v[top - 3 * n0];
        }
      }
      return;
    }
  }
}

GridFunction step_unchecked(const ProblemSpec& spec, const Grid& grid, const GridFunction& u_n, double dt,
                            const BoundaryCondition& bc, const SchemeOptions& opts) {
  GridFunction next(grid, u_n.time + dt);
  for (int k = 0; k < grid.size(); ++k) {
    if (grid.is_boundary(k)) continue;
    next.values[k] = node_update(spec, gather(grid, u_n, k), u_n.time, dt, opts);
  }
  apply_boundary(grid, u_n, next, bc);
  if (!next.all_finite()) throw Error(ErrorCode::NonFiniteValue, "non-finite value after explicit step");
  return next;
}

void check_grid_function(const Grid& grid, const GridFunction& u) {
  grid.validate();
  if (static_cast<int>(u.values.size()) != grid.size()) {
    throw Error(ErrorCode::DimensionMismatch, "grid function does not match the grid");
  }
}

}  // namespace

double cfl_dt(const ProblemSpec& spec, const Grid& grid, const GridFunction& current, const SchemeOptions& opts) {
  check_grid_function(grid, current);
  if (spec.space_dim != grid.dim) throw Error(ErrorCode::DimensionMismatch, "problem and grid dimensions differ");
  double rate = 0.0;
  for (int k = 0; k < grid.size(); ++k) {
    if (grid.is_boundary(k)) continue;
    rate = std::max(rate, node_rate(spec, gather(grid, current, k), current.time));
  }
  const double cap = opts.dt_cap_fraction * grid.horizon;
  if (!std::isfinite(rate)) return 0.0;
  return rate > 0.0 ? std::min(cap, 1.0 / rate) : cap;
}

GridFunction step_explicit(const ProblemSpec& spec, const Grid& grid, const GridFunction& u_n, double dt,
                           const BoundaryCondition& boundary, const SchemeOptions& opts) {
  const double limit = cfl_dt(spec, grid, u_n, opts);
  if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12)) {
    throw Error(ErrorCode::CflViolation, "dt exceeds the monotonicity bound");
  }
  return step_unchecked(spec, grid, u_n, dt, boundary, opts);
}

SolveOutcome solve(const ProblemSpec& spec, const Grid& grid, const GridFunction& init,
                   const BoundaryCondition& boundary, const SolveOptions& opts) {
  check_grid_function(grid, init);
  const double T = grid.horizon;
  const double theta = opts.blowup_threshold > 0.0 ? opts.blowup_threshold : 1e6 * (1.0 + init.max_abs());

  SolveOutcome out;
  GridFunction cur = init;
  out.times.push_back(cur.time);
  out.max_norm.push_back(cur.max_abs());
  out.snapshots.push_back(cur);
  while (cur.time < T * (1.0 - 1e-14)) {
    if (out.steps >= opts.max_steps) {
      out.status = SolveStatus::CflViolation;
      break;
    }
    double dt = std::min(cfl_dt(spec, grid, cur, opts.scheme), T - cur.time);
    if (dt < opts.min_dt * T) {
      out.status = SolveStatus::CflViolation;
      break;
    }
    GridFunction next;
    try {
      next = step_unchecked(spec, grid, cur, dt, boundary, opts.scheme);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonFiniteValue) throw;
      out.status = SolveStatus::BlewUp;
      out.tau_num = cur.time + dt;
      break;
    }
    cur = std::move(next);
    ++out.steps;
    const double m = cur.max_abs();
    out.times.push_back(cur.time);
    out.max_norm.push_back(m);
    if (opts.snapshot_every > 0 && out.steps % opts.snapshot_every == 0) out.snapshots.push_back(cur);
    if (m > theta) {
      out.status = SolveStatus::BlewUp;
      out.tau_num = cur.time;
      break;
    }
  }
  if (out.snapshots.back().time != cur.time) out.snapshots.push_back(cur);
  out.final = cur;
  return out;
}

std::string SolveOutcome::to_json() const {
  nlohmann::json j;
  j["status"] = std::string(to_string(status));
  j["tau_num"] = std::isfinite(tau_num) ? nlohmann::json(tau_num) : nlohmann::json(nullptr);
  j["steps"] = steps;
  j["final_time"] = final.time;
  j["times"] = times;
  j["max_norm"] = max_norm;
  return j.dump(2);
}

ComparisonReport discrete_comparison_trial(const ProblemSpec& spec, const Grid& grid, const GridFunction& u0,
                                           const GridFunction& v0, long steps, const BoundaryCondition& bu,
                                           const BoundaryCondition& bv, const SchemeOptions& opts) {
  check_grid_function(grid, u0);
  check_grid_function(grid, v0);
  for (int k = 0; k < grid.size(); ++k) {
    if (u0.values[k] > v0.values[k]) throw Error(ErrorCode::InvalidArgument, "initial pair is not ordered");
  }
  ComparisonReport rep;
  GridFunction u = u0, v = v0;
  const double T = grid.horizon;
  for (long s = 0; s < steps && u.time < T * (1.0 - 1e-14); ++s) {
    const double dt =
        std::min({cfl_dt(spec, grid, u, opts), cfl_dt(spec, grid, v, opts), T - u.time});
    if (!(dt > 0.0)) throw Error(ErrorCode::CflViolation, "admissible step vanished");
    u = step_unchecked(spec, grid, u, dt, bu, opts);
    v = step_unchecked(spec, grid, v, dt, bv, opts);
    v.time = u.time;
    for (int k = 0; k < grid.size(); ++k) rep.max_violation = std::max(rep.max_violation, u.values[k] - v.values[k]);
    ++rep.steps;
  }
  rep.final_time = u.time;
  return rep;
}

}  // namespace hjb
