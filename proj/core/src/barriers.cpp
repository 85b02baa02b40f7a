#include "hjb/barriers.hpp"

#include "hjb/auxiliary.hpp"
#include "hjb/errors.hpp"
#include "hjb/hamiltonian.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace hjb {

namespace {

// w^p and its derivatives.
struct WeightPow {
  double v;
  Vec grad;
  Mat hess;
};

WeightPow weight_pow(const Vec& x, double p) {
  const int n = static_cast<int>(x.size());
  const double w2 = 1.0 + x.squaredNorm();
  const double c = p * std::pow(w2, 0.5 * p - 1.0);
  return {std::pow(w2, 0.5 * p), c * x, c * (Mat::Identity(n, n) + (p - 2.0) / w2 * (x * x.transpose()))};
}

double m_p(double p) { return std::max(1.0, p - 1.0); }

void require_constants(const ProblemSpec& spec) {
  if (!spec.constants.specified) throw Error(ErrorCode::MissingConstants, "problem has no assumption constants");
  spec.constants.validate();
}

// Growth rate absorbed by a subsolution -k w^p - (...) whose coefficient k
// stays below k_max. `source` collects the terms bounded by a multiple of |u|
// that do not involve derivatives.
double sub_rate(const ProblemSpec& spec, double k_max, double source) {
  const auto& c = spec.constants;
  const double p = spec.p, pc = spec.p_conj();
  const double s2 = c.C_sigma * c.C_sigma;
  double rate = std::sqrt(2.0) * c.C_b * p + source;
  rate += c.C_f * std::pow(c.C_s, pc) * std::pow(p, pc) * std::pow(k_max, pc - 1.0);
  if (!spec.controlled()) return rate + 2.0 * s2 * p * m_p(p);

  // Controlled: |b| <= C_b(1+|x|+|a|), |sigma|^2 <= 2 C_sigma^2((1+|x|)^2 + |a|^2).
  rate += 4.0 * s2 * p * m_p(p);
  const double c2 = 2.0 * p * m_p(p) * s2;
  if (c2 > 0.0) {
    double lead = 0.0;
    if (p == 2.0) {
      lead = c2 * k_max;
    } else if (p > 2.0) {
      lead = c2 * k_max * 2.0 / p;
      rate += c2 * (p - 2.0) / p;
    } else {
      throw Error(ErrorCode::ParameterInfeasible, "diffusion grows faster than the coercive cost for p < 2");
    }
    if (lead > c.nu / 4.0) {
      throw Error(ErrorCode::ParameterInfeasible,
                  "barrier coefficient too large for the coercive cost; decrease eps");
    }
  }
  // Young: C_b|a| k p w^{p-1} <= (nu/4)|a|^p + (p nu/4)^{1-p'} (C_b p k)^{p'} w^p / p'.
  rate += std::pow(p * c.nu / 4.0, 1.0 - pc) * std::pow(c.C_b * p, pc) * std::pow(k_max, pc - 1.0) / pc;
  return rate;
}

}  // namespace

Jet BarrierFamily::evaluate(const Vec& x, double t) const {
  Jet j;
  switch (form) {
    case BarrierForm::PowerBarrier: {
      const auto w = weight_pow(x, p);
      const double k = (sign == BarrierSign::Super ? K : -K) * std::exp(rho * t);
      j.value = k * w.v;
      j.dt = rho * j.value;
      j.grad = k * w.grad;
      j.hess = k * w.hess;
      return j;
    }
    case BarrierForm::EpsFamily: {
      const auto w = weight_pow(x, p);
      const double e = std::exp(rho * t);
      j.value = -e * (M_eps + eps * w.v);
      j.dt = rho * j.value;
      j.grad = -e * eps * w.grad;
      j.hess = -e * eps * w.hess;
      return j;
    }
    case BarrierForm::PhiRComposite: {
      const auto w = weight_pow(x, p);
      const double h = C_bar * w.v;
      const Vec dh = C_bar * w.grad;
      const Mat d2h = C_bar * w.hess;
      const AuxiliaryValue a = auxiliary_phi(R, h, C_time * t, quad_points);
      j.value = a.value;
      j.dt = C_time * a.dt;
      j.grad = a.dr * dh;
      j.hess = a.dr * d2h + a.drr * (dh * dh.transpose());
      return j;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown barrier form");
}

std::vector<Vec> envelope_probe_points(int dim, double max_radius, int radii) {
  std::vector<Vec> dirs = probe_directions(dim);
  for (int j = 0; j < dim; ++j) {
    dirs.push_back(Vec::Unit(dim, j));
    dirs.push_back(-Vec::Unit(dim, j));
  }
  std::vector<Vec> pts;
  pts.push_back(Vec::Zero(dim));
  const double lo = std::log(1e-3), hi = std::log(max_radius);
  for (int i = 0; i < radii; ++i) {
    const double r = std::exp(lo + (hi - lo) * i / (radii - 1));
    for (const auto& d : dirs) pts.push_back(r * d);
  }
  return pts;
}

double initial_growth_constant(const ProblemSpec& spec, double max_radius) {
  double c = 0.0;
  for (const Vec& x : envelope_probe_points(spec.space_dim, max_radius)) {
    c = std::max(c, std::abs(spec.initial(x)) / weight_pow(x, spec.p).v);
  }
  return c;
}

BarrierFamily build_power_super(const ProblemSpec& spec) {
  require_constants(spec);
  const auto& c = spec.constants;
  const double p = spec.p, pc = spec.p_conj();
  BarrierFamily b;
  b.form = BarrierForm::PowerBarrier;
  b.sign = BarrierSign::Super;
  b.dim = spec.space_dim;
  b.p = p;
  b.K = initial_growth_constant(spec) + 1.0;
  const double K = b.K;
  // Controlled problems use the witness control alpha = 0.
  const double base = 2.0 * c.C_sigma * c.C_sigma * p * m_p(p) + std::sqrt(2.0) * c.C_b * p +
                      c.C_f * (1.0 + 2.0 / K) + (spec.controlled() ? c.C_ell * 2.0 / K : 0.0);
  const double grad = std::pow(c.C_s, pc) * std::pow(p, pc) * std::pow(K, pc - 1.0) * std::exp(1.0);
  b.rho = base + c.grad_lower * grad + 1.0;
  b.tau_valid = c.grad_lower == 0.0 ? spec.horizon : std::min(spec.horizon, 1.0 / ((pc - 1.0) * b.rho));
  return b;
}

BarrierFamily build_power_sub(const ProblemSpec& spec) {
  require_constants(spec);
  const auto& c = spec.constants;
  const double p = spec.p, pc = spec.p_conj();
  BarrierFamily b;
  b.form = BarrierForm::PowerBarrier;
  b.sign = BarrierSign::Sub;
  b.dim = spec.space_dim;
  b.p = p;
  b.K = initial_growth_constant(spec) + 1.0;
  const double K = b.K;
  const double k_max = K * std::exp(p - 1.0);
  double source = c.C_f * (1.0 + 2.0 / K);
  if (spec.controlled()) source += c.C_ell * 2.0 / K;
  b.rho = sub_rate(spec, k_max, source) + 1.0;
  b.tau_valid = std::min(spec.horizon, 1.0 / ((pc - 1.0) * b.rho));
  return b;
}

std::pair<BarrierFamily, BarrierFamily> build_power_barriers(const ProblemSpec& spec) {
  return {build_power_sub(spec), build_power_super(spec)};
}

BarrierFamily build_eps_subsolution(const ProblemSpec& spec, double eps) {
  require_constants(spec);
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  const auto& c = spec.constants;
  if (!c.has_envelopes()) throw Error(ErrorCode::MissingEnvelopes, "chi and gamma envelopes are required");
  const double p = spec.p;

  double M = 0.0;
  for (const Vec& x : envelope_probe_points(spec.space_dim)) {
    const double env = std::max({std::abs(spec.initial(x)), std::abs(c.chi(x)), std::abs(c.gamma(x))});
    M = std::max(M, env - eps * weight_pow(x, p).v);
  }

  BarrierFamily b;
  b.form = BarrierForm::EpsFamily;
  b.sign = BarrierSign::Sub;
  b.dim = spec.space_dim;
  b.p = p;
  b.eps = eps;
  b.M_eps = M;
  const double k_max = eps * std::exp(p - 1.0);
  double source = c.C_f * (1.0 / (M + eps) + 2.0);
  if (spec.controlled()) source += 1.0;
  b.rho = sub_rate(spec, k_max, source) + 1.0;
  b.tau_valid = std::min(spec.horizon, (p - 1.0) / b.rho);
  return b;
}

BarrierFamily build_strict_supersolution(const ChangeOfFunctions& cf, const ProblemSpec& spec, double R, double mu,
                                         int quad_points) {
  require_constants(spec);
  if (!(R > 0.0)) throw Error(ErrorCode::NonPositiveR, "R must be positive");
  if (!(mu > 0.0 && mu < 1.0)) throw Error(ErrorCode::InvalidArgument, "mu must lie in (0,1)");
  const auto& c = spec.constants;
  const double p = spec.p, pc = spec.p_conj();
  const double s2 = c.C_sigma * c.C_sigma;

  const double C = std::max(2.0 * p * m_p(p) * s2 + std::sqrt(2.0) * p * c.C_b, 2.0 * p * p * s2) + 1.0;
  const double L_fix = std::max(ChangeOfFunctions::choose_L(spec), cf.L);
  const double E = std::max(spec.horizon, C / L_fix);
  const double L_f = 8.0 * c.C_f / cf.C_bar +
                     4.0 * c.C_f * std::pow(p, pc) * std::pow(c.C_s, pc) * std::pow(cf.C_bar, pc - 1.0) *
                         std::exp(pc) * std::pow(std::exp(E) / (1.0 - mu) + 1.0, pc) +
                     1.0;
  const double L = std::max(L_fix, L_f) + 1.0;
  if (!std::isfinite(L)) throw Error(ErrorCode::ParameterInfeasible, "L is not finite for this mu");

  BarrierFamily b;
  b.form = BarrierForm::PhiRComposite;
  b.sign = BarrierSign::Super;
  b.dim = spec.space_dim;
  b.p = p;
  b.C_bar = cf.C_bar;
  b.C_time = C;
  b.R = R;
  b.L = L;
  b.mu = mu;
  b.tau_valid = 1.0 / L;
  b.quad_points = quad_points;
  return b;
}

namespace {

void finalize(ResidualReport& rep, double threshold) {
  rep.passed = true;
  if (rep.residual.empty()) return;
  rep.min_residual = *std::min_element(rep.residual.begin(), rep.residual.end());
  rep.max_residual = *std::max_element(rep.residual.begin(), rep.residual.end());
  const auto it = std::min_element(rep.margin.begin(), rep.margin.end());
  rep.worst_margin = *it;
  rep.worst_index = static_cast<int>(it - rep.margin.begin());
  rep.passed = rep.worst_margin > threshold || (threshold < 0.0 && rep.worst_margin >= threshold);
}

}  // namespace

ResidualReport check_linearized_operator(const BarrierFamily& phi, const ChangeOfFunctions& cf,
                                         const ProblemSpec& spec, double mu, const std::vector<SamplePoint>& samples) {
  if (phi.form != BarrierForm::PhiRComposite) {
    throw Error(ErrorCode::DerivativeUnavailable, "linearised operator needs the phi_R composite");
  }
  const auto& c = spec.constants;
  const double L = phi.L;
  ResidualReport rep;
  for (const auto& sp : samples) {
    const Vec& x = sp.x;
    const double t = sp.t;
    const Jet j = phi.evaluate(x, t);
    const Mat a = diffusion_matrix(spec, x, t);
    const double h = cf.h(x);
    const double e = std::exp(L * t);
    const Vec z = e * (spec.grad_weight(x, t) * (j.grad / (mu - 1.0) - cf.grad_h(x)));
    const double val = j.dt - (a * j.hess).trace() - c.C_b * (1.0 + x.norm()) * j.grad.norm() +
                       0.25 * L * (1.0 - mu) * h - (1.0 - mu) * spec.f(x, t, 0.0, z) / e;
    rep.points.push_back(sp);
    rep.residual.push_back(val);
    rep.margin.push_back(val);
    rep.witness.emplace_back();
  }
  finalize(rep, 0.0);
  if (!rep.passed) rep.failure = std::string(to_string(ErrorCode::InvalidArgument));
  return rep;
}

ResidualReport viscosity_residual_check(const std::function<Jet(const Vec&, double)>& candidate,
                                        const ProblemSpec& spec, ResidualRole role, double eta,
                                        const std::vector<SamplePoint>& samples, int control_points) {
  ResidualReport rep;
  HamiltonianOptions opts;
  opts.points_per_dim = control_points;
  for (const auto& sp : samples) {
    const Jet j = candidate(sp.x, sp.t);
    double r = 0.0;
    Vec wit;
    if (!spec.controlled()) {
      r = model_residual(spec, j, sp.x, sp.t);
    } else {
      const double A = control_radius(spec, j.grad, j.hess);
      auto obj = [&](const Vec& a) { return controlled_residual(spec, j, sp.x, sp.t, a); };
      const auto best = maximize_over_controls(obj, spec.control_dim, A, opts);
      r = best.value.value();
      wit = best.argmax;
    }
    rep.points.push_back(sp);
    rep.residual.push_back(r);
    rep.margin.push_back(role == ResidualRole::Sub ? -r : r);
    rep.witness.push_back(wit);
  }
  finalize(rep, -eta);
  if (!rep.passed) {
    rep.failure = std::string(to_string(role == ResidualRole::Super ? ErrorCode::NoWitnessFound
                                                                    : ErrorCode::InvalidArgument));
  }
  return rep;
}

std::vector<SamplePoint> sample_points(int dim, double radius, double t_lo, double t_hi, int count,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  std::vector<SamplePoint> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Vec v(dim);
    for (int j = 0; j < dim; ++j) v[j] = nd(rng);
    const double n = v.norm();
    const double r = radius * std::pow(ud(rng), 1.0 / dim);
    SamplePoint sp;
    sp.x = n > 0.0 ? Vec(v * (r / n)) : Vec(Vec::Zero(dim));
    sp.t = t_lo + (t_hi - t_lo) * ud(rng);
    out.push_back(sp);
  }
  return out;
}

std::string ResidualReport::to_json(int top) const {
  nlohmann::json j;
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(v > 0 ? "+inf" : "-inf"); };
  j["passed"] = passed;
  j["failure"] = failure;
  j["samples"] = residual.size();
  j["min_residual"] = num(min_residual);
  j["max_residual"] = num(max_residual);
  j["worst_margin"] = num(worst_margin);
  std::vector<std::size_t> order(margin.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return margin[a] < margin[b]; });
  nlohmann::json worst = nlohmann::json::array();
  for (std::size_t i = 0; i < order.size() && static_cast<int>(i) < top; ++i) {
    const auto k = order[i];
    nlohmann::json e;
    e["x"] = std::vector<double>(points[k].x.data(), points[k].x.data() + points[k].x.size());
    e["t"] = points[k].t;
    e["residual"] = num(residual[k]);
    e["margin"] = num(margin[k]);
    if (witness[k].size() > 0) e["control"] = std::vector<double>(witness[k].data(), witness[k].data() + witness[k].size());
    worst.push_back(e);
  }
  j["worst"] = worst;
  return j.dump(2);
}

}  // namespace hjb
