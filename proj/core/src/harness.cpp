#include "hjb/harness.hpp"

#include "hjb/auxiliary.hpp"
#include "hjb/barriers.hpp"
#include "hjb/errors.hpp"
#include "hjb/manufactured.hpp"
#include "hjb/presets.hpp"
#include "hjb/riccati.hpp"
#include "hjb/scheme.hpp"
#include "hjb/transforms.hpp"
#include "hjb/validation.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace hjb {

namespace fs = std::filesystem;
using json = nlohmann::json;

const std::vector<std::string>& suite_order() {
  static const std::vector<std::string> order{"validate", "barriers", "oracles", "solve", "comparison", "convergence"};
  return order;
}

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

const std::vector<std::string> kRunKeys{"nodes",  "extent", "eps",    "samples", "radius",     "mu",     "R",
                                        "trials", "steps",  "levels", "conv_nodes", "conv_T", "riccati_dt", "profiles"};

int as_int(const json& v, const std::string& key, int lo) {
  if (!v.is_number()) invalid("'" + key + "' must be a number");
  const double d = v.get<double>();
  if (d != std::floor(d) || d < lo || d > 1e9) invalid("'" + key + "' must be an integer >= " + std::to_string(lo));
  return static_cast<int>(d);
}

double as_positive(const json& v, const std::string& key) {
  if (!v.is_number()) invalid("'" + key + "' must be a number");
  const double d = v.get<double>();
  if (!(d > 0.0) || !std::isfinite(d)) invalid("'" + key + "' must be positive");
  return d;
}

std::vector<double> as_list(const json& v, const std::string& key) {
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array()) {
    for (const auto& e : v) {
      if (!e.is_number()) invalid("'" + key + "' must hold numbers");
      out.push_back(e.get<double>());
    }
  } else {
    invalid("'" + key + "' must be a number or a list of numbers");
  }
  return out;
}

void apply_run_key(RunSettings& r, const std::string& key, const json& v) {
  if (key == "nodes") r.nodes = as_int(v, key, 3);
  else if (key == "extent") r.extent = as_positive(v, key);
  else if (key == "eps") r.eps = as_positive(v, key);
  else if (key == "samples") r.samples = as_int(v, key, 1);
  else if (key == "radius") r.radius = as_positive(v, key);
  else if (key == "trials") r.trials = as_int(v, key, 1);
  else if (key == "steps") r.steps = as_int(v, key, 1);
  else if (key == "levels") r.levels = as_int(v, key, 2);
  else if (key == "conv_nodes") r.conv_nodes = as_int(v, key, 5);
  else if (key == "conv_T") r.conv_T = as_positive(v, key);
  else if (key == "riccati_dt") r.riccati_dt = as_positive(v, key);
  else if (key == "profiles") r.profiles = as_int(v, key, 2);
  else if (key == "mu") {
    r.mu = as_list(v, key);
    for (double m : r.mu)
      if (!(m > 0.0 && m < 1.0)) invalid("every mu must lie in (0,1)");
  } else if (key == "R") {
    r.R = as_list(v, key);
    for (double x : r.R)
      if (!(x > 0.0)) invalid("every R must be positive");
  }
}

// Shortest round-trip decimal form; identical across runs of one binary.
std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "+inf" : "-inf";
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  os << text;
  if (!os) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Effective settings after preset defaults.
struct Resolved {
  ProblemSpec spec;
  const PresetDescriptor* desc = nullptr;
  RunSettings run;
  int nodes = 0;
  double extent = 0.0;
  double eps = 0.0;
  std::uint64_t seed = 0;
};

Resolved resolve(const ExperimentConfig& cfg) {
  Resolved r;
  r.desc = &find_preset(cfg.preset);
  r.spec = make_preset(cfg.preset, cfg.problem_params);
  r.run = cfg.run;
  r.nodes = cfg.run.nodes.value_or(r.spec.space_dim == 1 ? (r.spec.controlled() ? 51 : 101) : 41);
  r.extent = cfg.run.extent.value_or(2.0);
  r.eps = cfg.run.eps.value_or(r.spec.controlled() ? 0.02 : 0.1);
  r.seed = cfg.seed;
  return r;
}

Grid solve_grid(const Resolved& r, double horizon) {
  if (r.spec.space_dim > 2) {
    throw Error(ErrorCode::DimensionMismatch, "grid suites support N <= 2");
  }
  Grid g = Grid::uniform(r.spec.space_dim, r.extent, r.nodes, horizon);
  g.validate();
  return g;
}

std::function<Jet(const Vec&, double)> as_candidate(const BarrierFamily& b) {
  return [b](const Vec& x, double t) { return b.evaluate(x, t); };
}

struct Context {
  fs::path dir;
  const Resolved& r;
};

struct Outcome {
  bool passed = false;
  json metrics = json::object();
  std::vector<std::string> artifacts;
};

std::string put(const Context& c, const std::string& name, const std::string& text) {
  write_file(c.dir / name, text);
  return name;
}

// ---- suites ---------------------------------------------------------------

Outcome suite_validate(const Context& c) {
  const auto& r = c.r;
  const ValidationReport rep = validate_assumptions(r.spec, r.run.samples, r.run.radius, r.seed);
  Outcome o;
  o.passed = rep.passed();
  o.metrics["samples"] = rep.samples;
  o.metrics["checks"] = rep.checks_run;
  o.metrics["violations"] = rep.violations.size();
  json full = json::object();
  full["samples"] = rep.samples;
  full["checks"] = rep.checks_run;
  full["violations"] = json::array();
  for (const auto& v : rep.violations) {
    full["violations"].push_back({{"check", v.check},
                                  {"x", std::vector<double>(v.x.data(), v.x.data() + v.x.size())},
                                  {"t", v.t},
                                  {"lhs", num(v.lhs)},
                                  {"rhs", num(v.rhs)},
                                  {"detail", v.detail}});
  }
  o.artifacts.push_back(put(c, "validation.json", full.dump(2) + "\n"));
  return o;
}

struct BarrierPair {
  BarrierFamily sub, super;
};

// Sub and super barriers the solve suite compares against.
BarrierPair envelope_barriers(const Resolved& r) {
  if (r.spec.controlled()) return {build_eps_subsolution(r.spec, r.eps), build_power_super(r.spec)};
  auto [sub, super] = build_power_barriers(r.spec);
  return {sub, super};
}

Outcome suite_barriers(const Context& c) {
  const auto& r = c.r;
  const ProblemSpec& s = r.spec;
  const int n = s.space_dim;
  Outcome o;
  o.passed = true;
  json full = json::object();
  std::uint64_t seed = r.seed;

  auto record = [&](const std::string& name, const ResidualReport& rep, const json& extra) {
    json m = extra;
    m["passed"] = rep.passed;
    m["min_residual"] = num(rep.min_residual);
    m["max_residual"] = num(rep.max_residual);
    o.metrics[name] = m;
    full[name] = json::parse(rep.to_json(10));
    o.passed = o.passed && rep.passed;
  };

  const BarrierFamily super = build_power_super(s);
  record("power_super",
         viscosity_residual_check(as_candidate(super), s, ResidualRole::Super, 0.0,
                                  sample_points(n, r.run.radius, 0.0, super.tau_valid, r.run.samples, ++seed)),
         {{"K", super.K}, {"rho", super.rho}, {"tau_valid", super.tau_valid}});

  std::vector<BarrierFamily> subs;
  if (!s.controlled()) {
    const BarrierFamily sub = build_power_sub(s);
    record("power_sub",
           viscosity_residual_check(as_candidate(sub), s, ResidualRole::Sub, 0.0,
                                    sample_points(n, r.run.radius, 0.0, sub.tau_valid, r.run.samples, ++seed)),
           {{"K", sub.K}, {"rho", sub.rho}, {"tau_valid", sub.tau_valid}});
    subs.push_back(sub);
  }
  if (r.desc->strict_class_data) {
    const BarrierFamily eps = build_eps_subsolution(s, r.eps);
    record("eps_sub",
           viscosity_residual_check(as_candidate(eps), s, ResidualRole::Sub, 0.0,
                                    sample_points(n, r.run.radius, 0.0, eps.tau_valid, r.run.samples, ++seed)),
           {{"eps", eps.eps}, {"M_eps", eps.M_eps}, {"rho", eps.rho}, {"tau_valid", eps.tau_valid}});
    subs.push_back(eps);
  }

  // Ordering against the initial datum on rays out to |x| = 1e4.
  double order_gap = 0.0;
  for (const Vec& x : envelope_probe_points(n)) {
    const double psi = s.initial(x);
    order_gap = std::max(order_gap, psi - super.value(x, 0.0));
    for (const auto& b : subs) order_gap = std::max(order_gap, b.value(x, 0.0) - psi);
  }
  o.metrics["initial_order_gap"] = order_gap;
  o.passed = o.passed && order_gap <= 0.0;

  if (!s.controlled() && r.desc->strict_class_data) {
    const ChangeOfFunctions cf = ChangeOfFunctions::for_problem(s, initial_growth_constant(s));
    json strict = json::array();
    for (double mu : r.run.mu) {
      for (double R : r.run.R) {
        const BarrierFamily phi = build_strict_supersolution(cf, s, R, mu);
        const ResidualReport rep = check_linearized_operator(
            phi, cf, s, mu, sample_points(n, r.run.radius, 0.0, phi.tau_valid, r.run.samples, ++seed));
        strict.push_back({{"mu", mu},
                          {"R", R},
                          {"L", phi.L},
                          {"tau_valid", phi.tau_valid},
                          {"min_residual", num(rep.min_residual)},
                          {"passed", rep.passed}});
        o.passed = o.passed && rep.passed;
      }
    }
    o.metrics["strict_super"] = strict;
    full["strict_super"] = strict;
  }
  o.artifacts.push_back(put(c, "barriers.json", full.dump(2) + "\n"));
  return o;
}

Outcome suite_oracles(const Context& c) {
  const auto& r = c.r;
  Outcome o;
  // Auxiliary problem: kernel quadrature against the finite-difference solve
  // on 200 points of [0, 2 max(R, 10)].
  std::ostringstream csv;
  csv << "R,t,r,kernel,fd\n";
  double worst = 0.0;
  bool props = true;
  for (double R : r.run.R) {
    for (double t : {0.1, 0.5, 1.0}) {
      const AuxiliaryProfile fd = auxiliary_fd_profile(R, t);
      const double top = 2.0 * std::max(R, 10.0);
      double prev = 0.0;
      for (int k = 0; k < 200; ++k) {
        const double rr = top * k / 199.0;
        const AuxiliaryValue a = auxiliary_phi(R, rr, t);
        const double v = fd.at(rr);
        worst = std::max(worst, std::abs(a.value - v));
        props = props && a.value >= std::max(0.0, rr - R) - 1e-12 && a.value >= prev - 1e-12 && a.drr >= -1e-8;
        prev = a.value;
        csv << fmt(R) << ',' << fmt(t) << ',' << fmt(rr) << ',' << fmt(a.value) << ',' << fmt(v) << '\n';
      }
    }
  }
  o.metrics["auxiliary_max_gap"] = worst;
  o.metrics["auxiliary_properties"] = props;
  o.passed = worst <= 1e-3 && props;
  o.artifacts.push_back(put(c, "auxiliary.csv", csv.str()));
  return o;
}

Outcome suite_blowup_oracle(const Context& c, double rho) {
  const auto& r = c.r;
  const ProblemSpec& s = r.spec;
  const RiccatiProblem prob{s.p, rho, s.horizon};
  const BlowUpReport rep = riccati_solve(prob, r.run.riccati_dt);
  Outcome o;
  o.metrics["blowup_predicted"] = prob.blowup_predicted();
  o.metrics["blew_up"] = rep.blew_up;
  o.metrics["tau"] = num(rep.tau);
  o.metrics["tau_quadrature"] = num(rep.tau_quadrature);
  o.metrics["bracket_width"] = num(rep.bracket_width());
  o.metrics["trajectory_gap"] = rep.trajectory_gap;
  if (prob.blowup_predicted()) {
    o.passed = rep.blew_up && std::abs(rep.tau - rep.tau_quadrature) <= 1e-4;
  } else {
    o.passed = !rep.blew_up;
  }
  // Value-function residual on the interval of existence.
  const RiccatiTrajectory traj(prob, r.run.riccati_dt);
  double res = 0.0;
  for (int i = 1; i <= 10; ++i) {
    const double t = traj.t_min() + (s.horizon - traj.t_min()) * i / 10.0;
    for (double x : {0.5, 1.0, 2.0}) res = std::max(res, lp_value_residual(traj, x, t) / std::pow(x, s.p));
  }
  o.metrics["value_residual"] = res;
  o.passed = o.passed && res <= 1e-6;
  o.artifacts.push_back(put(c, "riccati.json", rep.to_json() + "\n"));
  o.artifacts.push_back(put(c, "trajectory.csv", rep.trajectory_csv()));
  return o;
}

double preset_rho(const ExperimentConfig& cfg, const Resolved& r) {
  const auto it = cfg.problem_params.find("rho");
  return it != cfg.problem_params.end() ? it->second : r.desc->defaults.at("rho");
}

// Keeps `count` slices evenly spread in time, always the first and last.
std::vector<GridFunction> pick_profiles(const std::vector<GridFunction>& all, int count) {
  std::vector<GridFunction> out;
  if (all.empty()) return out;
  const double t0 = all.front().time, t1 = all.back().time;
  std::size_t k = 0;
  for (int i = 0; i < count; ++i) {
    const double target = t0 + (t1 - t0) * i / (count - 1);
    while (k + 1 < all.size() && all[k + 1].time <= target) ++k;
    if (out.empty() || out.back().time != all[k].time) out.push_back(all[k]);
  }
  if (out.back().time != t1) out.push_back(all.back());
  return out;
}

Outcome suite_solve(const Context& c) {
  const auto& r = c.r;
  const ProblemSpec& s = r.spec;
  const Grid g = solve_grid(r, s.horizon);
  const GridFunction init = GridFunction::sample(g, s.initial);
  // First-order problems have inflow boundaries; extrapolate from the interior there.
  const BoundaryCondition bc = r.desc->zero_diffusion ? BoundaryCondition::extrapolate() : BoundaryCondition::frozen();
  SolveOptions opts;
  opts.snapshot_every = 1;
  const SolveOutcome out = solve(s, g, init, bc, opts);
  const std::vector<GridFunction> profiles = pick_profiles(out.snapshots, r.run.profiles);

  Outcome o;
  o.metrics["status"] = std::string(to_string(out.status));
  o.metrics["steps"] = out.steps;
  o.metrics["final_time"] = out.final.time;
  o.metrics["max_norm"] = out.max_norm.back();

  std::ostringstream prof;
  write_csv(prof, profiles);
  o.artifacts.push_back(put(c, "solution.csv", prof.str()));

  json summary = json::parse(out.to_json());
  o.artifacts.push_back(put(c, "solve.json", summary.dump(2) + "\n"));

  // Barrier envelopes on the slices where the barriers are valid.
  std::ostringstream env;
  env << (g.dim == 1 ? "x1" : "x1,x2") << ",t,u_num,barrier_sub,barrier_super\n";
  double breach = 0.0;
  const BarrierPair bp = envelope_barriers(r);
  for (const auto& slice : profiles) {
    if (slice.time > bp.sub.tau_valid || slice.time > bp.super.tau_valid) continue;
    for (int k = 0; k < g.size(); ++k) {
      const Vec x = g.point(k);
      const double lo = bp.sub.value(x, slice.time), hi = bp.super.value(x, slice.time);
      const double u = slice.values[k];
      breach = std::max({breach, lo - u, u - hi});
      env << fmt(x[0]) << ',';
      if (g.dim == 2) env << fmt(x[1]) << ',';
      env << fmt(slice.time) << ',' << fmt(u) << ',' << fmt(lo) << ',' << fmt(hi) << '\n';
    }
  }
  o.metrics["envelope_breach"] = breach;
  o.artifacts.push_back(put(c, "envelope.csv", env.str()));
  o.passed = out.status == SolveStatus::Completed && breach <= 1e-9;
  return o;
}

Outcome suite_blowup_solve(const Context& c, double rho) {
  const auto& r = c.r;
  const ProblemSpec& s = r.spec;
  const Grid g = solve_grid(r, s.horizon);
  SolveOptions opts;
  opts.snapshot_every = 1;
  const SolveOutcome out = solve(s, g, GridFunction::sample(g, s.initial), BoundaryCondition::extrapolate(), opts);
  const RiccatiProblem prob{s.p, rho, s.horizon};
  const BlowUpReport ode = riccati_solve(prob, r.run.riccati_dt);

  Outcome o;
  o.metrics["status"] = std::string(to_string(out.status));
  o.metrics["steps"] = out.steps;
  o.metrics["final_time"] = out.final.time;
  o.metrics["blowup_predicted"] = prob.blowup_predicted();
  if (prob.blowup_predicted()) {
    // The solver runs in reversed time s = T - t.
    const double tau_num = out.status == SolveStatus::BlewUp ? s.horizon - out.tau_num : std::nan("");
    const double rel = std::abs(tau_num - ode.tau) / std::abs(ode.tau);
    o.metrics["tau_num"] = num(tau_num);
    o.metrics["tau_ode"] = num(ode.tau);
    o.metrics["relative_error"] = num(rel);
    o.passed = out.status == SolveStatus::BlewUp && rel <= 0.1;
  } else {
    o.passed = out.status == SolveStatus::Completed;
  }
  std::ostringstream prof;
  write_csv(prof, pick_profiles(out.snapshots, r.run.profiles));
  o.artifacts.push_back(put(c, "solution.csv", prof.str()));
  o.artifacts.push_back(put(c, "solve.json", json::parse(out.to_json()).dump(2) + "\n"));
  return o;
}

// Random ordered pairs around the initial datum. Controlled problems get
// smooth perturbations so the discrete Hamiltonian stays finite.
std::pair<GridFunction, GridFunction> random_pair(const ProblemSpec& s, const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  GridFunction u = GridFunction::sample(g, s.initial);
  GridFunction v = u;
  if (!s.controlled()) {
    for (int k = 0; k < g.size(); ++k) {
      u.values[k] += ud(rng) - 0.5;
      v.values[k] = u.values[k] + 0.5 * ud(rng);
    }
    return {u, v};
  }
  std::array<double, 6> c{};
  for (auto& a : c) a = 0.02 * (ud(rng) - 0.5);
  const double lift = 0.1 * ud(rng);
  for (int k = 0; k < g.size(); ++k) {
    const Vec x = g.point(k);
    double du = 0.0, dv = lift;
    for (int m = 0; m < 3; ++m) {
      du += c[m] * std::sin((m + 1) * x.sum());
      dv += std::abs(c[m + 3]) * (1.0 + std::cos((m + 1) * x.sum()));
    }
    u.values[k] += du;
    v.values[k] = u.values[k] + dv;
  }
  return {u, v};
}

Outcome suite_comparison(const Context& c) {
  const auto& r = c.r;
  const ProblemSpec& s = r.spec;
  const Grid g = solve_grid(r, s.horizon);
  std::mt19937_64 rng(r.seed);
  std::ostringstream csv;
  csv << "trial,max_violation,steps,final_time\n";
  double worst = 0.0;
  for (int i = 0; i < r.run.trials; ++i) {
    const auto [u, v] = random_pair(s, g, rng);
    const ComparisonReport rep = discrete_comparison_trial(s, g, u, v, r.run.steps);
    worst = std::max(worst, rep.max_violation);
    csv << i << ',' << fmt(rep.max_violation) << ',' << rep.steps << ',' << fmt(rep.final_time) << '\n';
  }
  Outcome o;
  o.metrics["trials"] = r.run.trials;
  o.metrics["steps"] = r.run.steps;
  o.metrics["max_violation"] = worst;
  o.passed = worst <= 1e-10;
  o.artifacts.push_back(put(c, "comparison.csv", csv.str()));
  return o;
}

Outcome suite_convergence(const Context& c) {
  const auto& r = c.r;
  ProblemSpec s = r.spec;
  if (s.space_dim > 2) throw Error(ErrorCode::DimensionMismatch, "grid suites support N <= 2");
  const double T = std::min(r.run.conv_T, s.horizon);
  const ManufacturedSolution m = manufactured_solution(ManufacturedKind::SeparatedSine, {}, s);
  const ProblemSpec forced = s.with_forcing(m.forcing);
  std::ostringstream csv;
  csv << "level,nodes,h,error,order\n";
  std::vector<double> errors;
  bool ok = true;
  for (int l = 0; l < r.run.levels; ++l) {
    const int nodes = (r.run.conv_nodes - 1) * (1 << l) + 1;
    const Grid g = Grid::uniform(s.space_dim, std::numbers::pi, nodes, T);
    // dt must shrink with h even where the diffusive limit does not bind.
    SolveOptions opts;
    opts.scheme.dt_cap_fraction /= (1 << l);
    const SolveOutcome out =
        solve(forced, g, GridFunction::sample(g, m.u, 0.0), BoundaryCondition::dirichlet(m.u), opts);
    ok = ok && out.status == SolveStatus::Completed;
    double e = 0.0;
    for (int k = 0; k < g.size(); ++k) e = std::max(e, std::abs(out.final.values[k] - m.u(g.point(k), out.final.time)));
    const double order = errors.empty() ? std::nan("") : std::log2(errors.back() / e);
    errors.push_back(e);
    csv << l << ',' << nodes << ',' << fmt(g.h(0)) << ',' << fmt(e) << ',' << (std::isnan(order) ? "" : fmt(order))
        << '\n';
  }
  Outcome o;
  json ratios = json::array();
  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double q = errors[i - 1] / errors[i];
    ratios.push_back(q);
    min_ratio = std::min(min_ratio, q);
  }
  o.metrics["errors"] = errors;
  o.metrics["ratios"] = ratios;
  o.metrics["horizon"] = T;
  o.passed = ok && min_ratio >= 1.7;
  o.artifacts.push_back(put(c, "convergence.csv", csv.str()));
  return o;
}

}  // namespace

// ---- config ----------------------------------------------------------------

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    invalid(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) invalid("config must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (k != "preset" && k != "params" && k != "suites" && k != "output_dir" && k != "seed") {
      invalid("unknown config key '" + k + "'");
    }
  }
  if (!j.contains("preset") || !j["preset"].is_string()) invalid("missing string field 'preset'");
  ExperimentConfig cfg;
  cfg.preset = j["preset"].get<std::string>();
  const PresetDescriptor& desc = find_preset(cfg.preset);

  if (j.contains("params")) {
    if (!j["params"].is_object()) invalid("'params' must be an object");
    for (const auto& [k, v] : j["params"].items()) {
      if (desc.defaults.count(k)) {
        if (!v.is_number()) invalid("parameter '" + k + "' must be a number");
        cfg.problem_params[k] = v.get<double>();
      } else if (std::find(kRunKeys.begin(), kRunKeys.end(), k) != kRunKeys.end()) {
        apply_run_key(cfg.run, k, v);
      } else {
        invalid("parameter '" + k + "' does not apply to preset " + cfg.preset);
      }
    }
  }
  if (j.contains("suites")) {
    if (!j["suites"].is_array()) invalid("'suites' must be a list");
    std::vector<std::string> sel;
    for (const auto& e : j["suites"]) {
      if (!e.is_string()) invalid("suite names must be strings");
      const std::string name = e.get<std::string>();
      const auto& order = suite_order();
      if (std::find(order.begin(), order.end(), name) == order.end()) invalid("unknown suite '" + name + "'");
      if (std::find(desc.suites.begin(), desc.suites.end(), name) == desc.suites.end()) {
        invalid("suite '" + name + "' does not apply to preset " + cfg.preset);
      }
      sel.push_back(name);
    }
    cfg.suites = sel;
  }
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) invalid("'output_dir' must be a string");
    cfg.output_dir = j["output_dir"].get<std::string>();
  } else {
    cfg.output_dir = "runs/" + cfg.preset;
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) invalid("'seed' must be a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  // Validate the preset overrides now, not halfway through a run.
  (void)make_preset(cfg.preset, cfg.problem_params);
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error&) {
    invalid("cannot read config file " + path);
  }
  return from_json(text);
}

std::vector<std::string> ExperimentConfig::selected_suites() const {
  const std::vector<std::string>& wanted = suites ? *suites : find_preset(preset).suites;
  std::vector<std::string> out;
  for (const auto& name : suite_order())
    if (std::find(wanted.begin(), wanted.end(), name) != wanted.end()) out.push_back(name);
  return out;
}

std::string ExperimentConfig::to_json() const {
  const Resolved r = resolve(*this);
  json params = json::object();
  for (const auto& [k, v] : r.desc->defaults) params[k] = v;
  for (const auto& [k, v] : problem_params) params[k] = v;
  params["nodes"] = r.nodes;
  params["extent"] = r.extent;
  params["eps"] = r.eps;
  params["samples"] = run.samples;
  params["radius"] = run.radius;
  params["mu"] = run.mu;
  params["R"] = run.R;
  params["trials"] = run.trials;
  params["steps"] = run.steps;
  params["levels"] = run.levels;
  params["conv_nodes"] = run.conv_nodes;
  params["conv_T"] = run.conv_T;
  params["riccati_dt"] = run.riccati_dt;
  params["profiles"] = run.profiles;
  json j;
  j["preset"] = preset;
  j["params"] = params;
  j["suites"] = selected_suites();
  j["seed"] = seed;
  return j.dump(2);
}

// ---- runs ------------------------------------------------------------------

bool RunRecord::all_passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed(); });
}

std::string RunRecord::summary_path() const { return (fs::path(output_dir) / "summary.json").string(); }

RunRecord run_experiment(const ExperimentConfig& config) {
  const Resolved r = resolve(config);
  if (config.output_dir.empty()) invalid("output_dir is empty");
  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());

  RunRecord rec;
  rec.output_dir = dir.string();
  rec.config = config.to_json();
  const Context ctx{dir, r};
  const double rho = r.desc->blowup ? preset_rho(config, r) : 0.0;

  for (const auto& name : config.selected_suites()) {
    SuiteResult res;
    res.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      Outcome o;
      if (name == "validate") o = suite_validate(ctx);
      else if (name == "barriers") o = suite_barriers(ctx);
      else if (name == "oracles") o = r.desc->blowup ? suite_blowup_oracle(ctx, rho) : suite_oracles(ctx);
      else if (name == "solve") o = r.desc->blowup ? suite_blowup_solve(ctx, rho) : suite_solve(ctx);
      else if (name == "comparison") o = suite_comparison(ctx);
      else if (name == "convergence") o = suite_convergence(ctx);
      res.status = o.passed ? "passed" : "failed";
      res.metrics = o.metrics.dump();
      res.artifacts = o.artifacts;
    } catch (const std::exception& e) {
      res.status = "error";
      res.error = e.what();
      res.metrics = "{}";
      rec.completed = false;
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rec.suites.push_back(std::move(res));
  }

  json summary;
  summary["config"] = json::parse(rec.config);
  summary["completed"] = rec.completed;
  summary["all_passed"] = rec.all_passed();
  summary["suites"] = json::array();
  json timing = json::object();
  for (const auto& s : rec.suites) {
    summary["suites"].push_back({{"name", s.name},
                                 {"status", s.status},
                                 {"metrics", json::parse(s.metrics)},
                                 {"artifacts", s.artifacts},
                                 {"error", s.error}});
    timing[s.name] = s.seconds;
  }
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  write_file(dir / "timing.json", timing.dump(2) + "\n");
  return rec;
}

RunRecord load_run_record(const std::string& path) {
  fs::path p(path);
  if (fs::is_directory(p)) p /= "summary.json";
  if (!fs::exists(p)) throw Error(ErrorCode::MissingArtifact, "no run summary at " + p.string());
  json j;
  try {
    j = json::parse(read_file(p));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigInvalid, "malformed summary " + p.string() + ": " + e.what());
  }
  RunRecord rec;
  rec.output_dir = p.parent_path().string();
  rec.config = j.at("config").dump(2);
  rec.completed = j.at("completed").get<bool>();
  json timing = json::object();
  if (fs::exists(p.parent_path() / "timing.json")) timing = json::parse(read_file(p.parent_path() / "timing.json"));
  for (const auto& s : j.at("suites")) {
    SuiteResult res;
    res.name = s.at("name").get<std::string>();
    res.status = s.at("status").get<std::string>();
    res.metrics = s.at("metrics").dump();
    res.artifacts = s.at("artifacts").get<std::vector<std::string>>();
    res.error = s.at("error").get<std::string>();
    res.seconds = timing.value(res.name, 0.0);
    rec.suites.push_back(std::move(res));
  }
  return rec;
}

PlotKind plot_kind_from_string(const std::string& name) {
  if (name == "profiles") return PlotKind::Profiles;
  if (name == "trajectory") return PlotKind::Trajectory;
  if (name == "envelopes") return PlotKind::Envelopes;
  if (name == "convergence") return PlotKind::Convergence;
  invalid("unknown plot kind '" + name + "' (valid: profiles, trajectory, envelopes, convergence)");
}

namespace {

fs::path require_artifact(const RunRecord& rec, const std::string& name) {
  for (const auto& s : rec.suites) {
    for (const auto& a : s.artifacts) {
      if (a == name) {
        const fs::path p = fs::path(rec.output_dir) / a;
        if (!fs::exists(p)) throw Error(ErrorCode::MissingArtifact, "artifact listed but absent: " + p.string());
        return p;
      }
    }
  }
  throw Error(ErrorCode::MissingArtifact, "run has no " + name + " artifact");
}

}  // namespace

std::vector<std::string> emit_plot_data(const RunRecord& record, PlotKind what) {
  const fs::path out = fs::path(record.output_dir) / "plots";
  std::vector<std::string> paths;
  auto emit = [&](const std::string& name, const std::string& text) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + out.string());
    write_file(out / name, text);
    paths.push_back((out / name).string());
  };
  switch (what) {
    case PlotKind::Profiles:
      emit("profiles.csv", read_file(require_artifact(record, "solution.csv")));
      break;
    case PlotKind::Envelopes:
      emit("envelopes.csv", read_file(require_artifact(record, "envelope.csv")));
      break;
    case PlotKind::Convergence:
      emit("convergence.csv", read_file(require_artifact(record, "convergence.csv")));
      break;
    case PlotKind::Trajectory: {
      const std::string csv = read_file(require_artifact(record, "trajectory.csv"));
      const json rep = json::parse(read_file(require_artifact(record, "riccati.json")));
      emit("trajectory.csv", csv);
      json side;
      side["tau"] = rep.at("tau");
      side["tau_quadrature"] = rep.at("tau_quadrature");
      side["blew_up"] = rep.at("blew_up");
      emit("trajectory.json", side.dump(2) + "\n");
      break;
    }
  }
  return paths;
}

}  // namespace hjb
