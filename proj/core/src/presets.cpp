#include "hjb/presets.hpp"

#include "hjb/errors.hpp"

#include <json.hpp>

#include <cmath>

namespace hjb {

const std::vector<PresetDescriptor>& preset_registry() {
  static const std::vector<PresetDescriptor> table = {
      {"eq3_lq", "control", "b = a, sigma = |a|/sqrt2 I, ell = |a|^2, f = 0, psi = (1+|x|^2)^{1/2}",
       {{"N", 1}, {"T", 1}},
       {"validate", "barriers", "solve", "comparison"},
       true, false, false, true},
      {"power_model", "model", "sigma = I, b = 0, s = I, f = |z|^{p'} + g, psi = cos|x|",
       {{"N", 1}, {"p", 2}, {"T", 1}, {"g", 0}},
       {"validate", "barriers", "oracles", "solve", "comparison", "convergence"},
       false, false, false, true},
      {"lp_deterministic", "model",
       "sigma = 0, b = 0, f = p^{-p'}|z|^{p'}/p' - rho|x|^p, psi = -|x|^p (time-reversed value function)",
       {{"N", 1}, {"p", 2}, {"rho", 0}, {"T", 5}},
       {"validate", "barriers", "oracles", "solve", "comparison", "convergence"},
       false, true, true, false},
      {"briand_hu", "model", "sigma = sigma0 I, b = theta x, s = sigma, f = |z|^2/2 - lambda u, psi = (1+|x|^2)^{3/4}",
       {{"N", 1}, {"T", 1}, {"sigma0", 1}, {"theta", 0.5}, {"lambda", 1}},
       {"validate", "barriers", "oracles", "solve", "comparison", "convergence"},
       false, false, false, true},
  };
  return table;
}

const PresetDescriptor& find_preset(const std::string& name) {
  for (const auto& d : preset_registry())
    if (d.name == name) return d;
  std::string valid;
  for (const auto& d : preset_registry()) valid += (valid.empty() ? "" : ", ") + d.name;
  throw Error(ErrorCode::UnknownPreset, "unknown preset '" + name + "' (valid: " + valid + ")");
}

namespace {

void invalid(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

Mat identity(int n) { return Mat::Identity(n, n); }

}  // namespace

ProblemSpec make_preset(const std::string& name, const std::map<std::string, double>& params) {
  const PresetDescriptor& d = find_preset(name);
  std::map<std::string, double> v = d.defaults;
  for (const auto& [k, val] : params) {
    if (!v.count(k)) invalid("parameter '" + k + "' does not apply to preset " + name);
    if (!std::isfinite(val)) invalid("parameter '" + k + "' must be finite");
    v[k] = val;
  }
  const double Nd = v.at("N");
  if (Nd != std::floor(Nd) || Nd < 1 || Nd > kMaxDim) invalid("N must be an integer in [1, 8]");
  const int N = static_cast<int>(Nd);
  if (!(v.at("T") > 0.0)) invalid("T must be positive");
  if (v.count("p") && !(v.at("p") > 1.0)) invalid("p must exceed 1");
  if (v.count("rho") && !(v.at("rho") >= 0.0)) invalid("rho must be >= 0");
  if (v.count("sigma0") && !(v.at("sigma0") >= 0.0)) invalid("sigma0 must be >= 0");
  if (v.count("lambda") && !(v.at("lambda") >= 0.0)) invalid("lambda must be >= 0");

  ProblemSpec s;
  s.name = name;
  s.space_dim = N;
  s.horizon = v.at("T");
  s.grad_weight = [N](const Vec&, double) { return identity(N); };
  AssumptionConstants& c = s.constants;
  c.chi = [](const Vec&) { return 0.0; };
  c.gamma = [](const Vec&) { return 0.0; };

  if (name == "eq3_lq") {
    s.p = 2.0;
    s.control_dim = N;
    s.drift = [](const Vec&, double, const Vec& a) { return a; };
    s.sigma = [N](const Vec&, double, const Vec& a) { return Mat(a.norm() / std::sqrt(2.0) * identity(N)); };
    s.running_cost = [](const Vec&, double, const Vec& a) { return a.squaredNorm(); };
    s.f = [](const Vec&, double, double, const Vec&) { return 0.0; };
    s.initial = [](const Vec& x) { return japanese_bracket(x); };
    c.C_b = 1.0;
    c.C_sigma = std::sqrt(N / 2.0);
    c.C_ell = 1.0;
    c.nu = 1.0;
    c.C_s = std::sqrt(static_cast<double>(N));
    PowerForm pf;
    pf.drift_gain = 1.0;
    pf.cost_weight = 1.0;
    pf.diffusion_gain = 0.5;
    s.power_form = pf;
  } else if (name == "power_model") {
    s.p = v.at("p");
    const double pc = s.p_conj();
    const double g = v.at("g");
    s.drift = [N](const Vec&, double, const Vec&) { return Vec(Vec::Zero(N)); };
    s.sigma = [N](const Vec&, double, const Vec&) { return identity(N); };
    s.f = [pc, g](const Vec&, double, double, const Vec& z) { return std::pow(z.norm(), pc) + g; };
    s.initial = [](const Vec& x) { return std::cos(x.norm()); };
    c.C_sigma = std::sqrt(static_cast<double>(N));
    c.C_s = std::sqrt(static_cast<double>(N));
    c.C_f = std::max(1.0, std::abs(g));
  } else if (name == "lp_deterministic") {
    s.p = v.at("p");
    const double p = s.p, pc = s.p_conj(), rho = v.at("rho");
    const double w = std::pow(p, -pc) / pc;
    s.drift = [N](const Vec&, double, const Vec&) { return Vec(Vec::Zero(N)); };
    s.sigma = [N](const Vec&, double, const Vec&) { return Mat(Mat::Zero(N, N)); };
    s.f = [w, pc, rho, p](const Vec& x, double, double, const Vec& z) {
      return w * std::pow(z.norm(), pc) - rho * std::pow(x.norm(), p);
    };
    s.initial = [p](const Vec& x) { return -std::pow(x.norm(), p); };
    c.C_s = std::sqrt(static_cast<double>(N));
    c.C_f = std::max(w, rho);
    c.gamma = [p](const Vec& x) { return std::pow(x.norm(), p); };
  } else if (name == "briand_hu") {
    s.p = 2.0;
    const double s0 = v.at("sigma0"), th = v.at("theta"), lam = v.at("lambda");
    s.drift = [th](const Vec& x, double, const Vec&) { return Vec(th * x); };
    s.sigma = [N, s0](const Vec&, double, const Vec&) { return Mat(s0 * identity(N)); };
    s.grad_weight = [N, s0](const Vec&, double) { return Mat(s0 * identity(N)); };
    s.f = [lam](const Vec&, double, double u, const Vec& z) { return 0.5 * z.squaredNorm() - lam * u; };
    s.initial = [](const Vec& x) { return std::pow(1.0 + x.squaredNorm(), 0.75); };
    c.C_b = std::abs(th);
    c.C_sigma = s0 * std::sqrt(static_cast<double>(N));
    c.C_s = s0 * std::sqrt(static_cast<double>(N));
    c.C_f = std::max(0.5, lam);
    c.C_hat = lam;
  }
  s.validate();
  return s;
}

ProblemSpec problem_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    invalid(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("preset") || !j["preset"].is_string()) invalid("missing string field 'preset'");
  std::map<std::string, double> params;
  if (j.contains("params")) {
    if (!j["params"].is_object()) invalid("'params' must be an object");
    for (const auto& [k, val] : j["params"].items()) {
      if (!val.is_number()) invalid("parameter '" + k + "' must be a number");
      params[k] = val.get<double>();
    }
  }
  return make_preset(j["preset"].get<std::string>(), params);
}

}  // namespace hjb
