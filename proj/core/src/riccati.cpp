#include "hjb/riccati.hpp"

#include "hjb/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace hjb {

namespace {

constexpr double kBlowupPhi = 1e8;
constexpr double kTailTol = 5e-7;

double rhs_s(const RiccatiProblem& pr, double phi) {
  const double pc = pr.p_conj();
  return -(std::pow(std::abs(phi), pc) / pc - pr.rho);
}

// Bounds on the s-time needed to go from |phi| to infinity.
std::pair<double, double> tail_bounds(const RiccatiProblem& pr, double phi) {
  const double pc = pr.p_conj();
  const double a = std::abs(phi);
  const double lo = pc * std::pow(a, 1.0 - pc) / (pc - 1.0);
  const double hi = lo / (1.0 - pr.rho * pc / std::pow(a, pc));
  return {lo, hi};
}

double integrate(const std::function<double(double)>& f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  double err = 0.0;
  return gauss_kronrod<double, 31>::integrate(f, a, b, 20, 1e-13, &err);
}

}  // namespace

void RiccatiProblem::validate() const {
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidArgument, "p must exceed 1");
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw Error(ErrorCode::InvalidArgument, "rho must be >= 0");
  if (!(T > 0.0) || !std::isfinite(T)) throw Error(ErrorCode::InvalidArgument, "T must be positive");
  if (std::abs(p_conj() * (p - 1.0) - p) > 1e-12 * p) throw Error(ErrorCode::InvalidArgument, "p'(p-1) != p");
}

bool RiccatiProblem::blowup_predicted() const {
  return rho * p_conj() < 1.0 && T > quadrature_threshold(*this);
}

double quadrature_threshold(const RiccatiProblem& prob) {
  prob.validate();
  const double k = prob.rho * prob.p_conj();
  if (k >= 1.0) return std::numeric_limits<double>::infinity();
  // y = -1/w, v = w^{p'-1}: the integrand becomes p/(1 - k v^p) on [0,1].
  const double p = prob.p;
  return p * integrate([&](double v) { return 1.0 / (1.0 - k * std::pow(v, p)); }, 0.0, 1.0);
}

double quadrature_elapsed(const RiccatiProblem& prob, double phi) {
  prob.validate();
  if (phi > -1.0) throw Error(ErrorCode::InvalidArgument, "quadrature_elapsed needs phi <= -1");
  const double k = prob.rho * prob.p_conj();
  const double p = prob.p;
  // Same substitution; phi maps to v0 = |phi|^{-(p'-1)}.
  const double v0 = std::pow(std::abs(phi), -(prob.p_conj() - 1.0));
  return p * integrate([&](double v) { return 1.0 / (1.0 - k * std::pow(v, p)); }, v0, 1.0);
}

BlowUpReport riccati_solve(const RiccatiProblem& prob, double dt, bool assert_blowup) {
  prob.validate();
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  const double pc = prob.p_conj();
  if (assert_blowup && prob.rho * pc >= 1.0) {
    throw Error(ErrorCode::QuadratureDivergence, "blow-up asserted but rho p' >= 1");
  }

  BlowUpReport rep;
  rep.problem = prob;
  rep.dt = dt;
  rep.quadrature_threshold = quadrature_threshold(prob);
  if (std::isfinite(rep.quadrature_threshold) && prob.T > rep.quadrature_threshold) {
    rep.tau_quadrature = prob.T - rep.quadrature_threshold;
  }

  double s = 0.0, phi = -1.0;
  rep.t.push_back(prob.T);
  rep.phi.push_back(phi);
  while (s < prob.T) {
    double h = dt * std::min(1.0, std::pow(std::abs(phi), -(pc - 1.0)));
    bool last = false;
    if (s + h >= prob.T) {
      h = prob.T - s;
      last = true;
    }
    const double k1 = rhs_s(prob, phi);
    const double k2 = rhs_s(prob, phi + 0.5 * h * k1);
    const double k3 = rhs_s(prob, phi + 0.5 * h * k2);
    const double k4 = rhs_s(prob, phi + h * k3);
    phi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    s = last ? prob.T : s + h;
    if (!std::isfinite(phi)) break;
    rep.t.push_back(prob.T - s);
    rep.phi.push_back(phi);
    if (std::abs(phi) > kBlowupPhi && phi < 0.0) {
      const auto [lo, hi] = tail_bounds(prob, phi);
      if (hi < kTailTol && hi > 0.0) {
        rep.blew_up = true;
        rep.tau_lo = prob.T - s - hi;
        rep.tau_hi = prob.T - s - lo;
        rep.tau = 0.5 * (rep.tau_lo + rep.tau_hi);
        break;
      }
    }
  }
  if (rep.blew_up && rep.tau_lo <= 0.0) {
    // The singular time lies outside the horizon.
    rep.blew_up = false;
    rep.tau = rep.tau_lo = rep.tau_hi = std::numeric_limits<double>::quiet_NaN();
  }

  if (rep.blew_up) {
    const std::size_t n = rep.t.size();
    const std::size_t stride = std::max<std::size_t>(1, n / 20);
    for (std::size_t k = 0; k < n; k += stride) {
      if (rep.phi[k] > -1.0) continue;
      const double tq = prob.T - quadrature_elapsed(prob, rep.phi[k]);
      rep.trajectory_gap = std::max(rep.trajectory_gap, std::abs(tq - rep.t[k]));
    }
  }
  return rep;
}

std::string BlowUpReport::to_json() const {
  nlohmann::json j;
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  j["p"] = problem.p;
  j["rho"] = problem.rho;
  j["T"] = problem.T;
  j["dt"] = dt;
  j["blew_up"] = blew_up;
  j["tau"] = num(tau);
  j["tau_quadrature"] = num(tau_quadrature);
  j["quadrature_threshold"] = num(quadrature_threshold);
  j["bracket_width"] = blew_up ? nlohmann::json(bracket_width()) : nlohmann::json(nullptr);
  j["trajectory_gap"] = trajectory_gap;
  j["samples"] = t.size();
  return j.dump(2);
}

std::string BlowUpReport::trajectory_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "t,phi\n";
  for (std::size_t k = 0; k < t.size(); ++k) os << t[k] << ',' << phi[k] << '\n';
  return os.str();
}

RiccatiTrajectory::RiccatiTrajectory(const RiccatiProblem& prob, double dt)
    : prob_(prob), report_(riccati_solve(prob, dt)) {
  const std::size_t n = report_.t.size();
  s_.resize(n);
  d1_.resize(n);
  d2_.resize(n);
  const double pc = prob.p_conj();
  for (std::size_t k = 0; k < n; ++k) {
    s_[k] = prob.T - report_.t[k];
    const double f = rhs_s(prob, report_.phi[k]);
    d1_[k] = f;
    // d/ds of rhs_s is -|phi|^{p'-2} phi, times dphi/ds.
    const double ph = report_.phi[k];
    d2_[k] = -std::pow(std::abs(ph), pc - 2.0) * ph * f;
  }
  t_min_ = report_.blew_up ? report_.tau_hi : report_.t.back();
}

void RiccatiTrajectory::locate(double t, std::size_t& k, double& theta, double& hs) const {
  if (report_.blew_up && t <= report_.tau_hi) throw Error(ErrorCode::BeyondBlowUp, "t is at or before blow-up");
  if (t > prob_.T || t < report_.t.back()) throw Error(ErrorCode::BeyondBlowUp, "t outside the trajectory");
  const double s = prob_.T - t;
  const auto it = std::upper_bound(s_.begin(), s_.end(), s);
  k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - s_.begin()) - 1));
  if (k + 1 >= s_.size()) k = s_.size() - 2;
  hs = s_[k + 1] - s_[k];
  theta = (s - s_[k]) / hs;
}

namespace {

// Quintic Hermite basis on [0,1] and its derivative.
void hermite5(double x, double b[6], double db[6]) {
  const double x2 = x * x, x3 = x2 * x, x4 = x3 * x, x5 = x4 * x;
  b[0] = 1 - 10 * x3 + 15 * x4 - 6 * x5;
  b[1] = x - 6 * x3 + 8 * x4 - 3 * x5;
  b[2] = 0.5 * x2 - 1.5 * x3 + 1.5 * x4 - 0.5 * x5;
  b[3] = 10 * x3 - 15 * x4 + 6 * x5;
  b[4] = -4 * x3 + 7 * x4 - 3 * x5;
  b[5] = 0.5 * x3 - x4 + 0.5 * x5;
  db[0] = -30 * x2 + 60 * x3 - 30 * x4;
  db[1] = 1 - 18 * x2 + 32 * x3 - 15 * x4;
  db[2] = x - 4.5 * x2 + 6 * x3 - 2.5 * x4;
  db[3] = 30 * x2 - 60 * x3 + 30 * x4;
  db[4] = -12 * x2 + 28 * x3 - 15 * x4;
  db[5] = 1.5 * x2 - 4 * x3 + 2.5 * x4;
}

}  // namespace

double RiccatiTrajectory::phi(double t) const {
  std::size_t k;
  double th, h;
  locate(t, k, th, h);
  double b[6], db[6];
  hermite5(th, b, db);
  const auto& y = report_.phi;
  return b[0] * y[k] + b[1] * h * d1_[k] + b[2] * h * h * d2_[k] + b[3] * y[k + 1] + b[4] * h * d1_[k + 1] +
         b[5] * h * h * d2_[k + 1];
}

double RiccatiTrajectory::dphi(double t) const {
  std::size_t k;
  double th, h;
  locate(t, k, th, h);
  double b[6], db[6];
  hermite5(th, b, db);
  const auto& y = report_.phi;
  const double ds = (db[0] * y[k] + db[1] * h * d1_[k] + db[2] * h * h * d2_[k] + db[3] * y[k + 1] +
                     db[4] * h * d1_[k + 1] + db[5] * h * h * d2_[k + 1]) /
                    h;
  return -ds;
}

double lp_value_residual(const RiccatiTrajectory& traj, double x, double t) {
  const auto& pr = traj.report().problem;
  const double ax = std::abs(x);
  if (ax == 0.0) {
    (void)traj.phi(t);  // still enforce the time-domain precondition
    return 0.0;
  }
  const double pc = pr.p_conj();
  const double ph = traj.phi(t);
  const double w_t = traj.dphi(t) * std::pow(ax, pr.p);
  const double w_x = pr.p * ph * std::pow(ax, pr.p - 1.0);
  const double ham = std::pow(pr.p, -pc) * std::pow(std::abs(w_x), pc) / pc;
  return std::abs(-w_t + ham - pr.rho * std::pow(ax, pr.p));
}

double lp_value_residual(const RiccatiProblem& prob, double x, double t, double dt) {
  return lp_value_residual(RiccatiTrajectory(prob, dt), x, t);
}

}  // namespace hjb
