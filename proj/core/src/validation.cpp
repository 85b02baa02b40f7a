#include "hjb/validation.hpp"

#include "hjb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace hjb {

bool ValidationReport::has_violation(const std::string& check) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.check == check; });
}

namespace {

constexpr double kConvexTol = 1e-10;

// Relative slack for growth-type inequalities evaluated in floating point.
double slack(double rhs) { return 1e-12 * (1.0 + std::abs(rhs)); }

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  Vec ball(int dim, double radius) {
    std::normal_distribution<double> n(0.0, 1.0);
    Vec v(dim);
    for (int j = 0; j < dim; ++j) v[j] = n(rng_);
    const double nrm = v.norm();
    if (nrm == 0.0) return Vec::Zero(dim);
    const double r = radius * std::pow(uni(0.0, 1.0), 1.0 / dim);
    return v * (r / nrm);
  }

  double uni(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

ValidationReport validate_assumptions(const ProblemSpec& spec, int sample_count, double domain_radius,
                                      std::uint64_t seed) {
  if (sample_count < 1) throw Error(ErrorCode::InvalidArgument, "sample_count must be >= 1");
  spec.validate();
  const auto& c = spec.constants;
  const int n = spec.space_dim;
  const double p = spec.p, pc = spec.p_conj();
  Sampler rng(seed);
  ValidationReport rep;
  rep.samples = sample_count;

  auto record = [&](const char* check, const Vec& x, double t, double lhs, double rhs, const std::string& d) {
    rep.violations.push_back({check, x, t, lhs, rhs, d});
  };

  if (spec.controlled()) {
    rep.checks_run = {"coercivity", "drift_growth", "sigma_growth"};
  }
  for (const char* name : {"s_bound", "s_lipschitz", "convexity", "f_growth", "u_lipschitz"}) {
    rep.checks_run.emplace_back(name);
  }

  for (int i = 0; i < sample_count; ++i) {
    const Vec x = rng.ball(n, domain_radius);
    const Vec y = rng.ball(n, domain_radius);
    const double t = rng.uni(0.0, spec.horizon);
    const double xp = std::pow(x.norm(), p);

    if (spec.controlled()) {
      const Vec a = rng.ball(spec.control_dim, domain_radius);
      const double an = a.norm();
      const double ell = spec.running_cost(x, t, a);
      const double lower = c.nu * std::pow(an, p) - c.C_ell * (1.0 + xp);
      if (ell < lower - slack(lower)) record("coercivity", x, t, lower, ell, "ell below nu|a|^p - C_ell(1+|x|^p)");
      const double bn = spec.drift(x, t, a).norm();
      const double bmax = c.C_b * (1.0 + x.norm() + an);
      if (bn > bmax + slack(bmax)) record("drift_growth", x, t, bn, bmax, "|b| exceeds C_b(1+|x|+|a|)");
      const double sn = spec.sigma(x, t, a).norm();
      const double smax = c.C_sigma * (1.0 + x.norm() + an);
      if (sn > smax + slack(smax)) record("sigma_growth", x, t, sn, smax, "|sigma| exceeds C_sigma(1+|x|+|a|)");
    }

    const Mat sx = spec.grad_weight(x, t);
    const double sxn = sx.norm();
    if (sxn > c.C_s + slack(c.C_s)) record("s_bound", x, t, sxn, c.C_s, "|s| exceeds C_s");
    const double dxy = (x - y).norm();
    if (dxy > 0.0) {
      const double q = (sx - spec.grad_weight(y, t)).norm() / dxy;
      if (q > c.C_s + slack(c.C_s)) record("s_lipschitz", x, t, q, c.C_s, "Lipschitz quotient of s exceeds C_s");
    }

    const double u = rng.uni(-domain_radius, domain_radius);
    const Vec z1 = rng.ball(n, domain_radius);
    const Vec z2 = rng.ball(n, domain_radius);
    const double fm = spec.f(x, t, u, 0.5 * (z1 + z2));
    const double avg = 0.5 * (spec.f(x, t, u, z1) + spec.f(x, t, u, z2));
    if (fm > avg + kConvexTol) {
      std::ostringstream os;
      os << "midpoint convexity fails for z1=" << z1.transpose() << " z2=" << z2.transpose();
      record("convexity", x, t, fm, avg, os.str());
    }

    const double f1 = spec.f(x, t, u, z1);
    const double gmax = c.C_f * (1.0 + xp + std::abs(u) + std::pow(z1.norm(), pc));
    if (std::abs(f1) > gmax + slack(gmax)) record("f_growth", x, t, std::abs(f1), gmax, "|f| exceeds growth bound");

    const double u2 = rng.uni(-domain_radius, domain_radius);
    if (u2 != u) {
      const double q = std::abs(f1 - spec.f(x, t, u2, z1));
      const double lip = c.C_hat * std::abs(u - u2);
      if (q > lip + slack(lip) + 1e-12 * std::abs(f1)) record("u_lipschitz", x, t, q, lip, "f not C_hat-Lipschitz in u");
    }
  }
  return rep;
}

}  // namespace hjb
