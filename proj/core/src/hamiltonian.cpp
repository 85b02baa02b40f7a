#include "hjb/hamiltonian.hpp"

#include "hjb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hjb {

double legendre_power(double nu, double m, const Vec& q) {
  if (!(nu > 0.0) || !(m > 1.0)) throw Error(ErrorCode::InvalidArgument, "legendre_power needs nu > 0, m > 1");
  const double qn = q.norm();
  if (qn == 0.0) return 0.0;
  // Maximiser |alpha| = (|q|/(nu m))^{1/(m-1)} along q.
  const double mc = m / (m - 1.0);
  return (1.0 - 1.0 / m) * std::pow(qn, mc) * std::pow(nu * m, -1.0 / (m - 1.0));
}

double control_radius(const ProblemSpec& spec, const Vec& q, const Mat& X) {
  const auto& c = spec.constants;
  if (!(c.nu > 0.0)) throw Error(ErrorCode::NonCoercive, "nu must be positive");
  const double xnorm = X.size() == 0 ? 0.0 : X.operatorNorm();
  const double lead = (q.norm() * c.C_b + xnorm * c.C_sigma * c.C_sigma + c.C_ell) * 2.0 / c.nu;
  const double r = std::pow(lead, 1.0 / (spec.p - 1.0));
  if (!std::isfinite(r)) throw Error(ErrorCode::NonCoercive, "control radius is not finite");
  return std::max(1.0, r);
}

std::vector<Vec> probe_directions(int dim) {
  std::vector<Vec> out;
  out.reserve(8);
  for (int k = 0; k < 8; ++k) {
    Vec d(dim);
    for (int j = 0; j < dim; ++j) d[j] = std::cos(std::numbers::pi * k / 4.0 + 2.399963 * j);
    const double n = d.norm();
    if (n < 1e-12) d = Vec::Unit(dim, 0) * (k < 4 ? 1.0 : -1.0);
    else d /= n;
    out.push_back(d);
  }
  return out;
}

namespace {

// Golden-section maximisation of a unimodal slice on [lo, hi].
double golden_max(const std::function<double(double)>& g, double lo, double hi, int iters, double& best_val) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = g(c), fd = g(d);
  for (int i = 0; i < iters; ++i) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - r * (b - a); fc = g(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + r * (b - a); fd = g(d);
    }
  }
  const double xm = fc > fd ? c : d;
  best_val = std::max(fc, fd);
  return xm;
}

}  // namespace

ControlSearchResult maximize_over_controls(const std::function<double(const Vec&)>& objective, int dim,
                                           double a_max, const HamiltonianOptions& options) {
  if (dim < 1 || dim > kMaxDim) throw Error(ErrorCode::DimensionMismatch, "control dimension out of range");

  for (const Vec& d : probe_directions(dim)) {
    const double near = objective(2.0 * a_max * d);
    const double far = objective(10.0 * a_max * d);
    if (!std::isfinite(far) || far > near + options.divergence_margin * (1.0 + std::abs(near))) {
      return {ExtendedReal::pos_infinity(), 10.0 * a_max * d};
    }
  }

  const int n = std::max(2, options.points_per_dim);
  const double cell = 2.0 * a_max / (n - 1);
  Vec alpha(dim), best(dim);
  best.setZero();
  double best_val = objective(best);
  long total = 1;
  for (int j = 0; j < dim; ++j) total *= n;
  for (long k = 0; k < total; ++k) {
    long rest = k;
    for (int j = 0; j < dim; ++j) {
      alpha[j] = -a_max + cell * static_cast<double>(rest % n);
      rest /= n;
    }
    if (alpha.norm() > a_max * (1.0 + 1e-12)) continue;
    const double v = objective(alpha);
    if (v > best_val) {
      best_val = v;
      best = alpha;
    }
  }

  // Coordinate sweeps of golden-section refinement inside the best cell.
  const int sweeps = dim == 1 ? 1 : 3;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (int j = 0; j < dim; ++j) {
      Vec trial = best;
      auto slice = [&](double s) {
        trial[j] = s;
        return objective(trial);
      };
      double val = 0.0;
      const double s = golden_max(slice, best[j] - cell, best[j] + cell, options.refine_iterations, val);
      if (val > best_val) {
        best_val = val;
        best[j] = s;
      }
    }
  }
  return {ExtendedReal(best_val), best};
}

namespace {

ExtendedReal power_form_eval(const ProblemSpec& spec, const PowerForm& pf, const Vec& x, double t, const Vec& q,
                             const Mat& X, bool& handled) {
  handled = true;
  const int n = spec.space_dim;
  const Vec b0 = pf.b0 ? pf.b0(x, t) : Vec::Zero(n);
  const double l0 = pf.ell0 ? pf.ell0(x, t) : 0.0;
  const Mat a0 = pf.a0 ? pf.a0(x, t) : Mat::Zero(n, n);
  const double base = -b0.dot(q) - l0 - (a0 * X).trace();
  const Vec lin = -pf.drift_gain * q;
  const double quad = pf.diffusion_gain * X.trace();
  if (pf.diffusion_gain == 0.0 || quad == 0.0) {
    if (spec.control_dim != n) {
      handled = false;
      return {};
    }
    return ExtendedReal(base + legendre_power(pf.cost_weight, spec.p, lin));
  }
  if (spec.p == 2.0) {
    const double a = pf.cost_weight + quad;
    if (a > 0.0) return ExtendedReal(base + lin.squaredNorm() / (4.0 * a));
    if (a < 0.0) return ExtendedReal::pos_infinity();
    return lin.squaredNorm() == 0.0 ? ExtendedReal(base) : ExtendedReal::pos_infinity();
  }
  if (spec.p < 2.0 && quad < 0.0) return ExtendedReal::pos_infinity();
  handled = false;
  return {};
}

}  // namespace

ExtendedReal hamiltonian_eval(const ProblemSpec& spec, const Vec& x, double t, const Vec& q, const Mat& X,
                              const HamiltonianOptions& options) {
  const int n = spec.space_dim;
  if (!spec.controlled()) throw Error(ErrorCode::DimensionMismatch, "hamiltonian_eval needs a controlled problem");
  if (x.size() != n || q.size() != n || X.rows() != n || X.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "x, q, X must match space_dim");
  }
  if (!(spec.constants.nu > 0.0)) throw Error(ErrorCode::NonCoercive, "nu must be positive");

  if (options.allow_analytic && spec.power_form) {
    bool handled = false;
    const ExtendedReal r = power_form_eval(spec, *spec.power_form, x, t, q, X, handled);
    if (handled) return r;
  }

  const double a_max = control_radius(spec, q, X);
  auto objective = [&](const Vec& alpha) { return control_objective(spec, x, t, q, X, alpha); };
  return maximize_over_controls(objective, spec.control_dim, a_max, options).value;
}

}  // namespace hjb
