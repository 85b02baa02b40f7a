#include "hjb/manufactured.hpp"

#include "hjb/errors.hpp"
#include "hjb/hamiltonian.hpp"

#include <cmath>
#include <string>

namespace hjb {

ManufacturedKind manufactured_kind_from_string(std::string_view name) {
  if (name == "gaussian_decay") return ManufacturedKind::GaussianDecay;
  if (name == "polynomial_p_growth") return ManufacturedKind::PolynomialPGrowth;
  if (name == "separated_sine") return ManufacturedKind::SeparatedSine;
  throw Error(ErrorCode::UnknownKind, "unknown manufactured kind '" + std::string(name) +
                                          "' (valid: gaussian_decay, polynomial_p_growth, separated_sine)");
}

std::string_view to_string(ManufacturedKind kind) {
  switch (kind) {
    case ManufacturedKind::GaussianDecay: return "gaussian_decay";
    case ManufacturedKind::PolynomialPGrowth: return "polynomial_p_growth";
    case ManufacturedKind::SeparatedSine: return "separated_sine";
  }
  return "unknown";
}

namespace {

std::function<Jet(const Vec&, double)> make_jet(ManufacturedKind kind, const ManufacturedParams& prm, int n,
                                                double spec_p) {
  const double A = prm.amplitude;
  switch (kind) {
    case ManufacturedKind::SeparatedSine: {
      Vec k = prm.k.size() == n ? prm.k : Vec(Vec::Ones(n));
      const double lam = prm.lambda < 0.0 ? k.squaredNorm() : prm.lambda;
      return [A, k, lam](const Vec& x, double t) {
        const double e = A * std::exp(-lam * t);
        const double s = std::sin(k.dot(x)), c = std::cos(k.dot(x));
        Jet j;
        j.value = e * s;
        j.dt = -lam * e * s;
        j.grad = e * c * k;
        j.hess = -e * s * (k * k.transpose());
        return j;
      };
    }
    case ManufacturedKind::GaussianDecay: {
      const double t0 = prm.t0;
      return [A, t0, n](const Vec& x, double t) {
        const double tau = t + t0;
        const double r2 = x.squaredNorm();
        const double v = A * std::pow(t0 / tau, 0.5 * n) * std::exp(-r2 / (4.0 * tau));
        Jet j;
        j.value = v;
        j.dt = v * (-0.5 * n / tau + r2 / (4.0 * tau * tau));
        j.grad = -v / (2.0 * tau) * x;
        j.hess = v * ((x * x.transpose()) / (4.0 * tau * tau) - Mat::Identity(n, n) / (2.0 * tau));
        return j;
      };
    }
    case ManufacturedKind::PolynomialPGrowth: {
      const double p = prm.p > 0.0 ? prm.p : spec_p;
      return [A, p, n](const Vec& x, double t) {
        const double w2 = 1.0 + x.squaredNorm();
        const double g = std::pow(w2, 0.5 * p);
        Jet j;
        j.value = A * g * (1.0 + t);
        j.dt = A * g;
        j.grad = A * (1.0 + t) * p * std::pow(w2, 0.5 * p - 1.0) * x;
        j.hess = A * (1.0 + t) * p * std::pow(w2, 0.5 * p - 1.0) *
                 (Mat::Identity(n, n) + (p - 2.0) / w2 * (x * x.transpose()));
        return j;
      };
    }
  }
  throw Error(ErrorCode::UnknownKind, "unknown manufactured kind");
}

}  // namespace

ManufacturedSolution manufactured_solution(ManufacturedKind kind, const ManufacturedParams& params,
                                           const ProblemSpec& spec) {
  const int n = spec.space_dim;
  ManufacturedSolution out;
  out.jet = make_jet(kind, params, n, spec.p);
  auto jet = out.jet;
  out.u = [jet](const Vec& x, double t) { return jet(x, t).value; };
  out.forcing = [jet, spec](const Vec& x, double t) {
    const Jet j = jet(x, t);
    if (!spec.controlled()) return model_residual(spec, j, x, t);
    const ExtendedReal h = hamiltonian_eval(spec, x, t, j.grad, j.hess);
    if (!h.is_finite()) throw Error(ErrorCode::NonFiniteValue, "Hamiltonian is +inf at the manufactured jet");
    return j.dt + h.value() + spec.f(x, t, j.value, spec.grad_weight(x, t) * j.grad);
  };
  return out;
}

}  // namespace hjb
