#include "hjb/auxiliary.hpp"

#include "hjb/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hjb {

namespace {

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

template <class F>
double composite_gauss(F&& f, double a, double b, int panels) {
  using boost::math::quadrature::gauss;
  const double w = (b - a) / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) sum += gauss<double, 16>::integrate(f, a + i * w, a + (i + 1) * w);
  return sum;
}

}  // namespace

AuxiliaryValue auxiliary_phi(double R, double r, double t, int quad_points) {
  if (!(R > 0.0)) throw Error(ErrorCode::NonPositiveR, "R must be positive");
  if (!(r >= 0.0) || !(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "need r >= 0 and t >= 0");
  if (quad_points < 64) throw Error(ErrorCode::InvalidArgument, "quad_points must be >= 64");

  AuxiliaryValue out;
  if (r == 0.0) return out;
  if (t == 0.0) {
    out.value = std::max(0.0, r - R);
    out.dr = r > R ? 1.0 : 0.0;
    out.dt = out.dr * r;
    return out;
  }

  const double y = std::log(r);
  const double sd = std::sqrt(2.0 * t);
  const double xk = (std::log(R) - y) / sd;
  const double lo = std::max(xk, -12.0);
  const double hi = 12.0 + sd;
  if (lo >= hi) return out;
  const int panels = std::max(4, quad_points / 16);

  // Both moments are taken in the form r e^{sd xi} so they stay accurate for
  // large r.
  const double value = composite_gauss(
      [&](double xi) { return (r * std::exp(sd * xi) - R) * normal_pdf(xi); }, lo, hi, panels);
  const double uy = composite_gauss([&](double xi) { return r * std::exp(sd * xi) * normal_pdf(xi); }, lo, hi,
                                    panels);
  const double kink = xk > -12.0 ? R * normal_pdf(xk) / sd : 0.0;

  out.value = std::max(0.0, value);
  out.dr = uy / r;
  out.drr = kink / (r * r);
  out.dt = uy + kink;
  return out;
}

double AuxiliaryProfile::at(double x) const {
  if (r.empty()) throw Error(ErrorCode::InvalidArgument, "empty profile");
  if (!(x >= 0.0) || x > r.back()) throw Error(ErrorCode::InvalidArgument, "r outside the finite-difference domain");
  const auto it = std::upper_bound(r.begin(), r.end(), x);
  if (it == r.end()) return value.back();
  const std::size_t i = static_cast<std::size_t>(it - r.begin()) - 1;
  const double th = (x - r[i]) / (r[i + 1] - r[i]);
  return (1.0 - th) * value[i] + th * value[i + 1];
}

AuxiliaryProfile auxiliary_fd_profile(double R, double t, int nodes, int time_steps) {
  if (!(R > 0.0)) throw Error(ErrorCode::NonPositiveR, "R must be positive");
  if (nodes < 5 || time_steps < 1 || !(t >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "bad finite-difference parameters");
  }
  // Geometric nodes on [R e^{-W}, R e^{W}]; beyond them phi and r^2 phi_rr
  // are below double precision relative to R.
  const double W = 8.0 * std::sqrt(2.0 * std::max(t, 0.01)) + 2.0;
  const int n = nodes - 1;
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) r[i] = R * std::exp(-W + 2.0 * W * i / (n - 1));
  std::vector<double> u(n);
  for (int i = 0; i < n; ++i) u[i] = std::max(0.0, r[i] - R);

  if (t > 0.0) {
    // Three-point weights of L u = r^2 u_rr + r u_r on the stretched grid.
    std::vector<double> wl(n, 0.0), wc(n, 0.0), wr(n, 0.0);
    for (int i = 1; i < n - 1; ++i) {
      const double hm = r[i] - r[i - 1], hp = r[i + 1] - r[i], den = hm * hp * (hm + hp);
      const double r2 = r[i] * r[i];
      wl[i] = (2.0 * r2 * hp - r[i] * hp * hp) / den;
      wr[i] = (2.0 * r2 * hm + r[i] * hm * hm) / den;
      wc[i] = -wl[i] - wr[i];
    }
    // Outer node: u_rr = 0 leaves u_t = r u_r, one-sided.
    wl[n - 1] = -r[n - 1] / (r[n - 1] - r[n - 2]);
    wc[n - 1] = -wl[n - 1];
    // Inner node is held at phi = 0.

    std::vector<double> a(n), b(n), c(n), d(n);
    // Solves (I - theta_k L) x = rhs in place.
    auto implicit = [&](double theta_k, std::vector<double>& x) {
      for (int i = 0; i < n; ++i) {
        a[i] = -theta_k * wl[i];
        b[i] = 1.0 - theta_k * wc[i];
        c[i] = -theta_k * wr[i];
      }
      a[0] = c[0] = 0.0;
      b[0] = 1.0;
      x[0] = 0.0;
      for (int i = 1; i < n; ++i) {
        const double m = a[i] / b[i - 1];
        b[i] -= m * c[i - 1];
        x[i] -= m * x[i - 1];
      }
      x[n - 1] /= b[n - 1];
      for (int i = n - 2; i >= 0; --i) x[i] = (x[i] - c[i] * x[i + 1]) / b[i];
    };

    const double k = t / time_steps;
    // Rannacher start: four implicit Euler quarter steps replace the first step.
    for (int q = 0; q < 4; ++q) implicit(0.25 * k, u);
    for (int s = 1; s < time_steps; ++s) {
      for (int i = 0; i < n; ++i) {
        double lu = wc[i] * u[i];
        if (i > 0) lu += wl[i] * u[i - 1];
        if (i < n - 1) lu += wr[i] * u[i + 1];
        d[i] = u[i] + 0.5 * k * lu;
      }
      implicit(0.5 * k, d);
      u.swap(d);
    }
  }

  AuxiliaryProfile out;
  out.r.reserve(nodes);
  out.value.reserve(nodes);
  out.r.push_back(0.0);
  out.value.push_back(0.0);
  out.r.insert(out.r.end(), r.begin(), r.end());
  out.value.insert(out.value.end(), u.begin(), u.end());
  return out;
}

double auxiliary_fd_value(double R, double r, double t, int nodes, int time_steps) {
  return auxiliary_fd_profile(R, t, nodes, time_steps).at(r);
}

}  // namespace hjb
