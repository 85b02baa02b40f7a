#pragma once

#include <hjb/problem.hpp>

#include <cmath>
#include <random>

namespace hjb::test {

inline Vec vec1(double a) {
  Vec v(1);
  v << a;
  return v;
}

inline Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

inline Mat mat1(double a) {
  Mat m(1, 1);
  m << a;
  return m;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::max(std::abs(a), std::abs(b))); }

// Fourth-order central differences of a space-time function.
template <class F>
Jet fd_jet(F&& u, const Vec& x, double t, double h = 1e-3) {
  const int n = static_cast<int>(x.size());
  auto d1 = [&](auto&& g) { return (-g(2 * h) + 8 * g(h) - 8 * g(-h) + g(-2 * h)) / (12 * h); };
  Jet j;
  j.value = u(x, t);
  j.dt = d1([&](double s) { return u(x, t + s); });
  j.grad = Vec::Zero(n);
  j.hess = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    const Vec ea = Vec::Unit(n, a);
    j.grad[a] = d1([&](double s) { return u(Vec(x + s * ea), t); });
    for (int b = 0; b < n; ++b) {
      const Vec eb = Vec::Unit(n, b);
      j.hess(a, b) = d1([&](double s) {
        return d1([&](double r) { return u(Vec(x + s * ea + r * eb), t); });
      });
    }
  }
  return j;
}

}  // namespace hjb::test
