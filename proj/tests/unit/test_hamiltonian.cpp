#include "support.hpp"

#include <doctest.h>
#include <hjb/errors.hpp>
#include <hjb/hamiltonian.hpp>
#include <hjb/presets.hpp>

#include <random>

using namespace hjb;
using namespace hjb::test;

namespace {

// sup over a uniform 1D grid of <a,q> - nu|a|^m.
double grid_legendre(double nu, double m, double q, double lo, double hi, long n) {
  double best = -1e300;
  for (long i = 0; i < n; ++i) {
    const double a = lo + (hi - lo) * i / (n - 1);
    best = std::max(best, a * q - nu * std::pow(std::abs(a), m));
  }
  return best;
}

}  // namespace

TEST_CASE("legendre_power closed form") {
  CHECK(legendre_power(1.0, 2.0, vec1(2.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(legendre_power(3.0, 2.5, vec2(0.0, 0.0)) == 0.0);
  CHECK(legendre_power(0.7, 1.3, vec1(0.0)) == 0.0);
  const double grid = grid_legendre(1.0, 3.0, 1.0, -10.0, 10.0, 10'000'001);
  CHECK(rel_err(legendre_power(1.0, 3.0, vec1(1.0)), grid) <= 1e-8);
  CHECK_THROWS_AS(legendre_power(0.0, 2.0, vec1(1.0)), Error);
  CHECK_THROWS_AS(legendre_power(1.0, 1.0, vec1(1.0)), Error);
}

TEST_CASE("legendre_power depends on q only through |q|") {
  const double a = legendre_power(2.0, 1.7, vec2(3.0, 4.0));
  const double b = legendre_power(2.0, 1.7, vec1(5.0));
  CHECK(rel_err(a, b) < 1e-14);
}

TEST_CASE("conjugate identity |z|^{p'} through legendre_power") {
  // |z|^{p'} = legendre_power(nu*, p, z) with nu* = (1/p')^{p-1}/p.
  for (double p : {1.5, 2.0, 3.0}) {
    const double pc = p / (p - 1.0);
    const double nu = std::pow(1.0 / pc, p - 1.0) / p;
    for (double z : {0.3, 1.0, 4.0}) {
      CHECK(rel_err(legendre_power(nu, p, vec1(z)), std::pow(z, pc)) < 1e-12);
    }
  }
}

TEST_CASE("ExtendedReal arithmetic and order") {
  const ExtendedReal a(1.0), b(2.0), inf = ExtendedReal::pos_infinity();
  CHECK((a + b).value() == 3.0);
  CHECK((a + inf).is_pos_infinity());
  CHECK((inf + inf).is_pos_infinity());
  CHECK(a < b);
  CHECK(b < inf);
  CHECK(inf == ExtendedReal::pos_infinity());
  CHECK_FALSE(inf < inf);
}

TEST_CASE("eq3 Hamiltonian: examples") {
  const ProblemSpec s = make_preset("eq3_lq");
  CHECK(hamiltonian_eval(s, vec1(0.0), 0.0, vec1(0.0), mat1(-3.0)).is_pos_infinity());
  CHECK(hamiltonian_eval(s, vec1(0.0), 0.0, vec1(0.0), mat1(0.0)).value() == 0.0);

  // q = 1, X = 0: brute force over [-A_max, A_max], A_max = 4, with 10^6 points.
  const double a_max = control_radius(s, vec1(1.0), mat1(0.0));
  CHECK(a_max == doctest::Approx(4.0));
  double best = -1e300;
  const long n = 1'000'000;
  for (long i = 0; i < n; ++i) {
    const double a = -a_max + 2 * a_max * i / (n - 1);
    best = std::max(best, control_objective(s, vec1(0.0), 0.0, vec1(1.0), mat1(0.0), vec1(a)));
  }
  const double analytic = hamiltonian_eval(s, vec1(0.0), 0.0, vec1(1.0), mat1(0.0)).value();
  CHECK(analytic == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(std::abs(analytic - best) < 1e-10);

  HamiltonianOptions grid_only;
  grid_only.allow_analytic = false;
  const double searched = hamiltonian_eval(s, vec1(0.0), 0.0, vec1(1.0), mat1(0.0), grid_only).value();
  CHECK(std::abs(searched - analytic) < 1e-10);
}

TEST_CASE("eq3 dichotomy in 1D: finite iff X > -2, both evaluation paths") {
  const ProblemSpec s = make_preset("eq3_lq");
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> above(-1.99, 10.0), below(-50.0, -2.01);
  HamiltonianOptions grid_only;
  grid_only.allow_analytic = false;
  for (int i = 0; i < 100; ++i) {
    const double xa = above(rng), xb = below(rng);
    CHECK(hamiltonian_eval(s, vec1(0.0), 0.0, vec1(0.0), mat1(xa)).is_finite());
    CHECK(hamiltonian_eval(s, vec1(0.0), 0.0, vec1(0.0), mat1(xb)).is_pos_infinity());
    CHECK(hamiltonian_eval(s, vec1(0.0), 0.0, vec1(0.0), mat1(xa), grid_only).is_finite());
    CHECK(hamiltonian_eval(s, vec1(0.0), 0.0, vec1(0.0), mat1(xb), grid_only).is_pos_infinity());
  }
}

TEST_CASE("Hamiltonian is antitone in X and convex in q") {
  const ProblemSpec s = make_preset("eq3_lq", {{"N", 2}});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0), pos(0.0, 1.0);
  const Vec x = vec2(0.3, -0.2);
  for (int i = 0; i < 50; ++i) {
    const Vec q = vec2(u(rng), u(rng));
    Mat X1(2, 2);
    X1 << u(rng), 0.2 * u(rng), 0, u(rng);
    X1(1, 0) = X1(0, 1);
    Mat P(2, 2);
    const double a = pos(rng), b = pos(rng);
    P << a, 0.5 * std::sqrt(a * b), 0.5 * std::sqrt(a * b), b;  // positive semidefinite
    const ExtendedReal h1 = hamiltonian_eval(s, x, 0.0, q, X1);
    const ExtendedReal h2 = hamiltonian_eval(s, x, 0.0, q, Mat(X1 + P));
    CHECK(h1 >= h2);

    const Vec q2 = vec2(u(rng), u(rng));
    const ExtendedReal ha = hamiltonian_eval(s, x, 0.0, q, X1);
    const ExtendedReal hb = hamiltonian_eval(s, x, 0.0, q2, X1);
    const ExtendedReal hm = hamiltonian_eval(s, x, 0.0, Vec(0.5 * (q + q2)), X1);
    if (ha.is_finite() && hb.is_finite()) CHECK(hm.value() <= 0.5 * (ha.value() + hb.value()) + 1e-12);
  }
}

TEST_CASE("hamiltonian_eval errors") {
  const ProblemSpec s = make_preset("eq3_lq");
  CHECK_THROWS_AS(hamiltonian_eval(s, vec2(0, 0), 0.0, vec1(0.0), mat1(0.0)), Error);
  const ProblemSpec m = make_preset("power_model");
  try {
    hamiltonian_eval(m, vec1(0), 0.0, vec1(0), mat1(0));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
  ProblemSpec bad = s;
  bad.constants.nu = 0.0;
  try {
    hamiltonian_eval(bad, vec1(0), 0.0, vec1(0), mat1(0));
    FAIL("expected NonCoercive");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonCoercive);
  }
}

TEST_CASE("grid search matches the closed form on a non-registered quartic cost") {
  // ell = |a|^4, b = a: H(q) = legendre_power(1, 4, -q).
  ProblemSpec s = make_preset("eq3_lq");
  s.p = 4.0;
  s.power_form.reset();
  s.sigma = [](const Vec&, double, const Vec&) { return Mat(Mat::Zero(1, 1)); };
  s.running_cost = [](const Vec&, double, const Vec& a) { return std::pow(a.norm(), 4.0); };
  for (double q : {-3.0, -0.5, 0.0, 1.0, 7.0}) {
    const double h = hamiltonian_eval(s, vec1(0), 0, vec1(q), mat1(0)).value();
    CHECK(std::abs(h - legendre_power(1.0, 4.0, vec1(-q))) < 1e-9 * (1 + std::abs(h)));
  }
}
