#include "support.hpp"

#include <doctest.h>
#include <hjb/auxiliary.hpp>
#include <hjb/errors.hpp>

#include <random>

using namespace hjb;
using namespace hjb::test;

namespace {

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double closed_form(double R, double r, double t) {
  if (r == 0.0) return 0.0;
  if (t == 0.0) return std::max(0.0, r - R);
  const double s = std::sqrt(2.0 * t);
  const double d2 = std::log(r / R) / s;
  return r * std::exp(t) * norm_cdf(d2 + s) - R * norm_cdf(d2);
}

}  // namespace

TEST_CASE("kernel quadrature against the lognormal closed form") {
  for (double R : {0.5, 1.0, 3.0}) {
    for (double r : {0.1, 0.9, 1.0, 2.5, 7.0}) {
      for (double t : {0.01, 0.1, 1.0}) {
        const double v = auxiliary_phi(R, r, t).value;
        CHECK(std::abs(v - closed_form(R, r, t)) < 1e-10 * (1.0 + v));
      }
    }
  }
}

TEST_CASE("structural properties and the PDE") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ur(0.05, 6.0), ut(0.01, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double R = 1.0, r = ur(rng), t = ut(rng);
    const AuxiliaryValue a = auxiliary_phi(R, r, t);
    CHECK(a.value >= std::max(0.0, r - R) - 1e-14);
    CHECK(a.dr >= 0.0);
    CHECK(a.drr >= 0.0);
    CHECK(a.dt >= 0.0);
    CHECK(std::abs(a.dt - r * r * a.drr - r * a.dr) < 1e-8 * (1.0 + a.dt));
    // r-derivatives against central differences of the closed form.
    const double h = 1e-4 * r;
    const double fd = (closed_form(R, r + h, t) - closed_form(R, r - h, t)) / (2 * h);
    CHECK(std::abs(a.dr - fd) < 1e-6);
  }
}

TEST_CASE("t -> 0 recovers the ramp and t = 0 is exact") {
  for (double r : {0.2, 1.0, 1.5, 4.0}) {
    CHECK(auxiliary_phi(1.0, r, 0.0).value == std::max(0.0, r - 1.0));
    CHECK(std::abs(auxiliary_phi(1.0, r, 1e-6).value - std::max(0.0, r - 1.0)) < 2e-3 * std::max(1.0, r));
  }
  CHECK(auxiliary_phi(1.0, 0.0, 0.5).value == 0.0);
}

TEST_CASE("finite differences agree with the kernel") {
  for (double R : {1.0, 100.0}) {
    const double t = 0.5;
    const AuxiliaryProfile prof = auxiliary_fd_profile(R, t, 8001);
    CHECK(prof.r.front() == 0.0);
    CHECK(prof.r.back() > 100.0 * R);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double r = 3.0 * R * i / 199.0;
      worst = std::max(worst, std::abs(prof.at(r) - auxiliary_phi(R, r, t).value));
    }
    CHECK(worst < 1e-3);
  }
  CHECK(std::abs(auxiliary_fd_value(1.0, 2.0, 0.5, 4001) - auxiliary_phi(1.0, 2.0, 0.5).value) < 1e-4);
  // Second order in the grid: doubling the nodes cuts the gap about fourfold.
  auto gap = [](int nodes) {
    const AuxiliaryProfile p = auxiliary_fd_profile(1.0, 0.5, nodes);
    return std::abs(p.at(1.0) - auxiliary_phi(1.0, 1.0, 0.5).value);
  };
  CHECK(gap(2001) / gap(4001) > 3.0);
  CHECK_THROWS_AS(auxiliary_fd_profile(1.0, 0.5, 3), Error);
  CHECK_THROWS_AS(auxiliary_fd_profile(1.0, 0.5, 4001).at(1e9), Error);
}

TEST_CASE("argument errors") {
  try {
    (void)auxiliary_phi(0.0, 1.0, 1.0);
    FAIL("expected NonPositiveR");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonPositiveR);
  }
  CHECK_THROWS_AS(auxiliary_phi(-1.0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(auxiliary_phi(1.0, -1.0, 1.0), Error);
  CHECK_THROWS_AS(auxiliary_phi(1.0, 1.0, -1.0), Error);
  CHECK_THROWS_AS(auxiliary_phi(1.0, 1.0, 1.0, 32), Error);
}
