#include "support.hpp"

#include <doctest.h>
#include <hjb/barriers.hpp>
#include <hjb/errors.hpp>
#include <hjb/presets.hpp>
#include <hjb/transforms.hpp>

#include <json.hpp>

using namespace hjb;
using namespace hjb::test;

namespace {

std::function<Jet(const Vec&, double)> as_candidate(const BarrierFamily& b) {
  return [b](const Vec& x, double t) { return b.evaluate(x, t); };
}

void check_jet(const BarrierFamily& b, const Vec& x, double t) {
  const Jet a = b.evaluate(x, t);
  const Jet d = fd_jet([&](const Vec& y, double s) { return b.value(y, s); }, x, t, std::min(1e-4, 0.25 * t));
  const double scale = 1.0 + std::abs(a.value);
  CHECK(std::abs(a.dt - d.dt) < 1e-6 * scale * (1.0 + std::abs(a.dt)));
  CHECK((a.grad - d.grad).norm() < 1e-6 * scale);
  CHECK((a.hess - d.hess).norm() < 1e-4 * scale);
}

}  // namespace

TEST_CASE("barrier jets are exact") {
  const ProblemSpec s = make_preset("briand_hu", {{"N", 2}});
  const auto [sub, super] = build_power_barriers(s);
  const BarrierFamily eps = build_eps_subsolution(s, 0.5);
  const ChangeOfFunctions cf = ChangeOfFunctions::for_problem(s, 1.0);
  const BarrierFamily phi = build_strict_supersolution(cf, s, 2.0, 0.5);
  for (const Vec& x : {vec2(0.0, 0.0), vec2(0.7, -1.1)}) {
    check_jet(sub, x, 0.05);
    check_jet(super, x, 0.05);
    check_jet(eps, x, 0.05);
    check_jet(phi, x, 0.5 * phi.tau_valid);
  }
}

TEST_CASE("power barriers are viscosity sub/supersolutions on their interval") {
  for (const char* name : {"power_model", "briand_hu", "lp_deterministic"}) {
    for (int n : {1, 2}) {
      const ProblemSpec s = make_preset(name, {{"N", static_cast<double>(n)}});
      const auto [sub, super] = build_power_barriers(s);
      INFO(name << " N=" << n);
      const auto sub_pts = sample_points(n, 20.0, 0.0, sub.tau_valid, 300, 1);
      const auto sup_pts = sample_points(n, 20.0, 0.0, super.tau_valid, 300, 2);
      CHECK(viscosity_residual_check(as_candidate(sub), s, ResidualRole::Sub, 0.0, sub_pts).passed);
      CHECK(viscosity_residual_check(as_candidate(super), s, ResidualRole::Super, 0.0, sup_pts).passed);
      for (const Vec& x : envelope_probe_points(n, 1e3, 50)) {
        CHECK(sub.value(x, 0.0) <= s.initial(x));
        CHECK(s.initial(x) <= super.value(x, 0.0));
      }
    }
  }
}

TEST_CASE("controlled problem: super barrier passes, power sub is infeasible") {
  const ProblemSpec s = make_preset("eq3_lq");
  const BarrierFamily super = build_power_super(s);
  const auto pts = sample_points(1, 5.0, 0.0, super.tau_valid, 60, 3);
  const ResidualReport r = viscosity_residual_check(as_candidate(super), s, ResidualRole::Super, 0.0, pts, 32);
  CHECK(r.passed);
  CHECK(r.witness.size() == pts.size());
  try {
    (void)build_power_sub(s);
    FAIL("expected ParameterInfeasible");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParameterInfeasible);
  }
}

TEST_CASE("eps family: envelope, monotone M_eps, residual") {
  const ProblemSpec s = make_preset("power_model");
  double prev = 1e300;
  for (double eps : {0.05, 0.2, 0.5, 1.0}) {
    const BarrierFamily b = build_eps_subsolution(s, eps);
    CHECK(b.M_eps >= 0.0);
    CHECK(b.M_eps <= prev);
    prev = b.M_eps;
    for (const Vec& x : envelope_probe_points(1, 1e4, 100)) CHECK(b.value(x, 0.0) <= -std::abs(s.initial(x)) + 1e-12);
    const auto pts = sample_points(1, 20.0, 0.0, b.tau_valid, 200, 4);
    CHECK(viscosity_residual_check(as_candidate(b), s, ResidualRole::Sub, 0.0, pts).passed);
  }
  const ProblemSpec c = make_preset("eq3_lq");
  const BarrierFamily b = build_eps_subsolution(c, 0.02);
  const auto pts = sample_points(1, 5.0, 0.0, b.tau_valid, 60, 5);
  CHECK(viscosity_residual_check(as_candidate(b), c, ResidualRole::Sub, 0.0, pts, 32).passed);
  CHECK_THROWS_AS(build_eps_subsolution(c, 10.0), Error);
}

TEST_CASE("missing constants and envelopes") {
  ProblemSpec s = make_preset("power_model");
  s.constants.specified = false;
  try {
    (void)build_power_barriers(s);
    FAIL("expected MissingConstants");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingConstants);
  }
  ProblemSpec t = make_preset("power_model");
  t.constants.chi = {};
  try {
    (void)build_eps_subsolution(t, 0.1);
    FAIL("expected MissingEnvelopes");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingEnvelopes);
  }
}

TEST_CASE("broken candidates are reported, not thrown") {
  const ProblemSpec s = make_preset("power_model");
  BarrierFamily sub = build_power_sub(s);
  sub.rho = 0.0;
  const auto pts = sample_points(1, 5.0, 0.0, 0.1, 50, 6);
  const ResidualReport r = viscosity_residual_check(as_candidate(sub), s, ResidualRole::Sub, 0.0, pts);
  CHECK_FALSE(r.passed);
  CHECK(r.failure == "InvalidArgument");
  CHECK(r.worst_margin < 0.0);
  const auto j = nlohmann::json::parse(r.to_json(3));
  CHECK(j.at("passed") == false);

  // A supersolution candidate with K = 0 against nonzero source g > 0 data.
  const ProblemSpec g = make_preset("power_model", {{"g", -2.0}});
  BarrierFamily super = build_power_super(g);
  super.K = 0.0;
  const ResidualReport q = viscosity_residual_check(as_candidate(super), g, ResidualRole::Super, 0.0, pts);
  CHECK_FALSE(q.passed);
  CHECK(q.failure == "NoWitnessFound");

  const ProblemSpec e = make_preset("eq3_lq");
  BarrierFamily esub = build_eps_subsolution(e, 0.02);
  esub.rho = 0.0;
  esub.M_eps = 0.0;
  const auto epts = sample_points(1, 3.0, 0.0, 0.1, 20, 7);
  CHECK_FALSE(viscosity_residual_check(as_candidate(esub), e, ResidualRole::Sub, 0.0, epts, 32).passed);
}

TEST_CASE("strict supersolution of the linearised operator") {
  for (const char* name : {"power_model", "briand_hu"}) {
    const ProblemSpec s = make_preset(name);
    const ChangeOfFunctions cf = ChangeOfFunctions::for_problem(s, 1.0);
    for (double mu : {0.5, 0.9, 0.99}) {
      for (double R : {1.0, 5.0}) {
        const BarrierFamily phi = build_strict_supersolution(cf, s, R, mu);
        CHECK(phi.tau_valid == doctest::Approx(1.0 / phi.L));
        const auto pts = sample_points(1, 6.0, 0.0, phi.tau_valid, 200, 8);
        const ResidualReport r = check_linearized_operator(phi, cf, s, mu, pts);
        INFO(name << " mu=" << mu << " R=" << R << " min=" << r.min_residual);
        CHECK(r.passed);
        CHECK(r.min_residual > 0.0);
        // phi_R vanishes below R and grows at least like h - R.
        CHECK(phi.value(vec1(0.0), 0.0) == doctest::Approx(std::max(0.0, cf.h(vec1(0.0)) - R)));
      }
    }
  }
  const ProblemSpec s = make_preset("power_model");
  const ChangeOfFunctions cf = ChangeOfFunctions::for_problem(s, 1.0);
  try {
    (void)check_linearized_operator(build_power_super(s), cf, s, 0.5, sample_points(1, 1.0, 0.0, 0.1, 5, 1));
    FAIL("expected DerivativeUnavailable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DerivativeUnavailable);
  }
  // Too short an L breaks positivity.
  BarrierFamily broken = build_strict_supersolution(cf, s, 1.0, 0.9);
  broken.L = 1.0;
  CHECK_FALSE(check_linearized_operator(broken, cf, s, 0.9, sample_points(1, 6.0, 0.0, 0.01, 200, 8)).passed);
}

TEST_CASE("sample points are reproducible and inside the ball") {
  const auto a = sample_points(2, 3.0, 0.1, 0.4, 50, 42);
  const auto b = sample_points(2, 3.0, 0.1, 0.4, 50, 42);
  REQUIRE(a.size() == 50);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].x.norm() <= 3.0);
    CHECK(a[i].t >= 0.1);
    CHECK(a[i].t <= 0.4);
  }
}
