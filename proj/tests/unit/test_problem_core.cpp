#include "support.hpp"

#include <doctest.h>
#include <hjb/errors.hpp>
#include <hjb/growth.hpp>
#include <hjb/presets.hpp>
#include <hjb/validation.hpp>

using namespace hjb;
using namespace hjb::test;

TEST_CASE("conjugate exponent identity") {
  for (const char* name : {"power_model", "lp_deterministic", "eq3_lq", "briand_hu"}) {
    const ProblemSpec s = make_preset(name);
    CHECK(std::abs(1.0 / s.p + 1.0 / s.p_conj() - 1.0) < 1e-15);
  }
  const ProblemSpec s = make_preset("power_model", {{"p", 3.0}});
  CHECK(s.p_conj() == doctest::Approx(1.5));
}

TEST_CASE("ProblemSpec validation rejects bad inputs") {
  ProblemSpec s = make_preset("power_model");
  s.p = 1.0;
  CHECK_THROWS_AS(s.validate(), Error);
  s = make_preset("power_model");
  s.constants.nu = -1.0;
  CHECK_THROWS_AS(s.validate(), Error);
  s = make_preset("power_model");
  s.constants.C_f = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("validate_assumptions: presets pass") {
  for (const char* name : {"power_model", "lp_deterministic", "eq3_lq", "briand_hu"}) {
    const ValidationReport r = validate_assumptions(make_preset(name), 500, 5.0);
    INFO(name);
    CHECK(r.passed());
  }
  const ValidationReport r = validate_assumptions(make_preset("eq3_lq", {{"N", 2}}), 200, 5.0);
  CHECK(r.passed());
  CHECK_FALSE(r.has_violation("coercivity"));
}

TEST_CASE("validate_assumptions: concave nonlinearity reports a convexity witness") {
  ProblemSpec s = make_preset("power_model", {{"p", 1.5}});
  s.f = [](const Vec&, double, double, const Vec& z) { return -std::pow(z.norm(), 3.0); };
  s.constants.C_f = 1.0;
  const ValidationReport r = validate_assumptions(s, 200, 3.0);
  CHECK(r.has_violation("convexity"));
  for (const auto& v : r.violations) {
    if (v.check != "convexity") continue;
    CHECK(v.lhs > v.rhs);
    CHECK(v.x.size() == 1);
  }
}

TEST_CASE("validate_assumptions: understated constants are caught") {
  ProblemSpec s = make_preset("briand_hu", {{"lambda", 2.0}});
  s.constants.C_hat = 1.0;
  CHECK(validate_assumptions(s, 300, 4.0).has_violation("u_lipschitz"));
  ProblemSpec c = make_preset("eq3_lq");
  c.constants.nu = 2.0;
  CHECK(validate_assumptions(c, 300, 4.0).has_violation("coercivity"));
  ProblemSpec g = make_preset("power_model");
  g.constants.C_s = 0.5;
  CHECK(validate_assumptions(g, 50, 4.0).has_violation("s_bound"));
}

TEST_CASE("growth_witness") {
  const Grid g = Grid::uniform(1, 3.0, 61, 1.0);
  SUBCASE("zero function") {
    const auto w = growth_witness({GridFunction(g, 0.0)}, 2.0, GrowthMode::Bounded);
    CHECK(w.bound() == 0.0);
    CHECK(w.M(0.1) == 0.0);
    CHECK(w.M(1e-6) == 0.0);
  }
  SUBCASE("defining envelope") {
    for (double p : {1.5, 2.0}) {
      auto u = GridFunction::sample(g, [p](const Vec& x) { return std::pow(1.0 + x.squaredNorm(), 0.5 * p); });
      const auto w = growth_witness({u}, p, GrowthMode::Bounded);
      CHECK(w.bound() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(w.verify(0.0));
    }
  }
  SUBCASE("strict class: M_eps matches an exhaustive scan and is nonincreasing") {
    const double p = 2.0;
    std::vector<GridFunction> seq;
    for (double t : {0.0, 0.5, 1.0}) {
      seq.push_back(GridFunction::sample(g, [&](const Vec& x, double tt) { return (1 + tt) * std::pow(x.norm(), p - 0.5); }, t));
    }
    const auto w = growth_witness(seq, p, GrowthMode::Strict);
    double brute = 0.0;
    for (const auto& s : seq)
      for (int k = 0; k < g.size(); ++k)
        brute = std::max(brute, std::abs(s.values[k]) - 0.1 * (1 + std::pow(g.point(k).norm(), p)));
    CHECK(w.M(0.1) == doctest::Approx(brute).epsilon(1e-15));
    double prev = 1e300;
    for (double eps : {1e-3, 1e-2, 0.1, 1.0, 10.0}) {
      CHECK(w.M(eps) <= prev);
      CHECK(std::isfinite(w.M(eps)));
      CHECK(w.verify(eps));
      prev = w.M(eps);
    }
  }
  CHECK_THROWS_AS(growth_witness({}, 2.0, GrowthMode::Strict), Error);
}
