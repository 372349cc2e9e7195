#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nsdyn/regularize.hpp"

using namespace nsdyn;

TEST_CASE("built-in transitions") {
  for (const char* name : {"cubic", "quintic", "sine"}) {
    const Transition phi = builtin_phi(name);
    CHECK(phi.monotone());
    CHECK(phi.phi(1.0) == 1.0);
    CHECK(phi.phi(-1.0) == -1.0);
    CHECK(phi.phi(3.0) == 1.0);
    CHECK(phi.phi(-7.0) == -1.0);
    CHECK(phi.phi_dt(1.5) == 0.0);
    double prev = -1.0;
    for (int i = -99; i <= 99; ++i) {
      const double t = i / 100.0;
      CHECK(phi.phi(t) > prev);
      CHECK(phi.phi(-t) == doctest::Approx(-phi.phi(t)).epsilon(1e-15));
      const double h = 1e-6;
      CHECK(phi.phi_dt(t) ==
            doctest::Approx((phi.phi(t + h) - phi.phi(t - h)) / (2 * h)).epsilon(1e-7));
      const auto back = phi.inverse(phi.phi(t));
      REQUIRE(back.has_value());
      CHECK(std::fabs(*back - t) <= 1e-12);
      prev = phi.phi(t);
    }
    CHECK_FALSE(phi.inverse(1.5).has_value());
  }
  CHECK(builtin_phi("cubic").phi(0.5) == doctest::Approx(0.6875).epsilon(1e-15));
  CHECK(builtin_phi("sine").phi(0.5) ==
        doctest::Approx(std::sin(std::numbers::pi / 4)).epsilon(1e-15));
  CHECK_THROWS_AS(builtin_phi("tanh"), Error);
}

TEST_CASE("psi has one critical point and is non-decreasing") {
  PsiParams p;
  p.a0 = 0.0;
  p.b0 = -2.0;
  p.coord = 1;
  const PsiGridReport rep = psi_grid_report(p);
  CHECK(rep.ok);
  CHECK(rep.min_slope >= -1e-12);
  CHECK(rep.low_regions == 1);
  CHECK(std::fabs(rep.slope_at_critical) <= 1e-12);
  const Transition psi = builtin_psi(p);
  CHECK_FALSE(psi.monotone());
  REQUIRE(psi.critical_set().size() == 1);
  CHECK(psi.critical_set()[0].coord == 1);
  CHECK(psi.critical_set()[0].value == -2.0);
  const Vec at_b0{0.3, -2.0}, far{0.3, 5.0};
  CHECK(std::fabs(psi.dt(at_b0, 0.0)) <= 1e-12);
  CHECK(psi(far, 0.5) == doctest::Approx(builtin_phi("cubic").phi(0.5)).epsilon(1e-15));
  CHECK(psi(at_b0, 1.0) == 1.0);
  CHECK(psi(at_b0, -1.0) == -1.0);
  CHECK_THROWS_AS((void)psi.phi(0.2), Error);

  PsiParams shifted = p;
  shifted.a0 = 0.4;
  CHECK(builtin_psi(shifted).dt(at_b0, 0.4) == doctest::Approx(0.0).epsilon(1e-12));
  PsiParams bad = p;
  bad.a0 = 1.0;
  CHECK_THROWS_AS(builtin_psi(bad), Error);
}

TEST_CASE("ST family against the affine formula") {
  const auto sys = PiecewiseSystem::from_expressions(2, {"0", "-1"}, {"x1", "-x2+1"}, "x2");
  const Transition phi = builtin_phi("cubic");
  const SmoothFamily fam = st_regularize(sys, phi);
  CHECK(fam.provenance() == Provenance::ST);
  for (double delta : {0.1, 0.01}) {
    for (double x2 : {-0.3, -0.05, 0.0, 0.004, 0.07, 0.4}) {
      const Vec p{0.7, x2};
      const double t = x2 / delta;
      const double c = t >= 1 ? 1 : t <= -1 ? -1 : 0.5 * (3 * t - t * t * t);
      const Vec want{(1 - c) / 2 * 0.7, (1 + c) / 2 * -1.0 + (1 - c) / 2 * (1 - x2)};
      const Vec got = fam(p, delta);
      CHECK(got[0] == doctest::Approx(want[0]).epsilon(1e-14));
      CHECK(got[1] == doctest::Approx(want[1]).epsilon(1e-14));
    }
  }
  CHECK(fam(Vec{0.7, 0.2}, 0.1) == sys.plus(Vec{0.7, 0.2}));
  CHECK(fam(Vec{0.7, -0.1}, 0.1) == sys.minus(Vec{0.7, -0.1}));
  CHECK_THROWS_AS((void)fam(Vec{0.7, 0.0}, 0.0), Error);
  PsiParams pp;
  pp.b0 = -2.0;
  pp.coord = 1;
  CHECK_THROWS_AS(st_regularize(sys, builtin_psi(pp)), Error);
}

TEST_CASE("nonlinear family from the affine combination is the ST family") {
  const auto sys = PiecewiseSystem::from_expressions(2, {"x2-1", "-1"}, {"x2", "1"}, "x1");
  const Transition phi = builtin_phi("quintic");
  const SmoothFamily st = st_regularize(sys, phi);
  const SmoothFamily nl = nonlinear_regularize(ContinuousCombination::linear(sys), phi);
  CHECK(nl.provenance() == Provenance::Nonlinear);
  for (double x1 : {-0.02, -0.004, 0.0, 0.003, 0.5})
    for (double x2 : {-1.0, 0.3, 2.0}) {
      const Vec p{x1, x2};
      const Vec a = st(p, 0.01), b = nl(p, 0.01);
      CHECK(a[0] == doctest::Approx(b[0]).epsilon(1e-14));
      CHECK(a[1] == doctest::Approx(b[1]).epsilon(1e-14));
    }
}

TEST_CASE("r family with psi saturates and blends") {
  const auto sys = PiecewiseSystem::from_expressions(2, {"x2-1", "-1"}, {"x2", "1"}, "x1");
  PsiParams pp;
  pp.b0 = -2.0;
  pp.coord = 1;
  const Transition psi = builtin_psi(pp);
  const SmoothFamily fam = r_regularize(sys, psi);
  CHECK(fam.provenance() == Provenance::R);
  const Vec p{0.0, -2.0};
  for (double t : {-0.6, 0.0, 0.3}) {
    const double c = psi(p, t);
    const Vec v = fam.at_transition(p, t);
    CHECK(v[0] == doctest::Approx((1 + c) / 2 * -3.0 + (1 - c) / 2 * -2.0).epsilon(1e-14));
    CHECK(v[1] == doctest::Approx(-c).epsilon(1e-14));
  }
  CHECK(fam(Vec{0.02, 0.5}, 0.01) == sys.plus(Vec{0.02, 0.5}));
}
