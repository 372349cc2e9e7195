#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nsdyn/equilibria.hpp"

using namespace nsdyn;

TEST_CASE("eigenvalues of small matrices") {
  auto ev = eigenvalues_small({{0, -1}, {1, 0}});
  REQUIRE(ev.size() == 2);
  CHECK(std::abs(ev[0] - Complex(0, -1)) <= 1e-12);
  CHECK(std::abs(ev[1] - Complex(0, 1)) <= 1e-12);

  ev = eigenvalues_small({{2, 1, 0}, {0, -3, 5}, {0, 0, 0.5}});
  REQUIRE(ev.size() == 3);
  CHECK(ev[0].real() == doctest::Approx(-3).epsilon(1e-12));
  CHECK(ev[1].real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ev[2].real() == doctest::Approx(2).epsilon(1e-12));
  for (const auto& l : ev) CHECK(l.imag() == 0.0);

  Matrix A(6, Vec(6, 0.0));
  for (std::size_t i = 0; i < 6; ++i) {
    A[i][i] = static_cast<double>(i) - 2.5;
    if (i + 1 < 6) A[i][i + 1] = 1.0;
  }
  ev = eigenvalues_small(A);
  for (std::size_t i = 0; i < 6; ++i)
    CHECK(std::abs(ev[i] - Complex(static_cast<double>(i) - 2.5, 0)) <= 1e-8);

  const Vec c = characteristic_polynomial({{1, 2}, {3, 4}});
  CHECK(c == Vec{-2, -5, 1});
  CHECK(std::abs(det_shifted({{1, 2}, {3, 4}}, Complex(1, 0)) - Complex(-6, 0)) <= 1e-14);
  CHECK_THROWS_AS(eigenvalues_small(Matrix(7, Vec(7, 0.0))), Error);
}

TEST_CASE("Newton") {
  const VectorFn F = [](std::span<const double> x) {
    return Vec{x[0] * x[0] + x[1] * x[1] - 4.0, x[0] - x[1]};
  };
  const NewtonResult r = newton_solve(F, Vec{1.0, 0.5});
  CHECK(std::fabs(r.x[0] - std::sqrt(2.0)) <= 1e-12);
  CHECK(std::fabs(r.x[1] - std::sqrt(2.0)) <= 1e-12);
  CHECK(r.residual <= 1e-12);
  CHECK(r.iterates.front() == Vec{1.0, 0.5});

  const VectorFn singular = [](std::span<const double> x) {
    return Vec{x[0] + x[1] - 1.0, 2.0 * x[0] + 2.0 * x[1] - 3.0};
  };
  try {
    (void)newton_solve(singular, Vec{0.0, 0.0});
    FAIL("expected SingularJacobian");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularJacobian);
  }
  const VectorFn none = [](std::span<const double> x) { return Vec{x[0] * x[0] + 1.0}; };
  CHECK_THROWS_AS((void)newton_solve(none, Vec{0.3}), Error);
}

TEST_CASE("equilibrium report counts") {
  const VectorFn f = [](std::span<const double> x) {
    return Vec{-x[0] + x[1], -x[1], 2.0 * x[2]};
  };
  const EquilibriumReport r = equilibrium_report(f, Vec{0, 0, 0}, "test");
  CHECK(r.n_stable == 2);
  CHECK(r.n_unstable == 1);
  CHECK(r.n_center == 0);
  CHECK(r.context == "test");
}

TEST_CASE("delta persistence of the planar saddle") {
  const auto sys = PiecewiseSystem::from_expressions(2, {"0", "-1"}, {"x1", "-x2+1"}, "x2");
  const Transition phi = builtin_phi("cubic");
  const auto rows = persistence_sweep_delta(sys, phi, Vec{0.0, 0.0}, {0.1, 0.01, 0.001});
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    REQUIRE(row.ok);
    const double y0 = row.report.point[1];
    CHECK(std::fabs(phi.phi(y0 / row.delta) - y0 / (y0 - 2.0)) <= 1e-10);
    CHECK(row.distance <= row.delta);
    // Jacobian at the origin: diag(1/2, -1/2 - phi'(0) / delta).
    CHECK(std::fabs(row.report.eigenvalues[1].real() - 0.5) <= 1e-9);
    CHECK(row.report.eigenvalues[0].real() ==
          doctest::Approx(-0.5 - 1.5 / row.delta).epsilon(1e-6));
    CHECK(row.report.n_stable == 1);
    CHECK(row.report.n_unstable == 1);
  }
  CHECK_THROWS_AS(persistence_sweep_delta(sys, phi, Vec{0.5, 0.0}, {0.1}), Error);
}

TEST_CASE("periodic orbit of the Hopf normal form") {
  const VectorFn f = [](std::span<const double> x) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    return Vec{x[0] - x[1] - x[0] * r2, x[0] + x[1] - x[1] * r2};
  };
  const PeriodicOrbitReport rep = find_periodic_orbit(f, Section{1, 0.0, 1}, Vec{1.3, 0.0});
  CHECK(std::fabs(rep.point[0] - 1.0) <= 1e-7);
  CHECK(std::fabs(rep.period - 2.0 * std::numbers::pi) <= 1e-6);
  CHECK(rep.multiplier == doctest::Approx(std::exp(-4.0 * std::numbers::pi)).epsilon(1e-3));
  const VectorFn drift = [](std::span<const double>) { return Vec{1.0, 0.0}; };
  PeriodicOptions short_run;
  short_run.max_time = 5.0;
  CHECK_THROWS_AS(return_map(drift, Section{1, 0.0, 1}, Vec{0.0, 0.0}, short_run), Error);
}

TEST_CASE("Hausdorff distance") {
  const std::vector<Vec> A{{0, 0}, {1, 0}}, B{{0, 0}, {3, 0}};
  CHECK(hausdorff(A, B) == 2.0);
  CHECK(hausdorff(B, A) == 2.0);
  CHECK(hausdorff(A, A) == 0.0);
  CHECK_THROWS_AS(hausdorff(A, {}), Error);
}
