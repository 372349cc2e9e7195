#include <cmath>

#include "doctest.h"
#include "nsdyn/psys.hpp"

using namespace nsdyn;

namespace {

PiecewiseSystem fold_pair() {
  return PiecewiseSystem::from_expressions(2, {"x2-1", "-1"}, {"x2", "1"}, "x1");
}

}  // namespace

TEST_CASE("classification of the fold pair") {
  const PiecewiseSystem sys = fold_pair();
  CHECK(sys.switching_coord == std::optional<std::size_t>(0));
  CHECK(classify_point(sys, Vec{0.0, 0.5}).kind == SigmaKind::SlidingAttracting);
  CHECK(classify_point(sys, Vec{0.0, -0.5}).kind == SigmaKind::Sewing);
  CHECK(classify_point(sys, Vec{0.0, 1.5}).kind == SigmaKind::Sewing);
  CHECK(classify_point(sys, Vec{0.0, 1.0}).kind == SigmaKind::TangencyPlus);
  CHECK(classify_point(sys, Vec{0.0, 0.0}).kind == SigmaKind::TangencyMinus);
  CHECK(classify_point(sys, Vec{0.0, 1.0 + 5e-10}).kind == SigmaKind::TangencyPlus);
  const auto swapped =
      PiecewiseSystem::from_expressions(2, {"x2", "1"}, {"x2-1", "-1"}, "x1");
  CHECK(classify_point(swapped, Vec{0.0, 0.5}).kind == SigmaKind::SlidingRepelling);
}

TEST_CASE("sliding field closed forms") {
  const PiecewiseSystem sys = fold_pair();
  for (double x2 = 0.05; x2 < 1.0; x2 += 0.05) {
    const Vec z = sliding_vf(sys, Vec{0.0, x2});
    CHECK(std::fabs(z[0]) <= 1e-15);
    CHECK(std::fabs(z[1] - (1.0 - 2.0 * x2)) <= 1e-14);
    const double s = convex_coefficient(sys, Vec{0.0, x2});
    CHECK(s == doctest::Approx(1.0 - x2).epsilon(1e-14));
  }
  const auto planar =
      PiecewiseSystem::from_expressions(2, {"0", "-1"}, {"x1", "-x2+1"}, "x2");
  for (double x1 : {-0.9, -0.1, 0.0, 0.4}) {
    const Vec z = sliding_vf(planar, Vec{x1, 0.0});
    CHECK(std::fabs(z[0] - x1 / 2.0) <= 1e-15);
    CHECK(std::fabs(z[1]) <= 1e-15);
  }
}

TEST_CASE("errors") {
  const PiecewiseSystem sys = fold_pair();
  CHECK_THROWS_AS((void)classify_point(sys, Vec{0.1, 0.5}), Error);
  try {
    (void)sliding_vf(sys, Vec{0.0, 1.5});
    FAIL("expected NotSliding");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotSliding);
  }
  const auto square = PiecewiseSystem::from_expressions(2, {"1", "0"}, {"-1", "0"}, "x1^2");
  try {
    (void)classify_point(square, Vec{0.0, 0.0});
    FAIL("expected DegenerateGradient");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateGradient);
  }
  const auto flat = PiecewiseSystem::from_expressions(2, {"0", "1"}, {"1", "1"}, "x2");
  try {
    (void)filippov_combination(flat, Vec{0.0, 0.0});
    FAIL("expected DegenerateDenominator");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateDenominator);
  }
  CHECK_THROWS_AS(PiecewiseSystem::from_expressions(2, {"1", "2", "3"}, {"1", "2"}, "x1"),
                  Error);
  CHECK_THROWS_AS(PiecewiseSystem::from_expressions(1, {"1"}, {"1"}, "x1"), Error);
}

TEST_CASE("scan brackets the fold points") {
  const PiecewiseSystem sys = fold_pair();
  const SigmaScan scan = scan_sigma(sys, SigmaSegment{{0.0, -1.0}, {0.0, 2.0}}, 300);
  REQUIRE(scan.intervals.size() == 3);
  const SigmaInterval& mid = scan.intervals[1];
  CHECK(mid.kind == SigmaKind::SlidingAttracting);
  CHECK(std::fabs(mid.start[1]) <= 1e-8);
  CHECK(std::fabs(mid.end[1] - 1.0) <= 1e-8);
  CHECK(mid.start_is_tangency);
  CHECK(mid.end_is_tangency);
  CHECK(scan.intervals[0].kind == SigmaKind::Sewing);
  CHECK(scan.intervals[2].kind == SigmaKind::Sewing);
}

TEST_CASE("curved switching manifold") {
  // X+ = (-x2, x1) is tangent to the unit circle, X- points inward.
  const auto sys = PiecewiseSystem::from_expressions(
      2, {"-x2+x1", "x1+x2"}, {"-x1", "-x2"}, "x1^2+x2^2-1");
  CHECK_FALSE(sys.switching_coord.has_value());
  const double c = std::cos(0.3), s = std::sin(0.3);
  const SigmaClass cls = classify_point(sys, Vec{c, s});
  CHECK(cls.kind == SigmaKind::SlidingRepelling);
  CHECK(cls.lplus == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(cls.lminus == doctest::Approx(-2.0).epsilon(1e-8));
  const Vec z = sliding_vf(sys, Vec{c, s});
  CHECK(std::fabs(z[0] * c + z[1] * s) <= 1e-8);
  // lplus = -lminus, so the sliding field is (X+ + X-) / 2 = (-x2, x1) / 2.
  CHECK(z[0] == doctest::Approx(-s / 2).epsilon(1e-8));
  CHECK(z[1] == doctest::Approx(c / 2).epsilon(1e-8));
}
