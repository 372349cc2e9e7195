#include <cmath>

#include "doctest.h"
#include "nsdyn/ccomb.hpp"

using namespace nsdyn;

namespace {

SlowFastCombination ex1() {
  const auto base = NonsmoothSlowFast::from_expressions(
      2, {"x2-1+eps", "-1+eps"}, {"x2+eps", "1+eps"}, "y", "x1");
  return SlowFastCombination::from_expressions(
      base, {"lambda^2*(x2+eps)-(lambda+1)/2", "lambda^2-lambda-1+eps"});
}

double p_pm(double e, double sign) {
  return (-4 * e * e * e + 8 * e * e - 5 * e + 2 + sign * std::sqrt(5 * e * e - 4 * e * e * e)) /
         (4 * (e * e - 2 * e + 1));
}

}  // namespace

TEST_CASE("lambda branches of the reduced combination") {
  const ContinuousCombination cc = ex1().reduced();
  const CClass at1 = c_classify(cc, Vec{0.0, 1.0});
  REQUIRE(at1.branches.size() == 2);
  CHECK(std::fabs(at1.branches[0].lambda + 0.5) <= 1e-10);
  CHECK(std::fabs(at1.branches[1].lambda - 1.0) <= 1e-10);
  CHECK(at1.sliding);
  CHECK(at1.branches[0].interior);
  CHECK_FALSE(at1.branches[1].interior);

  for (double x2 : {0.3, 0.7, 2.0, 5.0}) {
    const CClass c = c_classify(cc, Vec{0.0, x2});
    std::vector<double> want;
    for (double s : {-1.0, 1.0}) {
      const double l = (1 + s * std::sqrt(1 + 8 * x2)) / (4 * x2);
      if (std::fabs(l) < 1) want.push_back(l);
    }
    std::vector<double> got;
    for (const auto& b : c.branches)
      if (b.interior) got.push_back(b.lambda);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::fabs(got[i] - want[i]) <= 1e-10);
    const auto& b = c.branches.front();
    const Vec v = c_sliding_vf(cc, Vec{0.0, x2}, b);
    CHECK(std::fabs(v[0]) <= 1e-10);
    CHECK(v[1] == doctest::Approx(b.lambda * b.lambda - b.lambda - 1).epsilon(1e-12));
  }
  CHECK_FALSE(c_classify(cc, Vec{0.0, -0.5}).sliding);
  CHECK_THROWS_AS(c_classify(cc, Vec{0.2, 0.5}), Error);
}

TEST_CASE("endpoints and affine combinations") {
  const SlowFastCombination sc = ex1();
  const ContinuousCombination cc = sc.at(0.0, 0.1);
  CHECK(cc.endpoint_error({{0.0, 0.3}, {0.0, 2.0}, {0.0, -1.0}}) <= 1e-15);
  const auto sys = PiecewiseSystem::from_expressions(2, {"x2-1", "-1"}, {"x2", "1"}, "x1");
  const ContinuousCombination lin = ContinuousCombination::linear(sys);
  const CClass c = c_classify(lin, Vec{0.0, 0.25});
  REQUIRE(c.branches.size() == 1);
  // K = ((1 + l)/2)(x2 - 1) + ((1 - l)/2) x2 = 0 gives l = 2 x2 - 1.
  CHECK(std::fabs(c.branches[0].lambda + 0.5) <= 1e-12);
  CHECK(std::fabs(c_sliding_vf(lin, Vec{0.0, 0.25}, c.branches[0])[1] - 0.5) <= 1e-12);
}

TEST_CASE("branch tracking births") {
  const ContinuousCombination cc = ex1().reduced();
  const BranchTrack tr = track_branches(cc, SigmaSegment{{0, -1}, {0, 3}}, 401);
  std::size_t at_half = 0, at_two = 0;
  for (const auto& s : tr.samples) {
    if (std::fabs(s.point[1] - 0.5) < 1e-9) ++at_half;
    if (std::fabs(s.point[1] - 2.0) < 1e-9) ++at_two;
  }
  CHECK(at_half == 1);
  CHECK(at_two == 2);
  CHECK(tr.events.size() == 2);
}

TEST_CASE("c-sliding persistence matches the closed form") {
  const SlowFastCombination sc = ex1();
  for (double sign : {1.0, -1.0}) {
    const double seed = sign > 0 ? (1 - std::sqrt(5.0)) / 2 : (1 + std::sqrt(5.0)) / 2;
    const auto rows = c_persistence_sweep(sc, Vec{0.0, 0.5}, 0.0, seed, {0.1, 0.01});
    for (const auto& r : rows) {
      REQUIRE(r.ok);
      CHECK(std::fabs(r.x[1] - p_pm(r.eps, sign)) <= 1e-9);
      CHECK(std::fabs(r.lambda * r.lambda - r.lambda - 1 + r.eps) <= 1e-10);
    }
  }
}

TEST_CASE("nonlinear regularization reproduces the c-sliding set") {
  const ContinuousCombination cc = ex1().reduced();
  const EquivalenceReport rep = nonlinear_equivalence_check(
      cc, builtin_phi("cubic"), SigmaSegment{{0, 0.05}, {0, 3}}, 150);
  CHECK(rep.ok);
  CHECK(rep.count_mismatches == 0);
  CHECK(rep.max_branches == 2);
}
