// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "nsdyn/cli/checks.hpp"
#include "nsdyn/cli/registry.hpp"

using namespace nsdyn;
using namespace nsdyn::cli;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s  %2d  %-44s %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", id, title,
              o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

SystemConfig example(const char* name) { return resolve_system(name); }

Vec on_line(double x1, double x2) { return Vec{x1, x2}; }

Outcome sliding_formulas() {
  const PiecewiseSystem fold = build_piecewise(example("ex-exblow"));
  double worst_fold = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double x2 = i / 201.0;
    const Vec z = sliding_vf(fold, on_line(0.0, x2));
    worst_fold = std::max(worst_fold, std::hypot(z[0], z[1] - (1.0 - 2.0 * x2)));
  }
  const PiecewiseSystem planar = build_piecewise(example("ex-s2-1"));
  double worst_planar = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double x1 = -1.0 + 2.0 * i / 199.0;
    const Vec z = sliding_vf(planar, on_line(x1, 0.0));
    worst_planar = std::max(worst_planar, std::hypot(z[0] - x1 / 2.0, z[1]));
  }
  return {worst_fold <= 1e-12 && worst_planar <= 1e-12,
          "fold pair " + sci(worst_fold) + ", planar " + sci(worst_planar)};
}

Outcome region_geometry() {
  auto endpoints = [](const PiecewiseSystem& sys) {
    const SigmaScan scan = scan_sigma(sys, SigmaSegment{{0.0, -1.0}, {0.0, 2.0}}, 300);
    for (const auto& iv : scan.intervals)
      if (is_sliding(iv.kind) && iv.start_is_tangency && iv.end_is_tangency)
        return std::max(std::fabs(iv.start[1]), std::fabs(iv.end[1] - 1.0));
    return 1.0;
  };
  const double a = endpoints(build_piecewise(example("ex-exblow")));
  const double b = endpoints(build_piecewise(example("ex-ex2")));
  return {a <= 1e-8 && b <= 1e-8, "fold pair " + sci(a) + ", reduced slow-fast " + sci(b)};
}

Outcome delta_persistence() {
  const SystemConfig cfg = example("ex-s2-1");
  const PiecewiseSystem sys = build_piecewise(cfg);
  const Transition phi = builtin_phi("cubic");
  const auto rows = persistence_sweep_delta(sys, phi, Vec{0.0, 0.0}, {1e-1, 1e-2, 1e-3});
  bool ok = rows.size() == 3;
  double worst_eq = 0.0, worst_half = 0.0, worst_dist = 0.0;
  for (const auto& r : rows) {
    if (!r.ok) return {false, "delta " + sci(r.delta) + ": " + r.error};
    const double y0 = r.report.point[1];
    worst_eq = std::max(worst_eq, std::fabs(phi.phi(y0 / r.delta) - y0 / (y0 - 2.0)));
    bool has_half = false, has_negative = false;
    for (const Complex& l : r.report.eigenvalues) {
      if (std::fabs(l.imag()) > 0.0) continue;
      if (std::fabs(l.real() - 0.5) <= 1e-9) {
        has_half = true;
        worst_half = std::max(worst_half, std::fabs(l.real() - 0.5));
      } else if (l.real() < 0.0) {
        has_negative = true;
      }
    }
    ok = ok && has_half && has_negative && r.report.n_stable == 1 && r.report.n_unstable == 1;
    worst_dist = std::max(worst_dist, norm2(r.report.point) / r.delta);
  }
  ok = ok && worst_eq <= 1e-10 && worst_dist <= 1.0;
  return {ok, "equation " + sci(worst_eq) + ", |l - 1/2| " + sci(worst_half) +
                  ", max |Q|/delta " + sci(worst_dist)};
}

Outcome eps_persistence() {
  const NonsmoothSlowFast sys = build_nsff(example("ex-ex2"));
  const double p0 = (-1.0 + std::sqrt(5.0)) / 2.0;
  const auto rows = persistence_sweep_eps(sys, Vec{0.0, p0}, 0.0, {0.1, 0.05, 0.01});
  double worst = 0.0, ratio = 0.0;
  for (const auto& r : rows) {
    if (!r.ok) return {false, "eps " + sci(r.eps) + ": " + r.error};
    const double e = r.eps;
    const double want = (-1.0 + 2.0 * e + std::sqrt(5.0 - 12.0 * e + 8.0 * e * e)) / 2.0;
    worst = std::max(worst, std::fabs(r.x[1] - want));
    ratio = std::max(ratio, std::fabs(r.x[1] - p0) / e);
  }
  return {rows.size() == 3 && worst <= 1e-10 && ratio <= 0.5,
          "closed form " + sci(worst) + ", max |p - p0|/eps " + sci(ratio)};
}

Outcome c_persistence() {
  const SlowFastCombination sc = build_ccomb(example("ex-ex1"));
  double worst = 0.0;
  for (double sign : {1.0, -1.0}) {
    const double seed = sign > 0 ? (1.0 - std::sqrt(5.0)) / 2.0 : (1.0 + std::sqrt(5.0)) / 2.0;
    for (const auto& r : c_persistence_sweep(sc, Vec{0.0, 0.5}, 0.0, seed, {0.1, 0.01})) {
      if (!r.ok) return {false, "eps " + sci(r.eps) + ": " + r.error};
      const double e = r.eps;
      const double want = (-4 * e * e * e + 8 * e * e - 5 * e + 2 +
                           sign * std::sqrt(5 * e * e - 4 * e * e * e)) /
                          (4 * (e * e - 2 * e + 1));
      worst = std::max(worst, std::fabs(r.x[1] - want));
    }
  }
  const CClass c = c_classify(sc.reduced(), Vec{0.0, 1.0});
  double branch_err = 1.0;
  if (c.branches.size() == 2)
    branch_err = std::max(std::fabs(c.branches[0].lambda + 0.5),
                          std::fabs(c.branches[1].lambda - 1.0));
  return {worst <= 1e-9 && branch_err <= 1e-10,
          "equilibria " + sci(worst) + ", branches at x2 = 1 " + sci(branch_err)};
}

Outcome reduced_equals_sliding() {
  const PiecewiseSystem sys = build_piecewise(example("ex-exblow"));
  double worst = 0.0;
  std::size_t n = 0;
  for (const char* name : {"cubic", "quintic", "sine"}) {
    const SlowFastSystem sfs =
        directional_blowup(st_regularize(sys, builtin_phi(name)), *sys.switching_coord);
    for (int i = 1; i <= 100; ++i) {
      const Vec p = on_line(0.0, i / 101.0);
      const auto roots = critical_roots(sfs, sfs.slow_part(p));
      if (roots.size() != 1) return {false, std::string(name) + ": root count"};
      const Vec red = reduced_rhs(sfs, roots[0]);
      const Vec sl = sfs.slow_part(sliding_vf(sys, p));
      worst = std::max(worst, norm_inf(sub(red, sl)));
      ++n;
    }
  }
  return {worst <= 1e-10, std::to_string(n) + " samples, max " + sci(worst)};
}

Outcome region_inclusions() {
  std::size_t violations = 0, points = 0;
  {
    const SystemConfig cfg = example("ex-exblow");
    const PiecewiseSystem sys = build_piecewise(cfg);
    const SigmaSegment seg{{0.0, -1.0}, {0.0, 2.0}};
    const auto regions = r_region_scan(sys, build_transition(cfg), seg, 300);
    for (const auto& r : regions) {
      const SigmaClass c = classify_point(sys, r.point);
      if (c.kind == SigmaKind::TangencyPlus || c.kind == SigmaKind::TangencyMinus) continue;
      if (r.region == RRegion::RSewing && c.kind != SigmaKind::Sewing) ++violations;
      if (is_sliding(c.kind) && r.region != RRegion::RSliding) ++violations;
      ++points;
    }
  }
  {
    const ContinuousCombination cc = build_combination(example("ex-ex1"));
    for (int i = 0; i < 300; ++i) {
      const Vec p = on_line(0.0, -1.0 + 4.0 * i / 299.0);
      const SigmaClass c = classify_point(cc.base, p);
      if (c.kind == SigmaKind::TangencyPlus || c.kind == SigmaKind::TangencyMinus) continue;
      const bool c_sliding = c_classify(cc, p).sliding;
      if (!c_sliding && c.kind != SigmaKind::Sewing) ++violations;
      if (is_sliding(c.kind) && !c_sliding) ++violations;
      ++points;
    }
  }
  return {violations == 0, std::to_string(violations) + " violations on " +
                               std::to_string(points) + " points"};
}

Outcome polar_identity() {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ux(-2.0, 2.0), ut(1e-3, std::numbers::pi - 1e-3),
      ur(0.0, 1.0);
  std::vector<std::array<double, 3>> s(1000);
  for (auto& v : s) v = {ux(rng), ut(rng), ur(rng)};
  const double worst = polar_directional_check(s);
  return {worst <= 1e-14, "1000 samples, max " + sci(worst)};
}

Outcome filippov_dynamics() {
  const PiecewiseSystem sys = build_piecewise(example("ex-exblow"));
  const Trajectory tr = integrate_filippov(sys, Vec{-0.5, 0.2}, 0.0, 20.0);
  const Vec& x = tr.final_state();
  const bool state_ok = std::fabs(x[1] - 0.5) <= 1e-6 && std::fabs(x[0]) <= 1e-9;
  const bool modes_ok = tr.modes() == std::vector<Mode>{Mode::FlowMinus, Mode::Sliding};
  std::string seq;
  for (Mode m : tr.modes()) seq += std::string(seq.empty() ? "" : ",") + to_string(m);
  return {state_ok && modes_ok, "final (" + sci(x[0]) + ", " + std::to_string(x[1]) +
                                    "), modes [" + seq + "]"};
}

Outcome regularized_convergence() {
  const SystemConfig cfg = example("ex-exblow");
  const PiecewiseSystem sys = build_piecewise(cfg);
  const Transition tr = build_transition(cfg);
  const SmoothFamily fam = r_regularize(sys, tr);
  // K: the part of Sigma with 0.1 <= x2 <= 0.9.
  std::vector<Vec> sigma_k;
  for (int i = 0; i <= 160; ++i) sigma_k.push_back(on_line(0.0, 0.1 + 0.8 * i / 160.0));
  std::string detail;
  bool ok = true;
  for (double delta : {1e-1, 1e-2, 1e-3}) {
    const VectorFn f = fam.field(delta);
    std::vector<Vec> band;
    // Attracting branch of the x1-nullcline of the regularized field.
    for (const Vec& q : sigma_k) {
      auto g = [&](double x1) { return f(on_line(x1, q[1]))[0]; };
      for (const ScalarRoot& r : scan_roots(g, -delta, delta, 200))
        if (r.slope < 0.0) band.push_back(on_line(r.x, q[1]));
    }
    // Late samples of trajectories released off the band.
    for (double y : {0.15, 0.5, 0.85}) {
      const Trajectory t = integrate_smooth(f, on_line(-0.3, y), 0.0, 3.0);
      for (const Segment& s : t.segments)
        for (std::size_t i = 0; i < s.t.size(); ++i)
          if (s.t[i] >= 1.0 && s.x[i][1] >= 0.1 && s.x[i][1] <= 0.9) band.push_back(s.x[i]);
    }
    if (band.empty()) return {false, "no band samples at delta " + sci(delta)};
    // Sigma and K are a segment; adding the foot point of every band sample
    // makes point-to-set distances exact.
    std::vector<Vec> target = sigma_k;
    for (const Vec& b : band) target.push_back(on_line(0.0, b[1]));
    const double d = hausdorff(band, target);
    ok = ok && d <= delta;
    detail += "d(" + sci(delta) + ") = " + sci(d) + ", ";
  }
  const Trajectory reg = integrate_smooth(fam.field(1e-3), Vec{-0.5, 0.2}, 0.0, 20.0);
  const Trajectory fil = integrate_filippov(sys, Vec{-0.5, 0.2}, 0.0, 20.0);
  const double gap = dist2(reg.final_state(), fil.final_state());
  ok = ok && gap <= 5e-2;
  return {ok, detail + "endpoint gap " + sci(gap)};
}

Outcome periodic_orbit() {
  const SystemConfig cfg = example("ex-s2-2");
  const PiecewiseSystem sys = build_piecewise(cfg);
  const SmoothFamily fam = st_regularize(sys, build_transition(cfg));
  PeriodicOptions po;
  po.reverse_time = true;
  po.fixed_coords = {2};
  const PeriodicOrbitReport rep =
      find_periodic_orbit(fam.field(1e-3), Section{1, 0.0, 1}, Vec{1.1, 0.0, 0.0}, po);
  const double radius = std::hypot(rep.point[0], rep.point[1]);
  return {std::fabs(radius - 1.0) <= 0.1,
          "radius " + std::to_string(radius) + ", period " + std::to_string(rep.period)};
}

Outcome property_suites() {
  std::size_t total = 0, failed = 0;
  std::string first_failure;
  for (const auto& e : registry()) {
    for (const CheckResult& c : run_checks(parse_config(e.text, e.name), 42)) {
      ++total;
      if (!c.pass) {
        ++failed;
        if (first_failure.empty()) first_failure = ", first: " + e.name + " " + c.name;
      }
    }
  }
  return {failed == 0, std::to_string(total - failed) + "/" + std::to_string(total) +
                           " checks over 5 systems" + first_failure};
}

}  // namespace

int main() {
  report(1, "sliding-field closed forms", sliding_formulas);
  report(2, "sliding-region endpoints", region_geometry);
  report(3, "equilibrium persistence in delta", delta_persistence);
  report(4, "equilibrium persistence in eps", eps_persistence);
  report(5, "c-sliding persistence and branches", c_persistence);
  report(6, "reduced flow equals sliding field", reduced_equals_sliding);
  report(7, "region inclusions", region_inclusions);
  report(8, "directional blow-up identity", polar_identity);
  report(9, "Filippov dynamics of the fold pair", filippov_dynamics);
  report(10, "regularized flow converges to Filippov flow", regularized_convergence);
  report(11, "periodic orbit persistence", periodic_orbit);
  report(12, "property suites under seed 42", property_suites);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
