#include "nsdyn/cli/checks.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "nsdyn/cli/commands.hpp"

namespace nsdyn::cli {

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

class Suite {
 public:
  template <class Fn>
  void run(const std::string& name, Fn&& fn) {
    CheckResult r{name, false, {}};
    try {
      fn(r);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("error: ") + e.what();
    }
    results.push_back(std::move(r));
  }
  std::vector<CheckResult> results;
};

std::string random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, 9);
  const int k = depth <= 0 ? pick(rng) % 3 : pick(rng);
  switch (k) {
    case 0: return "x1";
    case 1: return "x2";
    case 2: {
      std::uniform_int_distribution<int> n(0, 999);
      return std::to_string(n(rng) / 100) + "." + std::to_string(n(rng) % 100);
    }
    case 3: return "(" + random_expr(rng, depth - 1) + " + " + random_expr(rng, depth - 1) + ")";
    case 4: return random_expr(rng, depth - 1) + "-" + random_expr(rng, depth - 1);
    case 5: return random_expr(rng, depth - 1) + "*" + random_expr(rng, depth - 1);
    case 6: return "(" + random_expr(rng, depth - 1) + ")/(" + random_expr(rng, depth - 1) + ")";
    case 7: return "-" + random_expr(rng, depth - 1);
    case 8: return "(" + random_expr(rng, depth - 1) + ")^2";
    default: {
      static const char* fns[] = {"sin", "cos", "exp", "sqrt", "abs", "ln", "tan"};
      std::uniform_int_distribution<int> f(0, 6);
      return std::string(fns[f(rng)]) + "(" + random_expr(rng, depth - 1) + ")";
    }
  }
}

SigmaSegment config_segment(const SystemConfig& cfg, const PiecewiseSystem& sys) {
  const RangeSpec r = parse_range(cfg.get("range", "x2=-1:2"), sys.dim);
  Vec base(sys.dim, 0.0);
  SigmaSegment seg{base, base};
  seg.start[r.coord] = r.lo;
  seg.end[r.coord] = r.hi;
  return seg;
}

bool near_tangency(const SigmaClass& c) {
  return std::fabs(c.lplus) <= 1e-9 || std::fabs(c.lminus) <= 1e-9;
}

void expr_checks(Suite& s, const SystemConfig& cfg, std::mt19937_64& rng) {
  s.run("expr: config expressions round-trip", [&](CheckResult& r) {
    std::size_t n = 0;
    for (const auto& [field, text] : all_expressions(cfg)) {
      const expr::Expr e = expr::parse(text);
      if (!expr::structurally_equal(e, expr::parse(expr::to_string(e)))) {
        r.detail = field + " does not round-trip";
        return;
      }
      ++n;
    }
    r.pass = true;
    r.detail = std::to_string(n) + " expressions";
  });
  s.run("expr: random expressions round-trip", [&](CheckResult& r) {
    std::uniform_int_distribution<int> depth(1, 5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::size_t evaluated = 0;
    for (int i = 0; i < 500; ++i) {
      const expr::Expr e = expr::parse(random_expr(rng, depth(rng)));
      const std::string printed = expr::to_string(e);
      const expr::Expr back = expr::parse(printed);
      if (!expr::structurally_equal(e, back) || expr::to_string(back) != printed) {
        r.detail = "mismatch for " + printed;
        return;
      }
      const expr::Bindings b{{"x1", u(rng)}, {"x2", u(rng)}};
      try {
        const double a = expr::eval(e, b);
        const double c = expr::eval(back, b);
        if (!(a == c || (std::isnan(a) && std::isnan(c)))) {
          r.detail = "value mismatch for " + printed;
          return;
        }
        ++evaluated;
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::MathDomain) throw;
      }
    }
    r.pass = true;
    r.detail = "500 trees, " + std::to_string(evaluated) + " evaluated";
  });
}

void psys_checks(Suite& s, const PiecewiseSystem& sys, const SigmaScan& scan) {
  s.run("psys: sliding field is a tangent convex combination", [&](CheckResult& r) {
    double worst_s = 0.0, worst_normal = 0.0, worst_formula = 0.0;
    std::size_t n = 0;
    for (const auto& smp : scan.samples) {
      if (!is_sliding(smp.cls.kind) || near_tangency(smp.cls)) continue;
      const Vec z = sliding_vf(sys, smp.point);
      const double c = convex_coefficient(sys, smp.point);
      worst_s = std::max({worst_s, -c, c - 1.0});
      worst_normal = std::max(worst_normal, std::fabs(dot(z, sys.grad_h(smp.point))));
      const Vec xp = sys.plus(smp.point), xm = sys.minus(smp.point);
      for (std::size_t i = 0; i < sys.dim; ++i)
        worst_formula = std::max(worst_formula,
                                 std::fabs(z[i] - ((1.0 - c) * xp[i] + c * xm[i])) /
                                     std::max(1.0, std::fabs(z[i])));
      ++n;
    }
    r.pass = worst_s <= 1e-12 && worst_normal <= 1e-10 && worst_formula <= 1e-12;
    r.detail = std::to_string(n) + " samples, normal " + fmt("%.2e", worst_normal) +
               ", formula " + fmt("%.2e", worst_formula);
  });
  s.run("psys: swapping sides leaves the sliding field unchanged", [&](CheckResult& r) {
    PiecewiseSystem swapped;
    swapped.dim = sys.dim;
    swapped.plus = sys.minus;
    swapped.minus = sys.plus;
    swapped.h = [h = sys.h](std::span<const double> p) { return -h(p); };
    double worst = 0.0;
    std::size_t n = 0;
    for (const auto& smp : scan.samples) {
      if (!is_sliding(smp.cls.kind) || near_tangency(smp.cls)) continue;
      const SigmaClass c2 = classify_point(swapped, smp.point);
      if (c2.kind != smp.cls.kind) {
        r.detail = "class changed under the swap";
        return;
      }
      worst = std::max(worst, norm_inf(sub(sliding_vf(sys, smp.point),
                                           sliding_vf(swapped, smp.point))));
      ++n;
    }
    r.pass = worst <= 1e-8;
    r.detail = std::to_string(n) + " samples, max diff " + fmt("%.2e", worst);
  });
  s.run("psys: sliding intervals end at tangencies with s in {0,1}", [&](CheckResult& r) {
    double worst = 0.0;
    std::size_t n = 0;
    for (const auto& iv : scan.intervals) {
      if (!is_sliding(iv.kind)) continue;
      for (const auto& [p, tangent] : {std::pair{iv.start, iv.start_is_tangency},
                                       std::pair{iv.end, iv.end_is_tangency}}) {
        if (!tangent) continue;
        const auto [lp, lm] = lie_derivatives(sys, p);
        double c = 0.0;
        (void)filippov_combination(sys, p, &c);
        worst = std::max({worst, std::min(std::fabs(lp), std::fabs(lm)),
                          std::min(std::fabs(c), std::fabs(1.0 - c))});
        ++n;
      }
    }
    r.pass = worst <= 1e-8;
    r.detail = std::to_string(n) + " endpoints, worst " + fmt("%.2e", worst);
  });
}

void regularize_checks(Suite& s, const SmoothFamily& fam, const SigmaScan& scan) {
  const PiecewiseSystem& sys = fam.system();
  s.run("regularize: exact saturation outside the band", [&](CheckResult& r) {
    double worst = 0.0;
    for (double delta : {0.1, 0.01, 0.001})
      for (const auto& smp : scan.samples) {
        const Vec g = sys.grad_h(smp.point);
        const double gg = dot(g, g);
        for (double off : {1.0, 1.5, 3.0}) {
          for (int side : {1, -1}) {
            Vec p = smp.point;
            for (std::size_t k = 0; k < p.size(); ++k) p[k] += side * off * delta * g[k] / gg;
            const double hv = sys.h(p);
            if (std::fabs(hv) < delta) continue;
            const Vec want = hv > 0 ? sys.plus(p) : sys.minus(p);
            worst = std::max(worst, norm_inf(sub(fam(p, delta), want)));
          }
        }
      }
    r.pass = worst == 0.0;
    r.detail = "max deviation " + fmt("%.2e", worst);
  });
  s.run("regularize: field stays between X- and X+", [&](CheckResult& r) {
    if (fam.provenance() == Provenance::Nonlinear) {
      r.pass = true;
      r.detail = "not applicable";
      return;
    }
    double worst = 0.0;
    for (const auto& smp : scan.samples) {
      const Vec xp = sys.plus(smp.point), xm = sys.minus(smp.point);
      const Vec d = sub(xp, xm);
      std::size_t k = 0;
      for (std::size_t i = 1; i < d.size(); ++i)
        if (std::fabs(d[i]) > std::fabs(d[k])) k = i;
      if (std::fabs(d[k]) < 1e-12) continue;
      for (int j = -10; j <= 10; ++j) {
        const Vec v = fam.at_transition(smp.point, j / 10.0);
        const double mu = (v[k] - xm[k]) / d[k];
        worst = std::max({worst, -mu - 1e-12, mu - 1.0 - 1e-12});
        for (std::size_t i = 0; i < d.size(); ++i)
          worst = std::max(worst, std::fabs(v[i] - xm[i] - mu * d[i]) - 1e-12);
      }
    }
    r.pass = worst <= 0.0;
    r.detail = "max excursion " + fmt("%.2e", std::max(worst, 0.0));
  });
  s.run("regularize: transition range and end values", [&](CheckResult& r) {
    const Transition& tr = fam.transition();
    double worst = 0.0;
    for (const auto& smp : scan.samples) {
      worst = std::max({worst, std::fabs(tr(smp.point, 1.0) - 1.0),
                        std::fabs(tr(smp.point, -1.0) + 1.0)});
      for (int j = -100; j <= 100; ++j)
        worst = std::max(worst, std::fabs(tr(smp.point, j / 100.0)) - 1.0);
    }
    r.pass = worst <= 1e-15;
    r.detail = "max violation " + fmt("%.2e", worst);
  });
}

void blowup_checks(Suite& s, const SystemConfig& cfg, const PiecewiseSystem& sys,
                   const SigmaScan& scan) {
  if (!sys.switching_coord) return;
  const std::size_t k = *sys.switching_coord;
  s.run("blowup: reduced flow equals the sliding field", [&](CheckResult& r) {
    double worst = 0.0;
    std::size_t n = 0;
    for (const char* name : {"cubic", "quintic", "sine"}) {
      const SlowFastSystem sfs = directional_blowup(st_regularize(sys, builtin_phi(name)), k);
      for (const auto& smp : scan.samples) {
        if (!is_sliding(smp.cls.kind) || near_tangency(smp.cls)) continue;
        const auto roots = critical_roots(sfs, sfs.slow_part(smp.point));
        if (roots.size() != 1) {
          r.detail = std::string(name) + ": expected one critical root";
          return;
        }
        const Vec red = reduced_rhs(sfs, roots[0]);
        const Vec sl = sfs.slow_part(sliding_vf(sys, smp.point));
        worst = std::max(worst, norm_inf(sub(red, sl)));
        ++n;
      }
    }
    r.pass = worst <= 1e-10;
    r.detail = std::to_string(n) + " samples, max diff " + fmt("%.2e", worst);
  });
  s.run("blowup: normal hyperbolicity formula", [&](CheckResult& r) {
    const Transition phi = builtin_phi("cubic");
    const SlowFastSystem sfs = directional_blowup(st_regularize(sys, phi), k);
    double worst = 0.0;
    for (const auto& smp : scan.samples) {
      if (!is_sliding(smp.cls.kind) || near_tangency(smp.cls)) continue;
      for (const auto& root : critical_roots(sfs, sfs.slow_part(smp.point))) {
        const double want = phi.phi_dt(root.ybar) * (smp.cls.lplus - smp.cls.lminus) / 2.0;
        worst = std::max(worst, std::fabs(root.dbeta - want) / std::max(1.0, std::fabs(want)));
        if (root.attracting != (smp.cls.kind == SigmaKind::SlidingAttracting)) {
          r.detail = "stability disagrees with the Filippov class";
          return;
        }
      }
    }
    r.pass = worst <= 1e-6;
    r.detail = "max relative error " + fmt("%.2e", worst);
  });
  s.run("blowup: r-regions contain the Filippov regions", [&](CheckResult& r) {
    const auto regions =
        r_region_scan(sys, build_transition(cfg), config_segment(cfg, sys), scan.samples.size());
    std::size_t violations = 0;
    for (std::size_t i = 0; i < regions.size(); ++i) {
      const SigmaClass& c = scan.samples[i].cls;
      if (near_tangency(c)) continue;
      if (regions[i].region == RRegion::RSewing && c.kind != SigmaKind::Sewing) ++violations;
      if (is_sliding(c.kind) && regions[i].region != RRegion::RSliding) ++violations;
    }
    r.pass = violations == 0;
    r.detail = std::to_string(violations) + " violations on " + std::to_string(regions.size()) +
               " points";
  });
}

void flow_checks(Suite& s, const SystemConfig& cfg, const PiecewiseSystem& sys) {
  const std::string x0s = cfg.get("x0");
  if (x0s.empty()) return;
  const Vec x0 = parse_list(x0s);
  const double t_end = parse_list(cfg.get("t_end", "10")).at(0);
  s.run("flow: modes respect the sign of h and segments chain", [&](CheckResult& r) {
    const Trajectory tr = integrate_filippov(sys, x0, 0.0, t_end);
    double worst_side = 0.0, worst_gap = 0.0;
    for (std::size_t i = 0; i < tr.segments.size(); ++i) {
      const Segment& seg = tr.segments[i];
      for (const Vec& x : seg.x) {
        const double hv = sys.h(x);
        if (seg.mode == Mode::FlowPlus) worst_side = std::max(worst_side, -hv);
        if (seg.mode == Mode::FlowMinus) worst_side = std::max(worst_side, hv);
        if (seg.mode == Mode::Sliding) worst_side = std::max(worst_side, std::fabs(hv));
      }
      if (i > 0) {
        worst_gap = std::max(worst_gap, dist2(tr.segments[i - 1].x.back(), seg.x.front()));
        worst_gap = std::max(worst_gap, std::fabs(tr.segments[i - 1].t.back() - seg.t.front()));
      }
    }
    r.pass = worst_side <= 1e-9 && worst_gap <= 1e-12;
    r.detail = std::to_string(tr.segments.size()) + " segments, side " +
               fmt("%.2e", worst_side) + ", gap " + fmt("%.2e", worst_gap);
  });
  s.run("flow: final state stable under tolerance refinement", [&](CheckResult& r) {
    FilippovOptions a, b;
    b.ode.rtol = a.ode.rtol / 100.0;
    b.ode.atol = a.ode.atol / 100.0;
    const double d = dist2(integrate_filippov(sys, x0, 0.0, t_end, a).final_state(),
                           integrate_filippov(sys, x0, 0.0, t_end, b).final_state());
    r.pass = d <= 1e-5;
    r.detail = "difference " + fmt("%.2e", d);
  });
}

void equilibria_checks(Suite& s, std::mt19937_64& rng) {
  s.run("equilibria: eigenvalue residuals on random matrices", [&](CheckResult& r) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 250; ++trial) {
      const std::size_t n = 2 + static_cast<std::size_t>(trial % 5);
      Matrix A(n, Vec(n));
      double fro = 0.0;
      for (auto& row : A)
        for (double& v : row) {
          v = u(rng);
          fro += v * v;
        }
      const double bound = 1e-8 * std::pow(std::max(std::sqrt(fro), 1.0), double(n));
      for (const Complex& l : eigenvalues_small(A))
        worst = std::max(worst, std::abs(det_shifted(A, l)) / bound);
    }
    r.pass = worst <= 1.0;
    r.detail = "max residual / bound " + fmt("%.2e", worst);
  });
  s.run("equilibria: Newton converges quadratically", [&](CheckResult& r) {
    const VectorFn F = [](std::span<const double> x) {
      return Vec{x[0] * x[0] + x[1] * x[1] - 4.0, x[0] - x[1] + 0.25 * std::sin(x[0])};
    };
    std::uniform_real_distribution<double> u(0.8, 2.5);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const NewtonResult res = newton_solve(F, Vec{u(rng), u(rng)});
      const auto& it = res.iterates;
      for (std::size_t i = 0; i + 2 < it.size(); ++i) {
        const double e0 = dist2(it[i], res.x);
        const double e1 = dist2(it[i + 1], res.x);
        if (e0 > 1e-2 || e0 < 1e-6) continue;
        worst = std::max(worst, (e1 - 1e-13) / (e0 * e0));
      }
    }
    r.pass = worst <= 10.0;
    r.detail = "max e_{k+1}/e_k^2 " + fmt("%.3g", worst);
  });
  s.run("equilibria: Hausdorff distance is a metric on samples", [&](CheckResult& r) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto random_set = [&] {
      std::vector<Vec> s(1 + rng() % 20);
      for (auto& p : s) p = {u(rng), u(rng)};
      return s;
    };
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const auto A = random_set(), B = random_set(), C = random_set();
      const double ab = hausdorff(A, B), ba = hausdorff(B, A);
      worst = std::max({worst, hausdorff(A, A), std::fabs(ab - ba), -ab,
                        ab - hausdorff(A, C) - hausdorff(C, B)});
    }
    r.pass = worst <= 1e-15;
    r.detail = "max violation " + fmt("%.2e", std::max(worst, 0.0));
  });
  s.run("blowup: polar chart identity", [&](CheckResult& r) {
    std::uniform_real_distribution<double> ux(-2.0, 2.0), ut(1e-3, 3.14159265358979 - 1e-3),
        ur(0.0, 1.0);
    std::vector<std::array<double, 3>> samples(1000);
    for (auto& smp : samples) smp = {ux(rng), ut(rng), ur(rng)};
    const double worst = polar_directional_check(samples);
    r.pass = worst <= 1e-14;
    r.detail = "1000 samples, max " + fmt("%.2e", worst);
  });
}

void nsff_checks(Suite& s, const SystemConfig& cfg) {
  const NonsmoothSlowFast ns = build_nsff(cfg);
  s.run("nsff: reduction commutes with taking the sliding field", [&](CheckResult& r) {
    const ReducedNonsmooth red = reduce(ns, parse_list(cfg.get("y0", "0")).at(0));
    const SigmaScan scan = scan_sigma(red.system, config_segment(cfg, red.system), 200);
    double worst = 0.0;
    std::size_t n = 0;
    for (const auto& smp : scan.samples) {
      if (!is_sliding(smp.cls.kind) || near_tangency(smp.cls)) continue;
      const SlidingEps z = sliding_vf_eps(ns, smp.point, red.y_of(smp.point), 0.0);
      worst = std::max({worst, norm_inf(sub(z.slow, sliding_vf(red.system, smp.point))),
                        std::fabs(z.fast)});
      ++n;
    }
    r.pass = n > 0 && worst <= 1e-10;
    r.detail = std::to_string(n) + " samples, max diff " + fmt("%.2e", worst);
  });
  const std::string bound = cfg.get("order_bound");
  if (bound.empty() || cfg.get("point").empty()) return;
  s.run("nsff: equilibrium moves by O(eps)", [&](CheckResult& r) {
    const double c = parse_list(bound).at(0);
    const auto rows = persistence_sweep_eps(ns, parse_list(cfg.get("point")),
                                            parse_list(cfg.get("y0", "0")).at(0),
                                            parse_list(cfg.get("eps", "0.1,0.05,0.01")));
    double worst = 0.0;
    for (const auto& row : rows) {
      if (!row.ok) {
        r.detail = "eps " + num(row.eps) + ": " + row.error;
        return;
      }
      worst = std::max(worst, row.distance / row.eps);
    }
    r.pass = worst <= c;
    r.detail = "max distance / eps " + fmt("%.4f", worst) + " (bound " + fmt("%g", c) + ")";
  });
}

void ccomb_checks(Suite& s, const SystemConfig& cfg, const ContinuousCombination& cc,
                  const SigmaScan& scan) {
  s.run("ccomb: endpoints reproduce X+ and X-", [&](CheckResult& r) {
    std::vector<Vec> pts;
    for (const auto& smp : scan.samples) pts.push_back(smp.point);
    const double e = cc.endpoint_error(pts);
    r.pass = e <= 1e-12;
    r.detail = "max error " + fmt("%.2e", e);
  });
  s.run("ccomb: c-regions contain the Filippov regions", [&](CheckResult& r) {
    std::size_t violations = 0;
    for (const auto& smp : scan.samples) {
      if (near_tangency(smp.cls)) continue;
      const CClass c = c_classify(cc, smp.point);
      if (!c.sliding && smp.cls.kind != SigmaKind::Sewing) ++violations;
      if (is_sliding(smp.cls.kind) && !c.sliding) ++violations;
    }
    r.pass = violations == 0;
    r.detail = std::to_string(violations) + " violations on " +
               std::to_string(scan.samples.size()) + " points";
  });
  s.run("ccomb: tangencies are lambda = +-1 roots", [&](CheckResult& r) {
    double worst = 0.0;
    std::size_t n = 0;
    for (const auto& iv : scan.intervals)
      for (const auto& [p, tangent] : {std::pair{iv.start, iv.start_is_tangency},
                                       std::pair{iv.end, iv.end_is_tangency}}) {
        if (!tangent) continue;
        const auto [lp, lm] = lie_derivatives(cc.base, p);
        const double want = std::fabs(lp) < std::fabs(lm) ? 1.0 : -1.0;
        double best = 2.0;
        for (const auto& b : c_classify(cc, p).branches)
          best = std::min(best, std::fabs(b.lambda - want));
        worst = std::max(worst, best);
        ++n;
      }
    r.pass = worst <= 1e-8;
    r.detail = std::to_string(n) + " tangency points, worst " + fmt("%.2e", worst);
  });
  if (cfg.kind == "ccomb" || !cfg.xtilde.empty()) {
    s.run("ccomb: nonlinear regularization matches c-sliding", [&](CheckResult& r) {
      const EquivalenceReport rep =
          nonlinear_equivalence_check(cc, builtin_phi("cubic"), config_segment(cfg, cc.base), 200);
      r.pass = rep.ok;
      r.detail = std::to_string(rep.count_mismatches) + " count mismatches, root " +
                 fmt("%.2e", rep.max_root_mismatch) + ", derivative " +
                 fmt("%.2e", rep.max_derivative_mismatch);
    });
  }
}

void determinism_check(Suite& s, const SystemConfig& cfg, std::uint64_t seed) {
  s.run("cli: repeated runs are byte-identical", [&](CheckResult& r) {
    CommandOptions opt;
    opt.seed = seed;
    opt.n = 101;
    std::string verb = cfg.kind == "piecewise" ? "classify" : "sweep-eps";
    auto once = [&] {
      try {
        const Outputs o = run_verb(verb, cfg, opt);
        std::string all;
        for (const auto& [name, text] : o.files) all += name + "\n" + text;
        return all;
      } catch (const Error& e) {
        return std::string("error ") + e.what();
      }
    };
    const std::string a = once(), b = once();
    r.pass = a == b && serialize(cfg) == serialize(parse_config(serialize(cfg)));
    r.detail = verb + ", " + std::to_string(a.size()) + " bytes";
  });
}

}  // namespace

std::vector<CheckResult> run_checks(const SystemConfig& cfg, std::uint64_t seed) {
  Suite s;
  std::mt19937_64 rng(seed);
  expr_checks(s, cfg, rng);

  const PiecewiseSystem sys = build_piecewise(cfg);
  SigmaScan scan;
  s.run("psys: scan of the configured segment", [&](CheckResult& r) {
    scan = scan_sigma(sys, config_segment(cfg, sys), 300);
    r.pass = true;
    r.detail = std::to_string(scan.intervals.size()) + " intervals";
  });
  if (!scan.samples.empty()) {
    psys_checks(s, sys, scan);
    const Transition tr = build_transition(cfg);
    regularize_checks(s, tr.monotone() ? st_regularize(sys, tr) : r_regularize(sys, tr), scan);
    blowup_checks(s, cfg, sys, scan);
    if (cfg.kind == "piecewise") flow_checks(s, cfg, sys);
    if (cfg.kind == "ccomb" || cfg.kind == "piecewise")
      ccomb_checks(s, cfg, build_combination(cfg), scan);
  }
  if (cfg.kind == "nsff") nsff_checks(s, cfg);
  equilibria_checks(s, rng);
  determinism_check(s, cfg, seed);
  return s.results;
}

}  // namespace nsdyn::cli
