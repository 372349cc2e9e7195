#include "nsdyn/flow.hpp"

#include <algorithm>
#include <cmath>

namespace nsdyn {

const char* to_string(Mode m) {
  switch (m) {
    case Mode::FlowPlus: return "flow-plus";
    case Mode::FlowMinus: return "flow-minus";
    case Mode::Sliding: return "sliding";
    case Mode::Smooth: return "smooth";
  }
  return "?";
}

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::HitSigma: return "hit-sigma";
    case EventKind::SlideEnter: return "slide-enter";
    case EventKind::SlideExit: return "slide-exit";
    case EventKind::TangencyStop: return "tangency-stop";
    case EventKind::RepellingEntry: return "repelling-entry";
  }
  return "?";
}

Vec Segment::at(double time) const {
  if (t.empty()) throw Error(ErrorKind::InvalidArgument, "empty segment");
  const bool forward = t.back() >= t.front();
  auto before = [forward](double a, double b) { return forward ? a < b : a > b; };
  if (!before(t.front(), time) || t.size() == 1) return x.front();
  if (!before(time, t.back())) return x.back();
  std::size_t k = 1;
  while (k + 1 < t.size() && before(t[k], time)) ++k;
  const double h = t[k] - t[k - 1];
  const double s = (time - t[k - 1]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  Vec out(x[k].size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = h00 * x[k - 1][i] + h10 * h * dx[k - 1][i] + h01 * x[k][i] +
             h11 * h * dx[k][i];
  return out;
}

std::vector<Mode> Trajectory::modes() const {
  std::vector<Mode> m;
  for (const auto& s : segments) m.push_back(s.mode);
  return m;
}

namespace {

struct Stage {
  Vec x;    // 5th-order solution
  Vec err;  // embedded error estimate
};

// One Dormand-Prince step of signed size h from (x, f0 = f(x)).
Stage dp_step(const VectorFn& f, const Vec& x, const Vec& f0, double h) {
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                          a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                          a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                          a65 = -5103.0 / 18656.0;
  static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                          b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
  static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0,
                          e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                          e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
  const std::size_t n = x.size();
  Vec y(n);
  const Vec& k1 = f0;
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + h * a21 * k1[i];
  const Vec k2 = f(y);
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + h * (a31 * k1[i] + a32 * k2[i]);
  const Vec k3 = f(y);
  for (std::size_t i = 0; i < n; ++i)
    y[i] = x[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
  const Vec k4 = f(y);
  for (std::size_t i = 0; i < n; ++i)
    y[i] = x[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
  const Vec k5 = f(y);
  for (std::size_t i = 0; i < n; ++i)
    y[i] = x[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                       a65 * k5[i]);
  const Vec k6 = f(y);
  Stage out{Vec(n), Vec(n)};
  for (std::size_t i = 0; i < n; ++i)
    out.x[i] = x[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                           b6 * k6[i]);
  const Vec k7 = f(out.x);
  for (std::size_t i = 0; i < n; ++i)
    out.err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                      e6 * k6[i] + e7 * k7[i]);
  return out;
}

double error_norm(const Vec& x0, const Stage& st, const OdeOptions& opt) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x0.size(); ++i) {
    const double sc =
        opt.atol + opt.rtol * std::max(std::fabs(x0[i]), std::fabs(st.x[i]));
    const double r = st.err[i] / sc;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(x0.size()));
}

double initial_step(const Vec& x0, const Vec& f0, double span, const OdeOptions& opt) {
  double d0 = 0.0, d1 = 0.0;
  for (std::size_t i = 0; i < x0.size(); ++i) {
    const double sc = opt.atol + opt.rtol * std::fabs(x0[i]);
    d0 += (x0[i] / sc) * (x0[i] / sc);
    d1 += (f0[i] / sc) * (f0[i] / sc);
  }
  d0 = std::sqrt(d0 / x0.size());
  d1 = std::sqrt(d1 / x0.size());
  double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  return std::min(h, std::fabs(span));
}

// Locates tau in (0, h] with g(step(x0, tau)) = 0 given g(x0) >= 0 > g(x1).
std::pair<double, Vec> locate(const VectorFn& f, const ScalarFn& g, const Vec& x0,
                              const Vec& f0, double h, double g0, const Vec& x1,
                              double g1, double t_scale) {
  if (g0 <= 0.0) return {0.0, x0};
  double lo = 0.0, hi = h, glo = g0, ghi = g1;
  Vec xhi = x1, xlo = x0;
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    if (std::fabs(ghi) <= 1e-12) return {hi, xhi};
    if (std::fabs(hi - lo) <= 1e-15 * t_scale) break;
    // Illinois-modified regula falsi, bisection when it stalls.
    double tau = hi - ghi * (hi - lo) / (ghi - glo);
    if (!(std::fabs(tau - lo) > 0.0 && std::fabs(hi - tau) > 0.0) || it % 8 == 7)
      tau = 0.5 * (lo + hi);
    const Vec xt = dp_step(f, x0, f0, tau).x;
    const double gt = g(xt);
    if (gt < 0.0) {
      hi = tau;
      ghi = gt;
      xhi = xt;
      if (side == -1) glo *= 0.5;
      side = -1;
    } else {
      lo = tau;
      glo = gt;
      xlo = xt;
      if (std::fabs(gt) <= 1e-12) return {lo, xlo};
      if (side == 1) ghi *= 0.5;
      side = 1;
    }
  }
  return std::fabs(glo) < std::fabs(ghi) ? std::pair{lo, xlo} : std::pair{hi, xhi};
}

}  // namespace

RunResult integrate_events(const VectorFn& f, std::span<const double> x0_in,
                           double t0, double t1, const OdeOptions& opt,
                           const std::vector<EventFn>& events, Mode mode,
                           const std::function<void(Vec&)>& project) {
  if (!(opt.rtol > 0.0) || !(opt.atol > 0.0))
    throw Error(ErrorKind::InvalidArgument, "rtol and atol must be positive");
  RunResult res;
  res.segment.mode = mode;
  Vec x(x0_in.begin(), x0_in.end());
  Vec fx = f(x);
  double t = t0;
  res.segment.t.push_back(t);
  res.segment.x.push_back(x);
  res.segment.dx.push_back(fx);
  const double span = t1 - t0;
  if (span == 0.0) {
    res.t = t;
    res.x = x;
    return res;
  }
  const double dir = span > 0.0 ? 1.0 : -1.0;
  const double h_max = opt.h_max > 0.0 ? opt.h_max : std::fabs(span);
  double h = std::min(initial_step(x, fx, span, opt), h_max);
  std::vector<double> gvals(events.size());
  std::vector<bool> armed(events.size());
  for (std::size_t e = 0; e < events.size(); ++e) {
    gvals[e] = events[e].g(x);
    armed[e] = !events[e].arm || gvals[e] > 0.0;
  }
  const double t_scale = std::max({1.0, std::fabs(t0), std::fabs(t1)});
  std::size_t steps = 0;
  while (dir * (t1 - t) > 0.0) {
    if (++steps > opt.max_steps)
      throw Error(ErrorKind::MaxSteps, "integration exceeded the maximum step count");
    if (h < 1e-14 * std::fabs(span))
      throw Error(ErrorKind::StepUnderflow,
                  "step size underflow at t = " + std::to_string(t) +
                      " (stiff or singular field)");
    bool last = false;
    if (h >= dir * (t1 - t)) {
      h = dir * (t1 - t);
      last = true;
    }
    // A trial step that leaves the domain of f is rejected like an
    // inaccurate one.
    Stage st;
    double err = 0.0;
    Vec xn;
    std::vector<double> gnew(events.size());
    bool finite = true;
    try {
      st = dp_step(f, x, fx, dir * h);
      err = error_norm(x, st, opt);
      finite = std::isfinite(err);
      for (double v : st.x) finite = finite && std::isfinite(v);
      if (finite && err <= 1.0) {
        xn = st.x;
        if (project) project(xn);
        for (std::size_t e = 0; e < events.size(); ++e) gnew[e] = events[e].g(xn);
      }
    } catch (const Error& ex) {
      if (ex.kind() != ErrorKind::DegenerateDenominator && ex.kind() != ErrorKind::MathDomain)
        throw;
      finite = false;
    }
    if (!finite || err > 1.0) {
      h *= finite ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.1;
      continue;
    }
    // Events on the accepted step.
    std::size_t fired = events.size();
    double best_tau = 0.0;
    Vec best_x;
    for (std::size_t e = 0; e < events.size(); ++e) {
      const double gn = gnew[e];
      if (armed[e] && gn < 0.0) {
        auto [tau, xe] = locate(f, events[e].g, x, fx, dir * h, gvals[e], xn, gn, t_scale);
        if (fired == events.size() || std::fabs(tau) < std::fabs(best_tau)) {
          fired = e;
          best_tau = tau;
          best_x = std::move(xe);
        }
      }
    }
    if (fired < events.size()) {
      if (project) project(best_x);
      res.hit = true;
      res.which = fired;
      res.t = t + best_tau;
      res.x = best_x;
      if (best_tau != 0.0) {
        res.segment.t.push_back(res.t);
        res.segment.x.push_back(best_x);
        res.segment.dx.push_back(f(best_x));
      }
      return res;
    }
    t = last ? t1 : t + dir * h;
    x = std::move(xn);
    fx = f(x);
    res.segment.t.push_back(t);
    res.segment.x.push_back(x);
    res.segment.dx.push_back(fx);
    for (std::size_t e = 0; e < events.size(); ++e) {
      gvals[e] = events[e].g(x);
      if (gvals[e] > 0.0) armed[e] = true;
    }
    const double fac = err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
    h = std::min(h * fac, h_max);
  }
  res.t = t;
  res.x = x;
  return res;
}

Trajectory integrate_smooth(const VectorFn& f, std::span<const double> x0, double t0,
                            double t1, const OdeOptions& opt) {
  Trajectory tr;
  tr.segments.push_back(integrate_events(f, x0, t0, t1, opt, {}).segment);
  return tr;
}

std::optional<Crossing> detect_crossing(const VectorFn& f, const ScalarFn& h,
                                        std::span<const double> x0, double t0,
                                        double t1, const OdeOptions& opt) {
  const double h0 = h(x0);
  if (h0 == 0.0) return Crossing{t0, Vec(x0.begin(), x0.end())};
  const double sgn = h0 > 0.0 ? 1.0 : -1.0;
  EventFn ev{[h, sgn](std::span<const double> p) { return sgn * h(p); }, false};
  const RunResult r = integrate_events(f, x0, t0, t1, opt, {ev});
  if (!r.hit) return std::nullopt;
  return Crossing{r.t, r.x};
}

void project_to_sigma(const PiecewiseSystem& sys, Vec& p) {
  if (sys.switching_coord) {
    p[*sys.switching_coord] -= sys.h(p);
    return;
  }
  for (int it = 0; it < 20; ++it) {
    const double hv = sys.h(p);
    if (std::fabs(hv) <= 1e-15) return;
    const Vec g = sys.grad_h(p);
    const double gg = dot(g, g);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] -= hv * g[i] / gg;
  }
}

namespace {

void push_event(Trajectory& tr, double t, EventKind k, const Vec& x,
                const FilippovOptions& opt) {
  tr.events.push_back({t, k, x});
  if (tr.events.size() > opt.max_events)
    throw Error(ErrorKind::MaxSteps,
                "event limit exceeded (" + std::to_string(opt.max_events) +
                    "); possible chattering");
}

void halt(Trajectory& tr, double t, EventKind k, const Vec& x, std::string why) {
  tr.events.push_back({t, k, x});
  tr.halted = true;
  tr.halt_reason = std::move(why);
}

// Mode to continue with from a point of Sigma; empty when integration stops.
std::optional<Mode> mode_on_sigma(Trajectory& tr, const PiecewiseSystem& sys, double t,
                                  const Vec& p, const FilippovOptions& opt,
                                  bool arriving) {
  const SigmaClass c = classify_point(sys, p, opt.sigma);
  switch (c.kind) {
    case SigmaKind::SlidingAttracting:
      push_event(tr, t, EventKind::SlideEnter, p, opt);
      return Mode::Sliding;
    case SigmaKind::SlidingRepelling:
      halt(tr, t, EventKind::RepellingEntry, p,
           "reached a repelling sliding point; forward flow is not unique");
      return std::nullopt;
    case SigmaKind::Sewing:
      if (arriving) push_event(tr, t, EventKind::HitSigma, p, opt);
      return c.lplus > 0.0 ? Mode::FlowPlus : Mode::FlowMinus;
    case SigmaKind::TangencyPlus:
    case SigmaKind::TangencyMinus:
      halt(tr, t, EventKind::TangencyStop, p,
           std::string("reached a tangency point (") + to_string(c.kind) + ")");
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

Trajectory integrate_filippov(const PiecewiseSystem& sys, std::span<const double> x0,
                              double t0, double t1, const FilippovOptions& opt) {
  if (!(t1 >= t0))
    throw Error(ErrorKind::InvalidArgument, "Filippov integration runs forward only");
  Trajectory tr;
  Vec x(x0.begin(), x0.end());
  double t = t0;
  std::optional<Mode> mode;
  const double h0 = sys.h(x);
  if (h0 > opt.sigma.on_sigma) {
    mode = Mode::FlowPlus;
  } else if (h0 < -opt.sigma.on_sigma) {
    mode = Mode::FlowMinus;
  } else {
    project_to_sigma(sys, x);
    mode = mode_on_sigma(tr, sys, t, x, opt, false);
  }
  const ScalarFn h = sys.h;
  while (mode && t < t1) {
    RunResult r;
    if (*mode == Mode::Sliding) {
      const VectorFn f = [&sys](std::span<const double> p) {
        return filippov_combination(sys, p);
      };
      // Attracting sliding has X+h < 0 < X-h; the exit events are the two
      // tangencies s -> 0 (X+h -> 0) and s -> 1 (X-h -> 0).
      std::vector<EventFn> ev{
          {[&sys](std::span<const double> p) { return -lie_derivatives(sys, p).first; }, false},
          {[&sys](std::span<const double> p) { return lie_derivatives(sys, p).second; }, false}};
      r = integrate_events(f, x, t, t1, opt.ode, ev, Mode::Sliding,
                           [&sys](Vec& p) { project_to_sigma(sys, p); });
    } else {
      const bool plus = *mode == Mode::FlowPlus;
      EventFn ev{plus ? h
                      : ScalarFn([h](std::span<const double> p) { return -h(p); }),
                 false};
      r = integrate_events(plus ? sys.plus : sys.minus, x, t, t1, opt.ode, {ev},
                           *mode);
    }
    if (r.segment.t.size() > 1 || tr.segments.empty())
      tr.segments.push_back(std::move(r.segment));
    t = r.t;
    x = r.x;
    if (!r.hit) break;
    project_to_sigma(sys, x);
    if (*mode == Mode::Sliding) {
      push_event(tr, t, EventKind::SlideExit, x, opt);
      // s -> 0: X+ is tangent, continue with it; s -> 1: continue with X-.
      mode = r.which == 0 ? Mode::FlowPlus : Mode::FlowMinus;
    } else {
      mode = mode_on_sigma(tr, sys, t, x, opt, true);
    }
  }
  if (tr.segments.empty()) {
    Segment s;
    s.mode = Mode::Smooth;
    s.t.push_back(t);
    s.x.push_back(x);
    s.dx.push_back(Vec(x.size(), 0.0));
    tr.segments.push_back(std::move(s));
  }
  return tr;
}

SlowFastRun integrate_slowfast(const SlowFastSystem& sfs, double delta,
                               std::span<const double> x0, double ybar0, double t0,
                               double t1, double c, const OdeOptions& opt) {
  if (!(delta >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "delta must be non-negative");
  const std::size_t m = sfs.slow_dim;
  VectorFn f = [&sfs, delta, m](std::span<const double> z) {
    const std::span<const double> x = z.subspan(0, m);
    Vec out = sfs.alpha(x, z[m], delta);
    for (double& v : out) v *= delta;
    out.push_back(sfs.beta(x, z[m], delta));
    return out;
  };
  Vec z(x0.begin(), x0.end());
  z.push_back(ybar0);
  SlowFastRun run;
  run.trajectory = integrate_smooth(f, z, t0, t1, opt);
  const Vec& zend = run.trajectory.final_state();
  const auto roots = critical_roots(sfs, std::span<const double>(zend).subspan(0, m));
  run.manifold_distance = INFINITY;
  for (const auto& r : roots)
    run.manifold_distance = std::min(run.manifold_distance, std::fabs(zend[m] - r.ybar));
  run.near_manifold = run.manifold_distance <= c * std::max(delta, 0.0);
  return run;
}

}  // namespace nsdyn
