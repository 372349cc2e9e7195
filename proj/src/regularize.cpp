#include "nsdyn/regularize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace nsdyn {

double ContinuousCombination::normal_component(double lambda,
                                               std::span<const double> p) const {
  const Vec v = xtilde(lambda, p);
  if (base.switching_coord) return v[*base.switching_coord];
  return dot(v, base.grad_h(p));
}

double ContinuousCombination::endpoint_error(const std::vector<Vec>& points) const {
  double err = 0.0;
  for (const Vec& p : points) {
    err = std::max(err, norm_inf(sub(xtilde(1.0, p), base.plus(p))));
    err = std::max(err, norm_inf(sub(xtilde(-1.0, p), base.minus(p))));
  }
  return err;
}

ContinuousCombination ContinuousCombination::linear(const PiecewiseSystem& sys) {
  ContinuousCombination cc;
  cc.base = sys;
  cc.xtilde = [plus = sys.plus, minus = sys.minus](double lambda,
                                                   std::span<const double> p) {
    const Vec a = plus(p);
    const Vec b = minus(p);
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      out[i] = 0.5 * (1.0 + lambda) * a[i] + 0.5 * (1.0 - lambda) * b[i];
    return out;
  };
  return cc;
}

Transition::Transition(std::string name, TransitionKind kind, Fn value, Fn slope,
                       std::vector<CriticalPoint> critical)
    : name_(std::move(name)),
      kind_(kind),
      value_(std::move(value)),
      slope_(std::move(slope)),
      critical_(std::move(critical)) {}

double Transition::operator()(std::span<const double> p, double t) const {
  if (t >= 1.0) return 1.0;
  if (t <= -1.0) return -1.0;
  return value_(p, t);
}

double Transition::dt(std::span<const double> p, double t) const {
  if (t >= 1.0 || t <= -1.0) return 0.0;
  return slope_(p, t);
}

double Transition::phi(double t) const {
  if (!monotone())
    throw Error(ErrorKind::InvalidArgument,
                "transition '" + name_ + "' depends on the state");
  return (*this)(std::span<const double>{}, t);
}

double Transition::phi_dt(double t) const {
  if (!monotone())
    throw Error(ErrorKind::InvalidArgument,
                "transition '" + name_ + "' depends on the state");
  return dt(std::span<const double>{}, t);
}

std::optional<double> Transition::inverse(double v) const {
  if (v > 1.0 || v < -1.0) return std::nullopt;
  double lo = -1.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid) < v)
      lo = mid;
    else
      hi = mid;
  }
  double t = 0.5 * (lo + hi);
  const double slope = phi_dt(t);
  if (slope > 0.0) {
    const double polished = t - (phi(t) - v) / slope;
    if (polished >= lo - 1e-15 && polished <= hi + 1e-15 &&
        std::fabs(phi(polished) - v) <= std::fabs(phi(t) - v))
      t = polished;
  }
  return t;
}

namespace {

double cubic(double t) { return 0.5 * (3.0 * t - t * t * t); }
double cubic_dt(double t) { return 1.5 * (1.0 - t * t); }

}  // namespace

Transition builtin_phi(std::string_view name) {
  using P = std::span<const double>;
  if (name == "cubic")
    return Transition(
        "cubic", TransitionKind::Monotone, [](P, double t) { return cubic(t); },
        [](P, double t) { return cubic_dt(t); });
  if (name == "quintic")
    return Transition(
        "quintic", TransitionKind::Monotone,
        [](P, double t) {
          const double t2 = t * t;
          return (15.0 * t - 10.0 * t2 * t + 3.0 * t2 * t2 * t) / 8.0;
        },
        [](P, double t) {
          const double u = 1.0 - t * t;
          return 15.0 * u * u / 8.0;
        });
  if (name == "sine")
    return Transition(
        "sine", TransitionKind::Monotone,
        [](P, double t) { return std::sin(0.5 * std::numbers::pi * t); },
        [](P, double t) {
          return 0.5 * std::numbers::pi * std::cos(0.5 * std::numbers::pi * t);
        });
  throw Error(ErrorKind::InvalidArgument,
              "unknown transition '" + std::string(name) +
                  "' (expected cubic, quintic or sine)");
}

namespace {

// Increasing polynomial q on [-1, 1] with q(+-1) = +-1, q'(+-1) = 0 and a
// single interior critical point at a0: q' = k (1 - t^2) (t - a0)^2.
struct TargetProfile {
  double a0;
  double k;
  double q_minus;  // antiderivative at -1

  explicit TargetProfile(double a) : a0(a), k(15.0 / (2.0 + 10.0 * a * a)) {
    q_minus = antiderivative(-1.0);
  }
  double antiderivative(double s) const {
    const double s2 = s * s, s3 = s2 * s;
    return s3 / 3.0 - a0 * s2 + a0 * a0 * s - s3 * s2 / 5.0 +
           0.5 * a0 * s2 * s2 - a0 * a0 * s3 / 3.0;
  }
  double value(double t) const { return -1.0 + k * (antiderivative(t) - q_minus); }
  double slope(double t) const {
    const double d = t - a0;
    return k * (1.0 - t * t) * d * d;
  }
  // slope / (1 - t^2)
  double scaled_slope(double t) const {
    const double d = t - a0;
    return k * d * d;
  }
};

double bump(double x, double center, double width) {
  const double u = (x - center) / width;
  if (u <= -1.0 || u >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

void validate(const PsiParams& p) {
  if (!(std::fabs(p.a0) < 1.0))
    throw Error(ErrorKind::InvalidArgument, "psi requires |a0| < 1");
  if (!(p.width > 0.0))
    throw Error(ErrorKind::InvalidArgument, "psi bump width must be > 0");
}

}  // namespace

PsiGridReport psi_grid_report(const PsiParams& params) {
  validate(params);
  const TargetProfile q(params.a0);
  constexpr int kGrid = 200;
  const double p_lo = params.b0 - 1.5 * params.width;
  const double p_hi = params.b0 + 1.5 * params.width;

  // psi_t / (1 - t^2) = 1.5 (1 - a w) + a w q_t / (1 - t^2); strictly positive
  // slope on (-1, 1) is equivalent to this being positive.
  std::vector<double> g(kGrid * kGrid);
  std::vector<double> ts(kGrid), ps(kGrid);
  for (int i = 0; i < kGrid; ++i) {
    ts[i] = -1.0 + 2.0 * i / (kGrid - 1);
    ps[i] = p_lo + (p_hi - p_lo) * i / (kGrid - 1);
  }
  PsiGridReport rep;
  rep.min_slope = 1e300;
  for (int j = 0; j < kGrid; ++j) {
    const double aw = params.amp * bump(ps[j], params.b0, params.width);
    for (int i = 0; i < kGrid; ++i) {
      const double v = 1.5 * (1.0 - aw) + aw * q.scaled_slope(ts[i]);
      g[j * kGrid + i] = v;
      rep.min_slope = std::min(rep.min_slope, v);
    }
  }

  // Connected components of the low-slope set (4-neighbourhood).
  constexpr double kLow = 0.05;
  std::vector<int> label(g.size(), -1);
  std::vector<std::pair<double, double>> centroids;
  for (std::size_t start = 0; start < g.size(); ++start) {
    if (g[start] >= kLow || label[start] >= 0) continue;
    const int id = static_cast<int>(centroids.size());
    std::vector<std::size_t> stack{start};
    label[start] = id;
    double st = 0.0, sp = 0.0;
    std::size_t count = 0;
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      const int ci = static_cast<int>(c % kGrid), cj = static_cast<int>(c / kGrid);
      st += ts[ci];
      sp += ps[cj];
      ++count;
      const int di[] = {1, -1, 0, 0}, dj[] = {0, 0, 1, -1};
      for (int d = 0; d < 4; ++d) {
        const int ni = ci + di[d], nj = cj + dj[d];
        if (ni < 0 || nj < 0 || ni >= kGrid || nj >= kGrid) continue;
        const std::size_t nidx = static_cast<std::size_t>(nj * kGrid + ni);
        if (g[nidx] < kLow && label[nidx] < 0) {
          label[nidx] = id;
          stack.push_back(nidx);
        }
      }
    }
    centroids.emplace_back(st / count, sp / count);
  }
  rep.low_regions = centroids.size();
  if (rep.low_regions == 1) {
    rep.region_t = centroids[0].first;
    rep.region_value = centroids[0].second;
  }
  const double aw0 = params.amp;
  rep.slope_at_critical =
      (1.0 - params.a0 * params.a0) *
      (1.5 * (1.0 - aw0) + aw0 * q.scaled_slope(params.a0));
  rep.ok = rep.min_slope >= -1e-12 && rep.low_regions <= 1;
  return rep;
}

Transition builtin_psi(const PsiParams& params) {
  const PsiGridReport rep = psi_grid_report(params);
  if (!rep.ok)
    throw Error(ErrorKind::InvalidArgument,
                "psi construction failed the slope check (min scaled slope " +
                    std::to_string(rep.min_slope) + ", " +
                    std::to_string(rep.low_regions) + " critical regions)");
  const TargetProfile q(params.a0);
  const PsiParams pr = params;
  auto weight = [pr](std::span<const double> p) {
    if (pr.coord >= p.size())
      throw Error(ErrorKind::InvalidArgument, "psi coordinate out of range");
    return pr.amp * bump(p[pr.coord], pr.b0, pr.width);
  };
  std::vector<CriticalPoint> critical;
  if (params.amp == 1.0) critical.push_back({params.a0, params.coord, params.b0});
  char name[96];
  std::snprintf(name, sizeof name, "psi(a0=%g,b0=%g,coord=%zu,amp=%g,width=%g)",
                params.a0, params.b0, params.coord + 1, params.amp, params.width);
  return Transition(
      name, TransitionKind::NonMonotone,
      [q, weight](std::span<const double> p, double t) {
        const double aw = weight(p);
        const double base = cubic(t);
        return base + aw * (q.value(t) - base);
      },
      [q, weight](std::span<const double> p, double t) {
        const double aw = weight(p);
        const double base = cubic_dt(t);
        return base + aw * (q.slope(t) - base);
      },
      std::move(critical));
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::ST: return "st";
    case Provenance::R: return "r";
    case Provenance::Nonlinear: return "nonlinear";
  }
  return "?";
}

SmoothFamily::SmoothFamily(Provenance prov, PiecewiseSystem sys, Transition tr,
                           Blend blend)
    : prov_(prov), sys_(std::move(sys)), tr_(std::move(tr)), blend_(std::move(blend)) {}

Vec SmoothFamily::at_transition(std::span<const double> p, double t) const {
  if (t >= 1.0) return sys_.plus(p);
  if (t <= -1.0) return sys_.minus(p);
  return blend_(p, t);
}

Vec SmoothFamily::operator()(std::span<const double> p, double delta) const {
  if (!(delta > 0.0))
    throw Error(ErrorKind::InvalidArgument, "regularization width must be > 0");
  return at_transition(p, sys_.h(p) / delta);
}

VectorFn SmoothFamily::field(double delta) const {
  SmoothFamily self = *this;
  return [self, delta](std::span<const double> p) { return self(p, delta); };
}

namespace {

SmoothFamily::Blend convex_blend(const PiecewiseSystem& sys, const Transition& tr) {
  return [plus = sys.plus, minus = sys.minus, tr](std::span<const double> p,
                                                  double t) {
    const double w = tr(p, t);
    const Vec a = plus(p);
    const Vec b = minus(p);
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      out[i] = 0.5 * (1.0 + w) * a[i] + 0.5 * (1.0 - w) * b[i];
    return out;
  };
}

}  // namespace

SmoothFamily st_regularize(const PiecewiseSystem& sys, const Transition& phi) {
  if (!phi.monotone())
    throw Error(ErrorKind::InvalidArgument,
                "ST regularization needs a monotone transition");
  return SmoothFamily(Provenance::ST, sys, phi, convex_blend(sys, phi));
}

SmoothFamily r_regularize(const PiecewiseSystem& sys, const Transition& psi) {
  return SmoothFamily(Provenance::R, sys, psi, convex_blend(sys, psi));
}

SmoothFamily nonlinear_regularize(const ContinuousCombination& cc,
                                  const Transition& phi) {
  if (!phi.monotone())
    throw Error(ErrorKind::InvalidArgument,
                "nonlinear regularization needs a monotone transition");
  return SmoothFamily(Provenance::Nonlinear, cc.base, phi,
                      [xt = cc.xtilde, phi](std::span<const double> p, double t) {
                        return xt(phi.phi(t), p);
                      });
}

}  // namespace nsdyn
