#include "nsdyn/blowup.hpp"

#include <cmath>
#include <memory>
#include <numbers>

namespace nsdyn {

Vec SlowFastSystem::lift(std::span<const double> x, double ybar, double delta) const {
  Vec p;
  p.reserve(slow_dim + 1);
  for (std::size_t i = 0; i <= slow_dim; ++i) {
    if (i == split)
      p.push_back(delta * ybar);
    else
      p.push_back(x[i < split ? i : i - 1]);
  }
  return p;
}

Vec SlowFastSystem::slow_part(std::span<const double> p) const {
  Vec x;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (i != split) x.push_back(p[i]);
  return x;
}

SlowFastSystem directional_blowup(const SmoothFamily& fam, std::size_t split) {
  const PiecewiseSystem& sys = fam.system();
  if (!sys.switching_coord || *sys.switching_coord != split)
    throw Error(ErrorKind::InvalidArgument,
                "directional blow-up needs h equal to coordinate x" +
                    std::to_string(split + 1));
  SlowFastSystem sfs;
  sfs.slow_dim = sys.dim - 1;
  sfs.split = split;
  auto shared = std::make_shared<SlowFastSystem>(sfs);
  sfs.alpha = [fam, shared](std::span<const double> x, double ybar, double delta) {
    const Vec p = shared->lift(x, ybar, delta);
    return shared->slow_part(fam.at_transition(p, ybar));
  };
  sfs.beta = [fam, shared, split](std::span<const double> x, double ybar,
                                  double delta) {
    const Vec p = shared->lift(x, ybar, delta);
    return fam.at_transition(p, ybar)[split];
  };
  return sfs;
}

double polar_directional_check(const std::vector<std::array<double, 3>>& samples) {
  double worst = 0.0;
  for (const auto& [x, theta, r] : samples) {
    if (!(theta >= 1e-3 && theta <= std::numbers::pi - 1e-3))
      throw Error(ErrorKind::InvalidArgument,
                  "theta must lie in [1e-3, pi - 1e-3]");
    const double c = std::cos(theta), s = std::sin(theta);
    // G(x, theta, r) = (x, cot theta, r sin theta)
    const double gx = x, gy = c / s, gd = r * s;
    // Gamma(x, ybar, delta) = (x, delta ybar, delta)
    const std::array<double, 3> lhs{gx, gd * gy, gd};
    // Phi(x, theta, r) = (x, r cos theta, r sin theta)
    const std::array<double, 3> rhs{x, r * c, r * s};
    for (int i = 0; i < 3; ++i) worst = std::max(worst, std::fabs(lhs[i] - rhs[i]));
  }
  return worst;
}

std::vector<CriticalManifoldSample> critical_roots(const SlowFastSystem& sfs,
                                                   std::span<const double> x,
                                                   int n_sub) {
  const Vec xs(x.begin(), x.end());
  auto beta0 = [&](double yb) { return sfs.beta(xs, yb, 0.0); };
  std::vector<CriticalManifoldSample> out;
  for (const ScalarRoot& r : scan_roots(beta0, -1.0, 1.0, n_sub)) {
    CriticalManifoldSample s;
    s.x = xs;
    s.ybar = r.x;
    s.dbeta = r.slope;
    s.hyperbolic = std::fabs(r.slope) > 1e-8;
    s.attracting = s.hyperbolic && r.slope < 0.0;
    out.push_back(std::move(s));
  }
  return out;
}

Vec reduced_rhs(const SlowFastSystem& sfs, const CriticalManifoldSample& sample) {
  if (!sample.hyperbolic)
    throw Error(ErrorKind::NonHyperbolic,
                "critical manifold sample is not normally hyperbolic");
  return sfs.alpha(sample.x, sample.ybar, 0.0);
}

const char* to_string(RRegion r) {
  switch (r) {
    case RRegion::RSewing: return "r-sewing";
    case RRegion::RSliding: return "r-sliding";
    case RRegion::Undetermined: return "undetermined";
  }
  return "?";
}

std::vector<RRegionSample> r_region_scan(const PiecewiseSystem& sys,
                                         const Transition& tr,
                                         const SigmaSegment& segment,
                                         std::size_t n) {
  if (!sys.switching_coord)
    throw Error(ErrorKind::InvalidArgument,
                "r-region scan needs h equal to a coordinate");
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "scan needs at least 2 samples");
  const SlowFastSystem sfs =
      directional_blowup(r_regularize(sys, tr), *sys.switching_coord);
  std::vector<RRegionSample> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(n - 1);
    RRegionSample s;
    s.point = segment.at(u);
    if (std::fabs(sys.h(s.point)) > 1e-9)
      throw Error(ErrorKind::NotOnSigma, "scan segment leaves the switching manifold");
    const Vec x = sfs.slow_part(s.point);
    s.roots = critical_roots(sfs, x);
    bool any_degenerate = false, any_interior = false;
    for (const auto& r : s.roots) {
      if (!r.hyperbolic) any_degenerate = true;
      if (r.hyperbolic && std::fabs(r.ybar) < 1.0) any_interior = true;
    }
    if (any_degenerate) {
      s.region = RRegion::Undetermined;
    } else if (any_interior) {
      s.region = RRegion::RSliding;
    } else if (s.roots.empty()) {
      // No root: the normal component keeps one sign across the layer.
      const double lo = sfs.beta(x, -1.0, 0.0);
      const double hi = sfs.beta(x, 1.0, 0.0);
      s.region = (lo > 0.0) == (hi > 0.0) && lo != 0.0 && hi != 0.0
                     ? RRegion::RSewing
                     : RRegion::Undetermined;
    } else {
      s.region = RRegion::Undetermined;
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace nsdyn
