#include "nsdyn/nsff.hpp"

#include <algorithm>
#include <cmath>

namespace nsdyn {

std::vector<std::string> nsff_slot_names(std::size_t n) {
  auto names = state_names(n);
  names.push_back("y");
  names.push_back("eps");
  return names;
}

namespace {

Vec pack(std::span<const double> x, double y, double eps) {
  Vec z(x.begin(), x.end());
  z.push_back(y);
  z.push_back(eps);
  return z;
}

}  // namespace

NonsmoothSlowFast NonsmoothSlowFast::from_expressions(
    std::size_t n, const std::vector<std::string>& F, const std::vector<std::string>& G,
    const std::string& H, const std::string& h, const expr::Bindings& params) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "slow dimension must be at least 2");
  if (F.size() != n || G.size() != n)
    throw Error(ErrorKind::InvalidArgument,
                "F/G arity does not match dimension " + std::to_string(n));
  if (!expr::parse(h).is_variable("x1"))
    throw Error(ErrorKind::InvalidArgument,
                "switching function must be h = x1; straighten the coordinates so "
                "that the switching manifold is {x1 = 0}");
  const auto slots = nsff_slot_names(n);
  std::vector<expr::Expr> fe, ge;
  for (const auto& s : F) fe.push_back(expr::parse(s));
  for (const auto& s : G) ge.push_back(expr::parse(s));
  const VectorFn f = compile_vector(fe, slots, params);
  const VectorFn g = compile_vector(ge, slots, params);
  const ScalarFn hh = compile_scalar(expr::parse(H), slots, params);
  NonsmoothSlowFast sys;
  sys.n = n;
  sys.F = [f](std::span<const double> x, double y, double eps) { return f(pack(x, y, eps)); };
  sys.G = [g](std::span<const double> x, double y, double eps) { return g(pack(x, y, eps)); };
  sys.H = [hh](std::span<const double> x, double y, double eps) {
    return hh(pack(x, y, eps));
  };
  return sys;
}

double NonsmoothSlowFast::H_y(std::span<const double> x, double y, double eps) const {
  const double s = fd_step(y);
  return (H(x, y + s, eps) - H(x, y - s, eps)) / (2.0 * s);
}

ReducedNonsmooth reduce(const NonsmoothSlowFast& sys, double y_seed) {
  auto y_of = [sys, y_seed](std::span<const double> x) {
    const Vec xs(x.begin(), x.end());
    double y = y_seed;
    for (int it = 0; it < 50; ++it) {
      const double hv = sys.H(xs, y, 0.0);
      const double hy = sys.H_y(xs, y, 0.0);
      if (std::fabs(hy) < 1e-8)
        throw Error(ErrorKind::AssumptionViolated,
                    "dH/dy vanishes on the critical manifold (|H_y| < 1e-8)");
      if (std::fabs(hv) <= 1e-14) break;
      y -= hv / hy;
    }
    const double resid = std::fabs(sys.H(xs, y, 0.0));
    if (!(resid <= 1e-10))
      throw Error(ErrorKind::NoConvergence,
                  "critical manifold solve failed (|H| = " + std::to_string(resid) + ")");
    return y;
  };
  ReducedNonsmooth red;
  red.y_of = y_of;
  red.system.dim = sys.n;
  red.system.plus = [sys, y_of](std::span<const double> x) {
    return sys.F(x, y_of(x), 0.0);
  };
  red.system.minus = [sys, y_of](std::span<const double> x) {
    return sys.G(x, y_of(x), 0.0);
  };
  red.system.h = [](std::span<const double> x) { return x[0]; };
  red.system.switching_coord = 0;
  return red;
}

SlidingEps sliding_vf_eps(const NonsmoothSlowFast& sys, std::span<const double> x_in,
                          double y, double eps) {
  Vec x(x_in.begin(), x_in.end());
  x[0] = 0.0;
  const Vec f = sys.F(x, y, eps);
  const Vec g = sys.G(x, y, eps);
  const double den = f[0] - g[0];
  if (std::fabs(den) < 1e-12)
    throw Error(ErrorKind::DegenerateDenominator,
                "sliding denominator F1 - G1 vanishes");
  SlidingEps out;
  out.slow.assign(sys.n, 0.0);
  for (std::size_t i = 1; i < sys.n; ++i) out.slow[i] = (f[0] * g[i] - g[0] * f[i]) / den;
  out.fast = sys.H(x, y, eps);
  return out;
}

std::vector<EpsSweepRow> persistence_sweep_eps(const NonsmoothSlowFast& sys,
                                               std::span<const double> x0_in, double y0,
                                               const std::vector<double>& eps_grid) {
  Vec x0(x0_in.begin(), x0_in.end());
  if (x0.size() != sys.n)
    throw Error(ErrorKind::InvalidArgument, "seed has the wrong dimension");
  x0[0] = 0.0;
  if (std::fabs(sys.H_y(x0, y0, 0.0)) <= 1e-8)
    throw Error(ErrorKind::AssumptionViolated,
                "dH/dy = 0 at the seed: the critical manifold is not normally "
                "hyperbolic there and sliding regions need not persist");
  {
    const Vec f = sys.F(x0, y0, 0.0), g = sys.G(x0, y0, 0.0);
    if (std::fabs(f[0] - g[0]) <= 1e-12)
      throw Error(ErrorKind::AssumptionViolated,
                  "F1 = G1 at the seed: the normal components coincide");
  }
  // Unknowns u = (x2..xn, y); equations: sliding slow rates and H.
  auto unpack = [n = sys.n](std::span<const double> u) {
    Vec x(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) x[i] = u[i - 1];
    return std::pair<Vec, double>{x, u[n - 1]};
  };
  auto system_at = [&sys, unpack](double eps) -> VectorFn {
    return [&sys, unpack, eps](std::span<const double> u) {
      const auto [x, y] = unpack(u);
      const SlidingEps s = sliding_vf_eps(sys, x, y, eps);
      Vec out(s.slow.begin() + 1, s.slow.end());
      out.push_back(s.fast);
      return out;
    };
  };
  Vec u0(x0.begin() + 1, x0.end());
  u0.push_back(y0);
  {
    // Hyperbolicity of the reduced sliding equilibrium.
    const VectorFn red = [&sys, y0](std::span<const double> v) {
      Vec x(sys.n, 0.0);
      std::copy(v.begin(), v.end(), x.begin() + 1);
      const SlidingEps s = sliding_vf_eps(sys, x, y0, 0.0);
      return Vec(s.slow.begin() + 1, s.slow.end());
    };
    const Vec v0(x0.begin() + 1, x0.end());
    if (norm2(red(v0)) > 1e-8)
      throw Error(ErrorKind::InvalidArgument,
                  "seed is not an equilibrium of the reduced sliding field");
    for (const Complex& l : eigenvalues_small(jacobian_fd(red, v0)))
      if (std::fabs(l.real()) <= 1e-8)
        throw Error(ErrorKind::NonHyperbolic, "reduced sliding equilibrium is not hyperbolic");
  }
  std::vector<EpsSweepRow> rows;
  Vec seed = u0;
  for (double eps : eps_grid) {
    EpsSweepRow row;
    row.eps = eps;
    try {
      const VectorFn F = system_at(eps);
      const NewtonResult nr = newton_solve(F, seed);
      const auto [x, y] = unpack(nr.x);
      row.x = x;
      row.y = y;
      row.residual = nr.residual;
      Vec full = x;
      full.push_back(y);
      Vec ref = x0;
      ref.push_back(y0);
      row.distance = dist2(full, ref);
      row.report = equilibrium_report(F, nr.x, "eps=" + std::to_string(eps));
      row.ok = true;
      seed = nr.x;
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Vec ThreeScaleSystem::rhs(std::span<const double> z, double eps, double delta) const {
  const std::size_t n = base.n;
  Vec x(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(n));
  const double xb1 = z[0];
  const double y = z[n];
  x[0] = delta * xb1;
  Vec p = x;
  p.push_back(y);
  const Vec f = base.F(x, y, eps);
  const Vec g = base.G(x, y, eps);
  const double w = psi(p, xb1);
  Vec out(n + 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.5 * ((1.0 + w) * f[i] + (1.0 - w) * g[i]);
  out[n] = base.H(x, y, eps);
  return out;
}

VectorFn ThreeScaleSystem::fastest_field(double eps, double delta) const {
  if (!(eps > 0.0) || !(delta > 0.0))
    throw Error(ErrorKind::InvalidArgument, "eps and delta must be > 0");
  const double mu = std::min(eps, delta);
  ThreeScaleSystem self = *this;
  return [self, eps, delta, mu](std::span<const double> z) {
    Vec r = self.rhs(z, eps, delta);
    const std::size_t n = self.base.n;
    r[0] *= mu / delta;
    for (std::size_t i = 1; i < n; ++i) r[i] *= mu;
    r[n] *= mu / eps;
    return r;
  };
}

ThreeScaleSystem three_scale_blowup(const NonsmoothSlowFast& sys, const Transition& psi) {
  return ThreeScaleSystem{sys, psi};
}

}  // namespace nsdyn
