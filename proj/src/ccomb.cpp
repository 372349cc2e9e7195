#include "nsdyn/ccomb.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace nsdyn {

CClass c_classify(const ContinuousCombination& cc, std::span<const double> p,
                  int n_sub) {
  const double hv = cc.base.h(p);
  if (std::fabs(hv) > 1e-9)
    throw Error(ErrorKind::NotOnSigma, "point is not on the switching manifold");
  const Vec pt(p.begin(), p.end());
  auto K = [&](double lambda) { return cc.normal_component(lambda, pt); };
  CClass out;
  std::size_t id = 0;
  for (const ScalarRoot& r : scan_roots(K, -1.0, 1.0, n_sub)) {
    LambdaBranch b;
    b.lambda = r.x;
    b.dK = r.slope;
    b.id = id++;
    b.degenerate = r.touch || std::fabs(r.slope) <= 1e-8;
    b.interior = std::fabs(r.x) < 1.0 - 1e-12;
    if (b.interior) out.sliding = true;
    out.branches.push_back(b);
  }
  return out;
}

Vec c_sliding_vf(const ContinuousCombination& cc, std::span<const double> p,
                 const LambdaBranch& branch) {
  if (branch.degenerate)
    throw Error(ErrorKind::NonHyperbolic,
                "degenerate lambda branch (dK/dlambda = " + std::to_string(branch.dK) + ")");
  return cc.xtilde(branch.lambda, p);
}

BranchTrack track_branches(const ContinuousCombination& cc, const SigmaSegment& seg,
                           std::size_t n) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "tracking needs at least 2 samples");
  BranchTrack track;
  struct Active {
    std::size_t id;
    double lambda;
  };
  std::vector<Active> active;
  std::size_t next_id = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(n - 1);
    const Vec p = seg.at(u);
    std::vector<LambdaBranch> roots;
    for (const auto& b : c_classify(cc, p).branches)
      if (b.interior) roots.push_back(b);
    std::vector<Active> now;
    std::vector<bool> used(active.size(), false);
    for (const auto& b : roots) {
      std::size_t best = active.size();
      for (std::size_t a = 0; a < active.size(); ++a) {
        if (std::fabs(active[a].lambda - b.lambda) > 0.25) continue;
        if (best == active.size() ||
            std::fabs(active[a].lambda - b.lambda) < std::fabs(active[best].lambda - b.lambda))
          best = a;
      }
      std::size_t id;
      if (best < active.size() && !used[best]) {
        used[best] = true;
        id = active[best].id;
      } else {
        id = next_id++;
        if (best < active.size())
          track.events.push_back("collision near branch " + std::to_string(active[best].id) +
                                 " at u=" + std::to_string(u) + "; new branch " +
                                 std::to_string(id));
        else if (i > 0)
          track.events.push_back("branch " + std::to_string(id) + " starts at u=" +
                                 std::to_string(u));
      }
      now.push_back({id, b.lambda});
      BranchSample s;
      s.u = u;
      s.point = p;
      s.branch = id;
      s.lambda = b.lambda;
      s.dK = b.dK;
      if (!b.degenerate) s.field = cc.xtilde(b.lambda, p);
      track.samples.push_back(std::move(s));
    }
    for (std::size_t a = 0; a < active.size(); ++a)
      if (!used[a])
        track.events.push_back("branch " + std::to_string(active[a].id) + " ends at u=" +
                               std::to_string(u));
    active = std::move(now);
  }
  return track;
}

SlowFastCombination SlowFastCombination::from_expressions(
    const NonsmoothSlowFast& base, const std::vector<std::string>& xtilde,
    const expr::Bindings& params) {
  if (xtilde.size() != base.n)
    throw Error(ErrorKind::InvalidArgument,
                "xtilde arity does not match dimension " + std::to_string(base.n));
  auto slots = nsff_slot_names(base.n);
  slots.push_back("lambda");
  std::vector<expr::Expr> es;
  for (const auto& s : xtilde) es.push_back(expr::parse(s));
  const VectorFn f = compile_vector(es, slots, params);
  SlowFastCombination out;
  out.base = base;
  out.xtilde = [f](double lambda, std::span<const double> x, double y, double eps) {
    Vec z(x.begin(), x.end());
    z.push_back(y);
    z.push_back(eps);
    z.push_back(lambda);
    return f(z);
  };
  return out;
}

ContinuousCombination SlowFastCombination::at(double y, double eps) const {
  ContinuousCombination cc;
  const NonsmoothSlowFast b = base;
  cc.base.dim = b.n;
  cc.base.plus = [b, y, eps](std::span<const double> x) { return b.F(x, y, eps); };
  cc.base.minus = [b, y, eps](std::span<const double> x) { return b.G(x, y, eps); };
  cc.base.h = [](std::span<const double> x) { return x[0]; };
  cc.base.switching_coord = 0;
  cc.xtilde = [xt = xtilde, y, eps](double lambda, std::span<const double> x) {
    return xt(lambda, x, y, eps);
  };
  return cc;
}

ContinuousCombination SlowFastCombination::reduced(double y_seed) const {
  const ReducedNonsmooth red = reduce(base, y_seed);
  ContinuousCombination cc;
  cc.base = red.system;
  cc.xtilde = [xt = xtilde, y_of = red.y_of](double lambda, std::span<const double> x) {
    return xt(lambda, x, y_of(x), 0.0);
  };
  return cc;
}

std::vector<CSweepRow> c_persistence_sweep(const SlowFastCombination& sys,
                                           std::span<const double> x0_in, double y0,
                                           double lambda_seed,
                                           const std::vector<double>& eps_grid) {
  const std::size_t n = sys.base.n;
  Vec x0(x0_in.begin(), x0_in.end());
  if (x0.size() != n) throw Error(ErrorKind::InvalidArgument, "seed has the wrong dimension");
  x0[0] = 0.0;
  if (std::fabs(sys.base.H_y(x0, y0, 0.0)) <= 1e-8)
    throw Error(ErrorKind::AssumptionViolated,
                "dH/dy = 0 at the seed: the critical manifold is not normally hyperbolic");
  {
    const double s = fd_step(lambda_seed);
    const double dq = (sys.xtilde(lambda_seed + s, x0, y0, 0.0)[0] -
                       sys.xtilde(lambda_seed - s, x0, y0, 0.0)[0]) /
                      (2.0 * s);
    if (std::fabs(dq) <= 1e-8)
      throw Error(ErrorKind::AssumptionViolated,
                  "dQ/dlambda = 0 at the seed branch: the lambda root is degenerate");
  }
  // Unknowns u = (lambda, x2..xn, y).
  auto unpack = [n](std::span<const double> u) {
    Vec x(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) x[i] = u[i];
    return std::pair<Vec, double>{x, u[n]};
  };
  std::vector<CSweepRow> rows;
  Vec seed{lambda_seed};
  seed.insert(seed.end(), x0.begin() + 1, x0.end());
  seed.push_back(y0);
  for (double eps : eps_grid) {
    CSweepRow row;
    row.eps = eps;
    try {
      const VectorFn F = [&sys, unpack, eps](std::span<const double> u) {
        const auto [x, y] = unpack(u);
        Vec out = sys.xtilde(u[0], x, y, eps);
        out.push_back(sys.base.H(x, y, eps));
        return out;
      };
      const NewtonResult nr = newton_solve(F, seed);
      const auto [x, y] = unpack(nr.x);
      row.lambda = nr.x[0];
      row.lambda_in_range = std::fabs(row.lambda) < 1.0;
      row.x = x;
      row.y = y;
      row.residual = nr.residual;
      Vec full = x, ref = x0;
      full.push_back(y);
      ref.push_back(y0);
      row.distance = dist2(full, ref);
      row.ok = true;
      seed = nr.x;
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

EquivalenceReport nonlinear_equivalence_check(const ContinuousCombination& cc,
                                              const Transition& phi,
                                              const SigmaSegment& box, std::size_t n) {
  if (!cc.base.switching_coord)
    throw Error(ErrorKind::InvalidArgument, "equivalence check needs h equal to a coordinate");
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "check needs at least 2 samples");
  const std::size_t k = *cc.base.switching_coord;
  const SlowFastSystem sfs = directional_blowup(nonlinear_regularize(cc, phi), k);
  EquivalenceReport rep;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(n - 1);
    const Vec p = box.at(u);
    const CClass cls = c_classify(cc, p);
    std::vector<LambdaBranch> lams;
    for (const auto& b : cls.branches) {
      if (!b.interior) continue;
      if (b.degenerate)
        throw Error(ErrorKind::AssumptionViolated,
                    "dK/dlambda vanishes at a c-sliding root (lambda = " +
                        std::to_string(b.lambda) + ")");
      lams.push_back(b);
    }
    std::vector<CriticalManifoldSample> ys;
    for (const auto& r : critical_roots(sfs, sfs.slow_part(p)))
      if (std::fabs(r.ybar) < 1.0 - 1e-12) ys.push_back(r);
    ++rep.samples;
    rep.max_branches = std::max(rep.max_branches, lams.size());
    if (ys.size() != lams.size()) {
      ++rep.count_mismatches;
      continue;
    }
    for (std::size_t j = 0; j < lams.size(); ++j) {
      const double mapped = phi.phi(ys[j].ybar);
      rep.max_root_mismatch =
          std::max(rep.max_root_mismatch, std::fabs(mapped - lams[j].lambda));
      const double predicted = phi.phi_dt(ys[j].ybar) * lams[j].dK;
      rep.max_derivative_mismatch =
          std::max(rep.max_derivative_mismatch,
                   std::fabs(ys[j].dbeta - predicted) / std::max(1.0, std::fabs(predicted)));
    }
  }
  rep.ok = rep.count_mismatches == 0 && rep.max_root_mismatch <= 1e-8 &&
           rep.max_derivative_mismatch <= 1e-5;
  return rep;
}

}  // namespace nsdyn
