#include "nsdyn/equilibria.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace nsdyn {

NewtonResult newton_solve(const VectorFn& F, std::span<const double> x0,
                          const NewtonOptions& opt) {
  NewtonResult res;
  Vec x(x0.begin(), x0.end());
  Vec r = F(x);
  if (r.size() != x.size())
    throw Error(ErrorKind::InvalidArgument, "Newton needs a square system");
  res.iterates.push_back(x);
  const std::size_t k = x.size();
  double rn = norm2(r);
  for (std::size_t iter = 0; iter < opt.max_iter && !(rn <= opt.tol); ++iter) {
    const std::vector<Vec> jac = jacobian_fd(F, x, opt.fd_scale);
    Eigen::MatrixXd J(k, k);
    Eigen::VectorXd rhs(k);
    for (std::size_t i = 0; i < k; ++i) {
      rhs(i) = -r[i];
      for (std::size_t j = 0; j < k; ++j) J(i, j) = jac[i][j];
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    const auto& sv = svd.singularValues();
    const double smin = sv(k - 1), smax = sv(0);
    if (!(smin > 0.0) || smax / smin > opt.cond_limit)
      throw Error(ErrorKind::SingularJacobian,
                  "Jacobian is singular (condition estimate " +
                      std::to_string(smin > 0.0 ? smax / smin : INFINITY) + ")");
    const Eigen::VectorXd d = J.fullPivLu().solve(rhs);
    double lambda = 1.0;
    Vec xt(k), rt;
    double rtn = INFINITY;
    for (int halving = 0; halving <= opt.max_halvings; ++halving) {
      for (std::size_t i = 0; i < k; ++i) xt[i] = x[i] + lambda * d(i);
      try {
        rt = F(xt);
        rtn = norm2(rt);
      } catch (const Error&) {
        rtn = INFINITY;
      }
      if (rtn < rn) break;
      lambda *= 0.5;
    }
    if (!std::isfinite(rtn))
      throw Error(ErrorKind::NoConvergence, "Newton step left the domain of F");
    x = xt;
    r = rt;
    rn = rtn;
    res.iterates.push_back(x);
    res.iterations = iter + 1;
  }
  if (!(rn <= opt.tol))
    throw Error(ErrorKind::NoConvergence,
                "Newton did not converge (residual " + std::to_string(rn) + " after " +
                    std::to_string(res.iterations) + " iterations)");
  res.x = x;
  res.residual = rn;
  return res;
}

Vec characteristic_polynomial(const Matrix& A) {
  const std::size_t n = A.size();
  Vec c(n + 1, 0.0);
  c[n] = 1.0;
  Matrix M(n, Vec(n, 0.0));  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{n-k+1} I
    Matrix next(n, Vec(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) s += A[i][l] * M[l][j];
        next[i][j] = s + (i == j ? c[n - k + 1] : 0.0);
      }
    M = std::move(next);
    double tr = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) tr += A[i][l] * M[l][i];
    c[n - k] = -tr / static_cast<double>(k);
  }
  return c;
}

Complex det_shifted(const Matrix& A, Complex lambda) {
  const std::size_t n = A.size();
  std::vector<std::vector<Complex>> m(n, std::vector<Complex>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = A[i][j] - (i == j ? lambda : 0.0);
  Complex det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::abs(m[i][col]) > std::abs(m[piv][col])) piv = i;
    if (m[piv][col] == 0.0) return 0.0;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t i = col + 1; i < n; ++i) {
      const Complex f = m[i][col] / m[col][col];
      for (std::size_t j = col; j < n; ++j) m[i][j] -= f * m[col][j];
    }
  }
  return det;
}

namespace {

Complex horner(const Vec& c, Complex z) {
  Complex p = c.back();
  for (std::size_t i = c.size() - 1; i-- > 0;) p = p * z + c[i];
  return p;
}

Complex horner_dz(const Vec& c, Complex z) {
  Complex p = 0.0;
  for (std::size_t i = c.size() - 1; i >= 1; --i) p = p * z + static_cast<double>(i) * c[i];
  return p;
}

double poly_scale(const Vec& c, Complex z) {
  double s = 0.0, zp = 1.0;
  for (double ci : c) {
    s += std::fabs(ci) * zp;
    zp *= std::abs(z);
  }
  return s;
}

}  // namespace

std::vector<Complex> eigenvalues_small(const Matrix& A) {
  const std::size_t n = A.size();
  if (n == 0 || n > 6)
    throw Error(ErrorKind::InvalidArgument, "eigenvalues_small supports 1 <= n <= 6");
  for (const auto& row : A)
    if (row.size() != n) throw Error(ErrorKind::InvalidArgument, "matrix is not square");
  const Vec c = characteristic_polynomial(A);
  double bound = 0.0;
  for (std::size_t i = 0; i < n; ++i) bound = std::max(bound, std::fabs(c[i]));
  bound += 1.0;

  std::vector<Complex> z(n);
  const Complex seed(0.4, 0.9);
  Complex w = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    z[k] = w * std::min(bound, 2.0);
    w *= seed;
  }
  bool converged = n == 1;
  if (n == 1) z[0] = -c[0];
  for (int it = 0; it < 500 && !converged; ++it) {
    for (std::size_t k = 0; k < n; ++k) {
      Complex den = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) den *= z[k] - z[j];
      if (den == 0.0) den = 1e-14;
      z[k] -= horner(c, z[k]) / den;
    }
    converged = true;
    for (std::size_t k = 0; k < n; ++k)
      if (std::abs(horner(c, z[k])) > 1e-10 * poly_scale(c, z[k])) converged = false;
  }
  if (!converged)
    throw Error(ErrorKind::NoConvergence,
                "Durand-Kerner iteration did not converge in 500 iterations");
  for (Complex& zk : z) {
    for (int it = 0; it < 5; ++it) {
      const Complex p = horner(c, zk);
      const Complex dp = horner_dz(c, zk);
      if (dp == 0.0) break;
      const Complex cand = zk - p / dp;
      if (std::abs(horner(c, cand)) < std::abs(p))
        zk = cand;
      else
        break;
    }
    if (std::fabs(zk.imag()) <= 1e-10 * std::max(1.0, std::abs(zk))) zk = zk.real();
  }
  double fro = 0.0;
  for (const auto& row : A)
    for (double v : row) fro += v * v;
  const double a_norm = std::max(std::sqrt(fro), 1.0);
  const double limit = 1e-8 * std::pow(a_norm, static_cast<double>(n));
  for (const Complex& zk : z)
    if (std::abs(det_shifted(A, zk)) > limit)
      throw Error(ErrorKind::NoConvergence,
                  "eigenvalue failed the determinant residual check");
  std::sort(z.begin(), z.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return z;
}

EquilibriumReport equilibrium_report(const VectorFn& field, std::span<const double> point,
                                     std::string context) {
  EquilibriumReport rep;
  rep.point.assign(point.begin(), point.end());
  rep.residual = norm2(field(point));
  rep.eigenvalues = eigenvalues_small(jacobian_fd(field, point));
  for (const Complex& l : rep.eigenvalues) {
    if (l.real() < -1e-8)
      ++rep.n_stable;
    else if (l.real() > 1e-8)
      ++rep.n_unstable;
    else
      ++rep.n_center;
  }
  rep.context = std::move(context);
  return rep;
}

std::vector<DeltaSweepRow> persistence_sweep_delta(const PiecewiseSystem& sys,
                                                   const Transition& phi,
                                                   std::span<const double> p,
                                                   const std::vector<double>& delta_grid) {
  if (!sys.switching_coord)
    throw Error(ErrorKind::InvalidArgument,
                "persistence sweep needs h equal to a coordinate");
  const std::size_t k = *sys.switching_coord;
  const SigmaClass cls = classify_point(sys, p);
  if (cls.kind != SigmaKind::SlidingAttracting)
    throw Error(ErrorKind::NotSliding,
                std::string("seed is not an attracting sliding point (class ") +
                    to_string(cls.kind) + ")");
  const SmoothFamily fam = st_regularize(sys, phi);
  const SlowFastSystem sfs = directional_blowup(fam, k);
  const Vec x_slow = sfs.slow_part(p);
  VectorFn reduced = [&sys, &sfs](std::span<const double> x) {
    return sfs.slow_part(filippov_combination(sys, sfs.lift(x, 0.0, 0.0)));
  };
  if (norm2(reduced(x_slow)) > 1e-8)
    throw Error(ErrorKind::InvalidArgument, "seed is not an equilibrium of the sliding field");
  for (const Complex& l : eigenvalues_small(jacobian_fd(reduced, x_slow)))
    if (std::fabs(l.real()) <= 1e-8)
      throw Error(ErrorKind::NonHyperbolic, "sliding equilibrium is not hyperbolic");

  double ybar0 = 0.0;
  bool have_root = false;
  for (const auto& r : critical_roots(sfs, x_slow))
    if (r.attracting && (!have_root || std::fabs(r.ybar) < std::fabs(ybar0))) {
      ybar0 = r.ybar;
      have_root = true;
    }
  if (!have_root)
    throw Error(ErrorKind::AssumptionViolated,
                "no attracting critical root above the sliding equilibrium");

  std::vector<DeltaSweepRow> rows;
  Vec seed;
  for (double delta : delta_grid) {
    DeltaSweepRow row;
    row.delta = delta;
    try {
      if (!(delta > 0.0)) throw Error(ErrorKind::InvalidArgument, "delta must be > 0");
      Vec start = seed.empty() ? sfs.lift(x_slow, ybar0, delta) : seed;
      const VectorFn field = fam.field(delta);
      const NewtonResult nr = newton_solve(field, start);
      row.report = equilibrium_report(field, nr.x, "delta=" + std::to_string(delta));
      row.distance = dist2(nr.x, p);
      row.ok = true;
      seed = nr.x;
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

double crossing_sign(const Section& s, bool reverse) {
  return (s.direction >= 0 ? 1.0 : -1.0) * (reverse ? -1.0 : 1.0);
}

}  // namespace

ReturnResult return_map(const VectorFn& field, const Section& section,
                        std::span<const double> start, const PeriodicOptions& opt) {
  if (section.coord >= start.size())
    throw Error(ErrorKind::InvalidArgument, "section coordinate out of range");
  const double sg = crossing_sign(section, opt.reverse_time);
  const std::size_t c = section.coord;
  const double v = section.value;
  EventFn ev{[sg, c, v](std::span<const double> x) { return sg * (v - x[c]); }, true};
  const double t1 = opt.reverse_time ? -opt.max_time : opt.max_time;
  RunResult r;
  try {
    r = integrate_events(field, start, 0.0, t1, opt.ode, {ev});
  } catch (const Error& e) {
    throw Error(ErrorKind::NoReturn, std::string("no return to the section: ") + e.what());
  }
  if (!r.hit)
    throw Error(ErrorKind::NoReturn, "no return to the section within time " +
                                         std::to_string(opt.max_time));
  ReturnResult out{r.x, std::fabs(r.t)};
  out.point[c] = v;
  return out;
}

PeriodicOrbitReport find_periodic_orbit(const VectorFn& field, const Section& section,
                                        std::span<const double> seed,
                                        const PeriodicOptions& opt) {
  const std::size_t n = seed.size();
  Vec base(seed.begin(), seed.end());
  base[section.coord] = section.value;
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < n; ++i)
    if (i != section.coord &&
        std::find(opt.fixed_coords.begin(), opt.fixed_coords.end(), i) ==
            opt.fixed_coords.end())
      free.push_back(i);
  auto assemble = [&](std::span<const double> u) {
    Vec x = base;
    for (std::size_t j = 0; j < free.size(); ++j) x[free[j]] = u[j];
    return x;
  };
  VectorFn reduced_map = [&](std::span<const double> u) {
    const ReturnResult r = return_map(field, section, assemble(u), opt);
    Vec out(free.size());
    for (std::size_t j = 0; j < free.size(); ++j) out[j] = r.point[free[j]];
    return out;
  };
  Vec u0(free.size());
  for (std::size_t j = 0; j < free.size(); ++j) u0[j] = base[free[j]];
  Vec u = u0;
  if (!free.empty()) {
    VectorFn F = [&](std::span<const double> uu) {
      return sub(reduced_map(uu), uu);
    };
    NewtonOptions nopt;
    nopt.tol = opt.newton_tol;
    u = newton_solve(F, u0, nopt).x;
  }
  PeriodicOrbitReport rep;
  rep.section = section;
  rep.point = assemble(u);
  const ReturnResult r = return_map(field, section, rep.point, opt);
  rep.period = r.time;
  rep.residual = dist2(r.point, rep.point);
  if (!free.empty()) {
    const auto dp = eigenvalues_small(jacobian_fd(reduced_map, u, 1e-5));
    Complex dom = dp.front();
    for (const Complex& l : dp)
      if (std::abs(l) > std::abs(dom)) dom = l;
    rep.multiplier = dom.real();
  }
  return rep;
}

double hausdorff(const std::vector<Vec>& A, const std::vector<Vec>& B) {
  if (A.empty() || B.empty())
    throw Error(ErrorKind::InvalidArgument, "Hausdorff distance needs non-empty sets");
  auto directed = [](const std::vector<Vec>& P, const std::vector<Vec>& Q) {
    double worst = 0.0;
    for (const Vec& a : P) {
      double best = INFINITY;
      for (const Vec& b : Q) best = std::min(best, dist2(a, b));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(A, B), directed(B, A));
}

}  // namespace nsdyn
