#include "nsdyn/common.hpp"

#include <algorithm>
#include <cmath>

namespace nsdyn {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::UnknownFunction: return "unknown-function";
    case ErrorKind::UnboundVariable: return "unbound-variable";
    case ErrorKind::MathDomain: return "math-domain";
    case ErrorKind::NotOnSigma: return "not-on-sigma";
    case ErrorKind::DegenerateGradient: return "degenerate-gradient";
    case ErrorKind::NotSliding: return "not-sliding";
    case ErrorKind::DegenerateDenominator: return "degenerate-denominator";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::NoConvergence: return "no-convergence";
    case ErrorKind::SingularJacobian: return "singular-jacobian";
    case ErrorKind::StepUnderflow: return "step-underflow";
    case ErrorKind::MaxSteps: return "max-steps";
    case ErrorKind::NonHyperbolic: return "non-hyperbolic";
    case ErrorKind::AssumptionViolated: return "assumption-violated";
    case ErrorKind::NoReturn: return "no-return";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

Vec axpy(double a, std::span<const double> x, std::span<const double> y) {
  Vec out(y.begin(), y.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * x[i];
  return out;
}

Vec sub(std::span<const double> a, std::span<const double> b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

std::vector<Vec> jacobian_fd(const VectorFn& f, std::span<const double> x,
                             double scale) {
  Vec xp(x.begin(), x.end());
  std::vector<Vec> jac;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double s = fd_step(x[j], scale);
    xp[j] = x[j] + s;
    const Vec fp = f(xp);
    xp[j] = x[j] - s;
    const Vec fm = f(xp);
    xp[j] = x[j];
    if (jac.empty()) jac.assign(fp.size(), Vec(x.size(), 0.0));
    for (std::size_t i = 0; i < fp.size(); ++i)
      jac[i][j] = (fp[i] - fm[i]) / (2.0 * s);
  }
  return jac;
}

}  // namespace nsdyn

namespace nsdyn {

namespace {

double central_slope(const std::function<double(double)>& f, double x) {
  const double s = fd_step(x);
  return (f(x + s) - f(x - s)) / (2.0 * s);
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double flo, double xtol) {
  while (hi - lo > xtol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Golden-section minimisation of |f| on [lo, hi].
double minimise_abs(const std::function<double(double)>& f, double lo, double hi) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
  double fc = std::fabs(f(c)), fd = std::fabs(f(d));
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = std::fabs(f(c));
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = std::fabs(f(d));
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<ScalarRoot> scan_roots(const std::function<double(double)>& f,
                                   double a, double b, int n_sub, double xtol) {
  if (n_sub < 1 || !(b > a))
    throw Error(ErrorKind::InvalidArgument, "root scan needs a < b and n_sub >= 1");
  std::vector<double> xs(n_sub + 1), fs(n_sub + 1);
  for (int i = 0; i <= n_sub; ++i) {
    xs[i] = i == n_sub ? b : a + (b - a) * i / n_sub;
    fs[i] = f(xs[i]);
  }
  std::vector<ScalarRoot> roots;
  auto push = [&](double x, bool touch) {
    for (const auto& r : roots)
      if (std::fabs(r.x - x) <= 10.0 * xtol) return;
    roots.push_back({x, central_slope(f, x), touch});
  };
  for (int i = 0; i <= n_sub; ++i)
    if (fs[i] == 0.0) push(xs[i], false);
  for (int i = 0; i < n_sub; ++i) {
    if (fs[i] == 0.0 || fs[i + 1] == 0.0) continue;
    if ((fs[i] < 0.0) == (fs[i + 1] < 0.0)) continue;
    double x = bisect(f, xs[i], xs[i + 1], fs[i], xtol);
    const double slope = central_slope(f, x);
    if (slope != 0.0) {
      const double polished = x - f(x) / slope;
      if (polished >= xs[i] && polished <= xs[i + 1] &&
          std::fabs(f(polished)) <= std::fabs(f(x)))
        x = polished;
    }
    push(x, false);
  }
  for (int i = 1; i < n_sub; ++i) {
    const double v = std::fabs(fs[i]);
    if (v == 0.0 || v > 1e-6) continue;
    if (v > std::fabs(fs[i - 1]) || v > std::fabs(fs[i + 1])) continue;
    if ((fs[i - 1] < 0.0) != (fs[i] < 0.0) || (fs[i + 1] < 0.0) != (fs[i] < 0.0))
      continue;
    const double x = minimise_abs(f, xs[i - 1], xs[i + 1]);
    if (std::fabs(f(x)) <= 1e-10) push(x, true);
  }
  std::sort(roots.begin(), roots.end(),
            [](const ScalarRoot& l, const ScalarRoot& r) { return l.x < r.x; });
  return roots;
}

}  // namespace nsdyn
