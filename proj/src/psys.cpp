#include "nsdyn/psys.hpp"

#include <cmath>
#include <memory>

namespace nsdyn {

std::vector<std::string> state_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

namespace {

struct SlotLayout {
  std::vector<std::string> slots;
  Vec param_values;
};

SlotLayout layout(const std::vector<std::string>& state_slots,
                  const expr::Bindings& params) {
  SlotLayout out{state_slots, {}};
  for (const auto& [name, value] : params) {
    out.slots.push_back(name);
    out.param_values.push_back(value);
  }
  return out;
}

}  // namespace

VectorFn compile_vector(const std::vector<expr::Expr>& exprs,
                        const std::vector<std::string>& state_slots,
                        const expr::Bindings& params) {
  const SlotLayout lay = layout(state_slots, params);
  auto compiled = std::make_shared<std::vector<expr::Compiled>>();
  for (const auto& e : exprs) compiled->emplace_back(e, lay.slots);
  const std::size_t n_state = state_slots.size();
  return [compiled, n_state, params = lay.param_values](std::span<const double> x) {
    Vec buf(n_state + params.size());
    std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n_state), buf.begin());
    std::copy(params.begin(), params.end(), buf.begin() + static_cast<std::ptrdiff_t>(n_state));
    Vec out(compiled->size());
    for (std::size_t i = 0; i < compiled->size(); ++i) out[i] = (*compiled)[i](buf);
    return out;
  };
}

ScalarFn compile_scalar(const expr::Expr& e,
                        const std::vector<std::string>& state_slots,
                        const expr::Bindings& params) {
  auto vf = compile_vector({e}, state_slots, params);
  return [vf](std::span<const double> x) { return vf(x)[0]; };
}

Vec PiecewiseSystem::grad_h(std::span<const double> p) const {
  Vec g(dim, 0.0);
  if (switching_coord) {
    g[*switching_coord] = 1.0;
    return g;
  }
  Vec q(p.begin(), p.end());
  for (std::size_t j = 0; j < dim; ++j) {
    const double s = fd_step(p[j]);
    q[j] = p[j] + s;
    const double hp = h(q);
    q[j] = p[j] - s;
    const double hm = h(q);
    q[j] = p[j];
    g[j] = (hp - hm) / (2.0 * s);
  }
  if (norm2(g) < 1e-12)
    throw Error(ErrorKind::DegenerateGradient,
                "gradient of the switching function vanishes: 0 is not a "
                "regular value of h here");
  return g;
}

PiecewiseSystem PiecewiseSystem::from_expressions(
    std::size_t dim, const std::vector<std::string>& xplus,
    const std::vector<std::string>& xminus, const std::string& h,
    const expr::Bindings& params) {
  if (dim < 2)
    throw Error(ErrorKind::InvalidArgument, "dimension must be at least 2");
  if (xplus.size() != dim || xminus.size() != dim)
    throw Error(ErrorKind::InvalidArgument,
                "vector field arity does not match dimension " +
                    std::to_string(dim));
  const auto names = state_names(dim);
  std::vector<expr::Expr> plus, minus;
  for (const auto& s : xplus) plus.push_back(expr::parse(s));
  for (const auto& s : xminus) minus.push_back(expr::parse(s));
  const expr::Expr he = expr::parse(h);

  PiecewiseSystem sys;
  sys.dim = dim;
  sys.plus = compile_vector(plus, names, params);
  sys.minus = compile_vector(minus, names, params);
  sys.h = compile_scalar(he, names, params);
  for (std::size_t k = 0; k < dim; ++k)
    if (he.is_variable(names[k])) sys.switching_coord = k;
  return sys;
}

const char* to_string(SigmaKind k) {
  switch (k) {
    case SigmaKind::Sewing: return "sewing";
    case SigmaKind::SlidingAttracting: return "sliding-attracting";
    case SigmaKind::SlidingRepelling: return "sliding-repelling";
    case SigmaKind::TangencyPlus: return "tangency-plus";
    case SigmaKind::TangencyMinus: return "tangency-minus";
  }
  return "?";
}

std::pair<double, double> lie_derivatives(const PiecewiseSystem& sys,
                                          std::span<const double> p) {
  const Vec xp = sys.plus(p);
  const Vec xm = sys.minus(p);
  if (sys.switching_coord) {
    const std::size_t k = *sys.switching_coord;
    return {xp[k], xm[k]};
  }
  const Vec g = sys.grad_h(p);
  return {dot(xp, g), dot(xm, g)};
}

SigmaClass classify_point(const PiecewiseSystem& sys, std::span<const double> p,
                          const SigmaTolerances& tol) {
  const double hv = sys.h(p);
  if (std::fabs(hv) > tol.on_sigma)
    throw Error(ErrorKind::NotOnSigma,
                "point is not on the switching manifold (|h| = " +
                    std::to_string(std::fabs(hv)) + ")");
  (void)sys.grad_h(p);
  const auto [lp, lm] = lie_derivatives(sys, p);
  SigmaClass c{SigmaKind::Sewing, lp, lm};
  if (std::fabs(lp) <= tol.tangent)
    c.kind = SigmaKind::TangencyPlus;
  else if (std::fabs(lm) <= tol.tangent)
    c.kind = SigmaKind::TangencyMinus;
  else if (lp * lm > 0.0)
    c.kind = SigmaKind::Sewing;
  else if (lp < 0.0)
    c.kind = SigmaKind::SlidingAttracting;
  else
    c.kind = SigmaKind::SlidingRepelling;
  return c;
}

Vec filippov_combination(const PiecewiseSystem& sys, std::span<const double> p,
                         double* s_out) {
  const Vec xp = sys.plus(p);
  const Vec xm = sys.minus(p);
  double lp, lm;
  if (sys.switching_coord) {
    lp = xp[*sys.switching_coord];
    lm = xm[*sys.switching_coord];
  } else {
    const Vec g = sys.grad_h(p);
    lp = dot(xp, g);
    lm = dot(xm, g);
  }
  const double den = lp - lm;
  if (std::fabs(den) < 1e-12)
    throw Error(ErrorKind::DegenerateDenominator,
                "sliding denominator (X+ - X-).h vanishes");
  Vec out(sys.dim);
  for (std::size_t i = 0; i < sys.dim; ++i) out[i] = (lp * xm[i] - lm * xp[i]) / den;
  if (s_out) *s_out = lp / den;
  return out;
}

namespace {

void require_sliding(const SigmaClass& c) {
  if (!is_sliding(c.kind))
    throw Error(ErrorKind::NotSliding,
                std::string("point is not in the sliding region (class ") +
                    to_string(c.kind) + ")");
}

}  // namespace

Vec sliding_vf(const PiecewiseSystem& sys, std::span<const double> p,
               const SigmaTolerances& tol) {
  require_sliding(classify_point(sys, p, tol));
  return filippov_combination(sys, p);
}

double convex_coefficient(const PiecewiseSystem& sys, std::span<const double> p,
                          const SigmaTolerances& tol) {
  require_sliding(classify_point(sys, p, tol));
  double s = 0.0;
  (void)filippov_combination(sys, p, &s);
  return s;
}

Vec SigmaSegment::at(double u) const {
  Vec p(start.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = start[i] + u * (end[i] - start[i]);
  return p;
}

namespace {

bool is_tangency(SigmaKind k) {
  return k == SigmaKind::TangencyPlus || k == SigmaKind::TangencyMinus;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Locates the zero of X+h (use_plus) or X-h between u_lo and u_hi.
double bisect_tangency(const PiecewiseSystem& sys, const SigmaSegment& seg,
                       double u_lo, double u_hi, bool use_plus) {
  auto L = [&](double u) {
    const auto [lp, lm] = lie_derivatives(sys, seg.at(u));
    return use_plus ? lp : lm;
  };
  const double length = dist2(seg.start, seg.end);
  int s_lo = sign_of(L(u_lo));
  for (int it = 0; it < 200 && (u_hi - u_lo) * length > 1e-13; ++it) {
    const double mid = 0.5 * (u_lo + u_hi);
    const int s_mid = sign_of(L(mid));
    if (s_mid == 0) return mid;
    if (s_mid == s_lo) {
      u_lo = mid;
    } else {
      u_hi = mid;
    }
  }
  return 0.5 * (u_lo + u_hi);
}

}  // namespace

SigmaScan scan_sigma(const PiecewiseSystem& sys, const SigmaSegment& seg,
                     std::size_t n_samples, const SigmaTolerances& tol) {
  if (n_samples < 2)
    throw Error(ErrorKind::InvalidArgument, "scan needs at least 2 samples");
  SigmaScan scan;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(n_samples - 1);
    SigmaSample s{u, seg.at(u), {}};
    s.cls = classify_point(sys, s.point, tol);
    scan.samples.push_back(std::move(s));
  }

  SigmaInterval cur;
  cur.kind = scan.samples.front().cls.kind;
  cur.u_start = 0.0;
  cur.start = scan.samples.front().point;
  for (std::size_t i = 0; i + 1 < scan.samples.size(); ++i) {
    const SigmaSample& a = scan.samples[i];
    const SigmaSample& b = scan.samples[i + 1];
    if (a.cls.kind == b.cls.kind) continue;
    double u_boundary;
    bool tangency = true;
    if (is_tangency(a.cls.kind)) {
      u_boundary = a.u;
    } else if (is_tangency(b.cls.kind)) {
      u_boundary = b.u;
    } else {
      const bool plus_flips = sign_of(a.cls.lplus) != sign_of(b.cls.lplus);
      const bool minus_flips = sign_of(a.cls.lminus) != sign_of(b.cls.lminus);
      if (plus_flips || minus_flips) {
        u_boundary = bisect_tangency(sys, seg, a.u, b.u, plus_flips);
      } else {
        u_boundary = 0.5 * (a.u + b.u);
        tangency = false;
      }
    }
    cur.u_end = u_boundary;
    cur.end = seg.at(u_boundary);
    cur.end_is_tangency = tangency;
    scan.intervals.push_back(cur);
    cur = SigmaInterval{};
    cur.kind = b.cls.kind;
    cur.u_start = u_boundary;
    cur.start = seg.at(u_boundary);
    cur.start_is_tangency = tangency;
  }
  cur.u_end = 1.0;
  cur.end = scan.samples.back().point;
  scan.intervals.push_back(cur);
  return scan;
}

}  // namespace nsdyn
