#pragma once

// Piecewise-smooth systems x' = X+(x) if h(x) > 0, X-(x) if h(x) < 0, and the
// Filippov classification of points on the switching manifold {h = 0}.

#include <optional>
#include <string>
#include <vector>

#include "nsdyn/common.hpp"
#include "nsdyn/expr.hpp"

namespace nsdyn {

/// Names "x1".."xn".
std::vector<std::string> state_names(std::size_t n);

/// Compiles expressions over `slots`; any slot not supplied by the caller at
/// evaluation time must be bound in `params` (appended after the state).
VectorFn compile_vector(const std::vector<expr::Expr>& exprs,
                        const std::vector<std::string>& state_slots,
                        const expr::Bindings& params = {});
ScalarFn compile_scalar(const expr::Expr& e,
                        const std::vector<std::string>& state_slots,
                        const expr::Bindings& params = {});

struct PiecewiseSystem {
  std::size_t dim = 0;
  VectorFn plus;
  VectorFn minus;
  ScalarFn h;
  /// Set when h(x) is exactly the coordinate x[k]; gradients are then exact.
  std::optional<std::size_t> switching_coord;

  Vec grad_h(std::span<const double> p) const;

  /// Builds a system from expression strings in x1..xn (plus named params).
  static PiecewiseSystem from_expressions(
      std::size_t dim, const std::vector<std::string>& xplus,
      const std::vector<std::string>& xminus, const std::string& h,
      const expr::Bindings& params = {});
};

enum class SigmaKind {
  Sewing,
  SlidingAttracting,
  SlidingRepelling,
  TangencyPlus,
  TangencyMinus,
};

const char* to_string(SigmaKind k);
inline bool is_sliding(SigmaKind k) {
  return k == SigmaKind::SlidingAttracting || k == SigmaKind::SlidingRepelling;
}

struct SigmaClass {
  SigmaKind kind = SigmaKind::Sewing;
  double lplus = 0.0;   // X+ h (p)
  double lminus = 0.0;  // X- h (p)
};

struct SigmaTolerances {
  double on_sigma = 1e-9;
  double tangent = 1e-9;
};

/// Directional derivatives X+ h and X- h at p, with no on-manifold checks.
std::pair<double, double> lie_derivatives(const PiecewiseSystem& sys,
                                          std::span<const double> p);

SigmaClass classify_point(const PiecewiseSystem& sys, std::span<const double> p,
                          const SigmaTolerances& tol = {});

/// Filippov sliding vector field at a sliding point.
Vec sliding_vf(const PiecewiseSystem& sys, std::span<const double> p,
               const SigmaTolerances& tol = {});

/// Weight s of X- in the convex form (1 - s) X+ + s X-.
double convex_coefficient(const PiecewiseSystem& sys, std::span<const double> p,
                          const SigmaTolerances& tol = {});

/// The convex combination formula evaluated at any p (no classification).
/// Throws DegenerateDenominator when |X+h - X-h| < 1e-12.
Vec filippov_combination(const PiecewiseSystem& sys, std::span<const double> p,
                         double* s_out = nullptr);

/// Straight segment a -> b lying on the switching manifold.
struct SigmaSegment {
  Vec start;
  Vec end;
  Vec at(double u) const;
};

struct SigmaSample {
  double u = 0.0;
  Vec point;
  SigmaClass cls;
};

/// A maximal run of equally-classified samples; endpoints are the bracketed
/// tangency points where the class changes (or the segment ends).
struct SigmaInterval {
  SigmaKind kind = SigmaKind::Sewing;
  double u_start = 0.0;
  double u_end = 0.0;
  Vec start;
  Vec end;
  bool start_is_tangency = false;
  bool end_is_tangency = false;
};

struct SigmaScan {
  std::vector<SigmaSample> samples;
  std::vector<SigmaInterval> intervals;
};

SigmaScan scan_sigma(const PiecewiseSystem& sys, const SigmaSegment& seg,
                     std::size_t n_samples, const SigmaTolerances& tol = {});

}  // namespace nsdyn
