#pragma once

// Non-smooth slow-fast systems
//   x' = F(x, y, eps) if x1 > 0, G(x, y, eps) if x1 < 0,   eps y' = H(x, y, eps).

#include <string>

#include "nsdyn/equilibria.hpp"

namespace nsdyn {

struct NonsmoothSlowFast {
  std::size_t n = 0;  // slow dimension
  std::function<Vec(std::span<const double> x, double y, double eps)> F;
  std::function<Vec(std::span<const double> x, double y, double eps)> G;
  std::function<double(std::span<const double> x, double y, double eps)> H;

  /// Expressions in x1..xn, y, eps (and named params). h must be "x1": any
  /// other switching function has to be brought to that form by a change of
  /// coordinates first.
  static NonsmoothSlowFast from_expressions(std::size_t n,
                                            const std::vector<std::string>& F,
                                            const std::vector<std::string>& G,
                                            const std::string& H, const std::string& h,
                                            const expr::Bindings& params = {});

  /// dH/dy by central differences.
  double H_y(std::span<const double> x, double y, double eps) const;
};

/// Slot names x1..xn, y, eps.
std::vector<std::string> nsff_slot_names(std::size_t n);

struct ReducedNonsmooth {
  PiecewiseSystem system;  // F(x, y(x), 0) / G(x, y(x), 0), h = x1
  std::function<double(std::span<const double> x)> y_of;
};

/// y(x) by Newton on H(x, ., 0) = 0 from y_seed.
ReducedNonsmooth reduce(const NonsmoothSlowFast& sys, double y_seed = 0.0);

struct SlidingEps {
  Vec slow;          // x' on Sigma (component 1 is zero)
  double fast = 0.0; // H, i.e. eps * y'
};

/// Sliding field at the point (0, x2..xn) with fast variable y.
SlidingEps sliding_vf_eps(const NonsmoothSlowFast& sys, std::span<const double> x,
                          double y, double eps);

struct EpsSweepRow {
  double eps = 0.0;
  bool ok = false;
  std::string error;
  Vec x;          // slow point (x1 = 0)
  double y = 0.0;
  double distance = 0.0;  // |(x, y) - (x0, y0)|
  double residual = 0.0;
  EquilibriumReport report;  // linearization of the sliding system (x2.., y)
};

/// Continues an equilibrium (x0, y0) of the reduced sliding field along
/// eps_grid. Refuses to start when dH/dy = 0 or F1 = G1 at the seed.
std::vector<EpsSweepRow> persistence_sweep_eps(const NonsmoothSlowFast& sys,
                                               std::span<const double> x0, double y0,
                                               const std::vector<double>& eps_grid);

/// delta xb1' = a1, xi' = ai, eps y' = Hb, with the r-regularization blended
/// by psi(p, xb1) at p = (delta xb1, x2..xn, y).
struct ThreeScaleSystem {
  NonsmoothSlowFast base;
  Transition psi;

  /// (a1, ..., an, Hb) at state z = (xb1, x2..xn, y).
  Vec rhs(std::span<const double> z, double eps, double delta) const;
  /// The same equations in the fastest time scale min(delta, eps).
  VectorFn fastest_field(double eps, double delta) const;
};

ThreeScaleSystem three_scale_blowup(const NonsmoothSlowFast& sys, const Transition& psi);

}  // namespace nsdyn
