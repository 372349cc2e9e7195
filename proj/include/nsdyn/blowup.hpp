#pragma once

// Directional blow-up h = delta * ybar of a regularized family and the
// resulting slow-fast geometry.

#include <array>
#include <string>

#include "nsdyn/regularize.hpp"

namespace nsdyn {

/// x' = alpha(x, ybar, delta), delta * ybar' = beta(x, ybar, delta).
struct SlowFastSystem {
  std::size_t slow_dim = 0;
  std::function<Vec(std::span<const double> x, double ybar, double delta)> alpha;
  std::function<double(std::span<const double> x, double ybar, double delta)> beta;
  std::string param_name = "delta";
  /// Index of the fast coordinate in the original state (slow coordinates
  /// keep their relative order).
  std::size_t split = 0;

  /// Original-coordinates point (x with y = delta * ybar inserted at split).
  Vec lift(std::span<const double> x, double ybar, double delta) const;
  /// Slow part of an original-coordinates point.
  Vec slow_part(std::span<const double> p) const;
};

struct CriticalManifoldSample {
  Vec x;
  double ybar = 0.0;
  double dbeta = 0.0;  // d beta / d ybar at delta = 0
  bool hyperbolic = false;
  bool attracting = false;
};

/// Requires h to be exactly the coordinate `split`.
SlowFastSystem directional_blowup(const SmoothFamily& fam, std::size_t split);

/// Max componentwise |Gamma(G(x, theta, r)) - Phi(x, theta, r)| over samples
/// (x, theta, r).
double polar_directional_check(const std::vector<std::array<double, 3>>& samples);

/// Every root ybar in [-1, 1] of beta(x, ybar, 0) = 0.
std::vector<CriticalManifoldSample> critical_roots(const SlowFastSystem& sfs,
                                                   std::span<const double> x,
                                                   int n_sub = 400);

/// alpha(x, ybar, 0) on a normally hyperbolic sample.
Vec reduced_rhs(const SlowFastSystem& sfs, const CriticalManifoldSample& sample);

enum class RRegion { RSewing, RSliding, Undetermined };
const char* to_string(RRegion r);

struct RRegionSample {
  Vec point;
  RRegion region = RRegion::Undetermined;
  std::vector<CriticalManifoldSample> roots;
};

std::vector<RRegionSample> r_region_scan(const PiecewiseSystem& sys,
                                         const Transition& tr,
                                         const SigmaSegment& segment,
                                         std::size_t n);

}  // namespace nsdyn
