#pragma once

#include <functional>

#include "nsdyn/psys.hpp"

namespace nsdyn {

/// A one-parameter family Xt(lambda, p) joining X- (lambda = -1) to
/// X+ (lambda = +1), not necessarily affine in lambda.
struct ContinuousCombination {
  PiecewiseSystem base;
  std::function<Vec(double lambda, std::span<const double> p)> xtilde;

  /// K(lambda, p) = Xt(lambda, p) . grad h(p).
  double normal_component(double lambda, std::span<const double> p) const;

  /// Max deviation of Xt(+-1, p) from X+-(p) over the given points.
  double endpoint_error(const std::vector<Vec>& points) const;

  /// The affine combination ((1 + l)/2) X+ + ((1 - l)/2) X-.
  static ContinuousCombination linear(const PiecewiseSystem& sys);
};

}  // namespace nsdyn
