#pragma once

// Continuous combinations: c-sliding classification, lambda branches,
// persistence in eps and the nonlinear-regularization correspondence.

#include <string>

#include "nsdyn/blowup.hpp"
#include "nsdyn/combination.hpp"
#include "nsdyn/nsff.hpp"

namespace nsdyn {

struct LambdaBranch {
  double lambda = 0.0;
  double dK = 0.0;          // dK/dlambda at the root
  std::size_t id = 0;
  bool degenerate = false;  // |dK/dlambda| <= 1e-8
  bool interior = false;    // |lambda| < 1
};

struct CClass {
  bool sliding = false;  // at least one interior, non-degenerate root
  std::vector<LambdaBranch> branches;  // every root on [-1, 1], ascending
};

/// Roots of K(., p) on [-1, 1] (n_sub scan subintervals).
CClass c_classify(const ContinuousCombination& cc, std::span<const double> p,
                  int n_sub = 400);

/// Xt(lambda*, p); throws on a degenerate branch.
Vec c_sliding_vf(const ContinuousCombination& cc, std::span<const double> p,
                 const LambdaBranch& branch);

struct BranchSample {
  double u = 0.0;
  Vec point;
  std::size_t branch = 0;
  double lambda = 0.0;
  double dK = 0.0;
  Vec field;
};

struct BranchTrack {
  std::vector<BranchSample> samples;
  std::vector<std::string> events;  // births, deaths and collisions
};

/// Follows interior lambda roots along a segment of Sigma, matching each
/// root to the nearest one at the previous sample.
BranchTrack track_branches(const ContinuousCombination& cc, const SigmaSegment& seg,
                           std::size_t n);

/// Slow-fast system with a continuous combination Xt(lambda, x, y, eps) of F
/// (lambda = 1) and G (lambda = -1).
struct SlowFastCombination {
  NonsmoothSlowFast base;
  std::function<Vec(double lambda, std::span<const double> x, double y, double eps)> xtilde;

  static SlowFastCombination from_expressions(const NonsmoothSlowFast& base,
                                              const std::vector<std::string>& xtilde,
                                              const expr::Bindings& params = {});
  /// The combination frozen at (y, eps) as a combination on R^n.
  ContinuousCombination at(double y, double eps) const;
  /// The reduced combination on the critical manifold (eps = 0).
  ContinuousCombination reduced(double y_seed = 0.0) const;
};

struct CSweepRow {
  double eps = 0.0;
  bool ok = false;
  std::string error;
  double lambda = 0.0;
  bool lambda_in_range = false;
  Vec x;
  double y = 0.0;
  double distance = 0.0;
  double residual = 0.0;
};

/// Continues a c-sliding equilibrium (x0, y0) on the branch through
/// lambda_seed: K = 0, the remaining slow components of Xt = 0 and H = 0.
std::vector<CSweepRow> c_persistence_sweep(const SlowFastCombination& sys,
                                           std::span<const double> x0, double y0,
                                           double lambda_seed,
                                           const std::vector<double>& eps_grid);

struct EquivalenceReport {
  std::size_t samples = 0;
  std::size_t count_mismatches = 0;
  std::size_t max_branches = 0;
  double max_root_mismatch = 0.0;        // |phi(xb1*) - lambda*|
  double max_derivative_mismatch = 0.0;  // relative
  bool ok = false;
};

/// Compares the critical set of the blown-up nonlinear regularization with
/// the c-sliding set under lambda = phi(xb1) on a segment of Sigma.
EquivalenceReport nonlinear_equivalence_check(const ContinuousCombination& cc,
                                              const Transition& phi,
                                              const SigmaSegment& box, std::size_t n);

}  // namespace nsdyn
