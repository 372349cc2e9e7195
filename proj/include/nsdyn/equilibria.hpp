#pragma once

// Newton's method, small eigenproblems, and persistence experiments for
// equilibria and periodic orbits of regularized fields.

#include <complex>
#include <string>

#include "nsdyn/flow.hpp"
#include "nsdyn/regularize.hpp"

namespace nsdyn {

struct NewtonOptions {
  double tol = 1e-12;
  std::size_t max_iter = 50;
  double fd_scale = 1e-6;
  int max_halvings = 20;
  double cond_limit = 1e12;
};

struct NewtonResult {
  Vec x;
  double residual = 0.0;
  std::size_t iterations = 0;
  std::vector<Vec> iterates;  // x0, x1, ..., final
};

/// Newton with a central-difference Jacobian and step halving.
NewtonResult newton_solve(const VectorFn& F, std::span<const double> x0,
                          const NewtonOptions& opt = {});

using Matrix = std::vector<Vec>;  // row-major, square
using Complex = std::complex<double>;

/// Eigenvalues of an n x n matrix, n <= 6, from the characteristic
/// polynomial. Each value satisfies |det(A - l I)| <= 1e-8 max(|A|_F, 1)^n.
std::vector<Complex> eigenvalues_small(const Matrix& A);

/// Coefficients c0..cn (cn = 1) of det(l I - A).
Vec characteristic_polynomial(const Matrix& A);
Complex det_shifted(const Matrix& A, Complex lambda);  // det(A - l I)

struct EquilibriumReport {
  Vec point;
  std::vector<Complex> eigenvalues;
  std::size_t n_stable = 0;
  std::size_t n_unstable = 0;
  std::size_t n_center = 0;
  double residual = 0.0;
  std::string context;
};

/// Linearization and stability counts (band 1e-8) of `field` at `point`.
EquilibriumReport equilibrium_report(const VectorFn& field, std::span<const double> point,
                                     std::string context = {});

struct DeltaSweepRow {
  double delta = 0.0;
  bool ok = false;
  std::string error;
  EquilibriumReport report;
  double distance = 0.0;  // |Q_delta - p|
};

/// Continues a hyperbolic sliding equilibrium p of sys into equilibria of the
/// ST-regularized field along delta_grid (warm-started).
std::vector<DeltaSweepRow> persistence_sweep_delta(const PiecewiseSystem& sys,
                                                   const Transition& phi,
                                                   std::span<const double> p,
                                                   const std::vector<double>& delta_grid);

struct Section {
  std::size_t coord = 0;
  double value = 0.0;
  int direction = 1;  // sign of d x[coord] / dt at the crossing
};

struct PeriodicOptions {
  double max_time = 100.0;
  bool reverse_time = false;
  std::vector<std::size_t> fixed_coords;  // held at the seed value
  OdeOptions ode{1e-10, 1e-12};
  double newton_tol = 1e-9;
};

struct PeriodicOrbitReport {
  Section section;
  Vec point;
  double period = 0.0;
  double multiplier = 0.0;  // dominant eigenvalue of the return map derivative
  double residual = 0.0;    // |P(x) - x|
};

struct ReturnResult {
  Vec point;
  double time = 0.0;
};

/// First return to the section (in the requested time direction).
ReturnResult return_map(const VectorFn& field, const Section& section,
                        std::span<const double> start, const PeriodicOptions& opt = {});

PeriodicOrbitReport find_periodic_orbit(const VectorFn& field, const Section& section,
                                        std::span<const double> seed,
                                        const PeriodicOptions& opt = {});

double hausdorff(const std::vector<Vec>& A, const std::vector<Vec>& B);

}  // namespace nsdyn
