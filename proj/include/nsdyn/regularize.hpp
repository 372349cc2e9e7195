#pragma once

// Transition functions and the smooth families built from them.

#include <optional>
#include <string>
#include <string_view>

#include "nsdyn/combination.hpp"
#include "nsdyn/psys.hpp"

namespace nsdyn {

enum class TransitionKind { Monotone, NonMonotone };

/// A point (t, p[coord] = value) where the t-derivative of psi vanishes.
struct CriticalPoint {
  double t = 0.0;
  std::size_t coord = 0;
  double value = 0.0;
};

/// psi(p, t) in [-1, 1], equal to -1 for t <= -1 and +1 for t >= 1. A monotone
/// transition ignores p.
class Transition {
 public:
  using Fn = std::function<double(std::span<const double> p, double t)>;

  Transition(std::string name, TransitionKind kind, Fn value, Fn slope,
             std::vector<CriticalPoint> critical = {});

  double operator()(std::span<const double> p, double t) const;
  /// d psi / dt; zero outside (-1, 1).
  double dt(std::span<const double> p, double t) const;

  /// p-independent evaluation; only valid for monotone transitions.
  double phi(double t) const;
  double phi_dt(double t) const;
  /// Solves phi(t) = v on [-1, 1]; empty when |v| > 1.
  std::optional<double> inverse(double v) const;

  TransitionKind kind() const { return kind_; }
  bool monotone() const { return kind_ == TransitionKind::Monotone; }
  const std::string& name() const { return name_; }
  const std::vector<CriticalPoint>& critical_set() const { return critical_; }

 private:
  std::string name_;
  TransitionKind kind_;
  Fn value_;
  Fn slope_;
  std::vector<CriticalPoint> critical_;
};

/// "cubic" (C1), "quintic" (C2) or "sine" (C1); all odd and increasing.
Transition builtin_phi(std::string_view name);

struct PsiParams {
  double a0 = 0.0;         // t-location of the critical point, |a0| < 1
  double b0 = 0.0;         // coordinate value of the critical point
  std::size_t coord = 0;   // 0-based state index the bump depends on
  double amp = 1.0;        // 0 gives back the cubic; 1 creates the critical point
  double width = 1.0;      // half-width of the bump support
};

/// Outcome of the 200 x 200 slope check of a psi instance.
struct PsiGridReport {
  double min_slope = 0.0;          // min of psi_t / (1 - t^2) over the grid
  std::size_t low_regions = 0;     // connected regions where it is < 0.05
  double region_t = 0.0;           // centroid of the single region, if any
  double region_value = 0.0;
  double slope_at_critical = 0.0;  // psi_t(a0, b0)
  bool ok = false;
};

/// Cubic phi deformed, near p[coord] = b0, towards a transition whose
/// t-derivative vanishes at t = a0:
///   psi = phi(t) + amp * w(p) * (q(t) - phi(t)),
/// with w a C-infinity bump (w(b0) = 1) and q increasing with q'(a0) = 0.
/// Throws when the grid check finds a negative slope or more than one
/// critical region.
Transition builtin_psi(const PsiParams& params);
PsiGridReport psi_grid_report(const PsiParams& params);

enum class Provenance { ST, R, Nonlinear };
const char* to_string(Provenance p);

/// delta-family of smooth fields X^delta(p). Exactly X+ where h >= delta and
/// X- where h <= -delta.
class SmoothFamily {
 public:
  using Blend = std::function<Vec(std::span<const double> p, double t)>;

  SmoothFamily(Provenance prov, PiecewiseSystem sys, Transition tr, Blend blend);

  Vec operator()(std::span<const double> p, double delta) const;
  /// The field with the transition argument h/delta replaced by t.
  Vec at_transition(std::span<const double> p, double t) const;
  VectorFn field(double delta) const;

  Provenance provenance() const { return prov_; }
  const PiecewiseSystem& system() const { return sys_; }
  const Transition& transition() const { return tr_; }

 private:
  Provenance prov_;
  PiecewiseSystem sys_;
  Transition tr_;
  Blend blend_;
};

SmoothFamily st_regularize(const PiecewiseSystem& sys, const Transition& phi);
SmoothFamily r_regularize(const PiecewiseSystem& sys, const Transition& psi);
SmoothFamily nonlinear_regularize(const ContinuousCombination& cc,
                                  const Transition& phi);

}  // namespace nsdyn
