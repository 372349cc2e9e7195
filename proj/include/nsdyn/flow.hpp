#pragma once

// Dormand-Prince 5(4) integration, switching-surface events and the hybrid
// Filippov integrator.

#include <optional>
#include <string>

#include "nsdyn/blowup.hpp"
#include "nsdyn/psys.hpp"

namespace nsdyn {

enum class Mode { FlowPlus, FlowMinus, Sliding, Smooth };
const char* to_string(Mode m);

enum class EventKind { HitSigma, SlideEnter, SlideExit, TangencyStop, RepellingEntry };
const char* to_string(EventKind k);

struct Event {
  double t = 0.0;
  EventKind kind = EventKind::HitSigma;
  Vec state;
};

struct Segment {
  Mode mode = Mode::Smooth;
  std::vector<double> t;
  std::vector<Vec> x;
  std::vector<Vec> dx;  // field value at each sample (for dense output)

  /// Cubic Hermite interpolation between accepted steps.
  Vec at(double time) const;
};

struct Trajectory {
  std::vector<Segment> segments;
  std::vector<Event> events;
  bool halted = false;
  std::string halt_reason;

  const Vec& final_state() const { return segments.back().x.back(); }
  double final_time() const { return segments.back().t.back(); }
  std::vector<Mode> modes() const;
};

struct OdeOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double h_max = 0.0;  // 0: no limit besides the span
  std::size_t max_steps = 2'000'000;
};

/// Terminal event: fires when g becomes negative. With `arm`, only after g
/// has been strictly positive at an accepted step (so a start on g = 0 is
/// not reported).
struct EventFn {
  ScalarFn g;
  bool arm = false;
};

struct RunResult {
  Segment segment;
  bool hit = false;
  std::size_t which = 0;
  double t = 0.0;
  Vec x;
};

/// Integrates f from (t0, x0) towards t1 (either direction) and stops at the
/// first event. `project`, when set, is applied to each accepted state.
RunResult integrate_events(const VectorFn& f, std::span<const double> x0, double t0,
                           double t1, const OdeOptions& opt,
                           const std::vector<EventFn>& events, Mode mode = Mode::Smooth,
                           const std::function<void(Vec&)>& project = {});

Trajectory integrate_smooth(const VectorFn& f, std::span<const double> x0, double t0,
                            double t1, const OdeOptions& opt = {});

struct Crossing {
  double t = 0.0;
  Vec state;
};

/// First sign change of h along the flow of f on [t0, t1], localized to
/// |h| <= 1e-12.
std::optional<Crossing> detect_crossing(const VectorFn& f, const ScalarFn& h,
                                        std::span<const double> x0, double t0,
                                        double t1, const OdeOptions& opt = {});

struct FilippovOptions {
  OdeOptions ode;
  SigmaTolerances sigma;
  std::size_t max_events = 10'000;
};

Trajectory integrate_filippov(const PiecewiseSystem& sys, std::span<const double> x0,
                              double t0, double t1, const FilippovOptions& opt = {});

/// Moves p onto {h = 0} by Newton steps along grad h.
void project_to_sigma(const PiecewiseSystem& sys, Vec& p);

struct SlowFastRun {
  Trajectory trajectory;   // states (x, ybar) in the fast time
  double manifold_distance = 0.0;  // |ybar - nearest critical root| at the end
  bool near_manifold = false;
};

/// Fast-time integration x' = delta alpha, ybar' = beta.
SlowFastRun integrate_slowfast(const SlowFastSystem& sfs, double delta,
                               std::span<const double> x0, double ybar0, double t0,
                               double t1, double c = 10.0,
                               const OdeOptions& opt = {});

}  // namespace nsdyn
