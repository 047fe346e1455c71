#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "lfd/numerics.h"
#include "lfd/plant.h"

namespace lfd {

/// Sampled solution pair (x, u). `inputs[k]` is the input applied at
/// `times[k]`; for pure integration runs the inputs are empty vectors.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;
  std::vector<Vec> inputs;

  std::size_t size() const { return states.size(); }
  double t0() const { return times.front(); }
  double t1() const { return times.back(); }
};

using TimeVaryingRhs = std::function<Vec(double, const Vec&)>;

/// Evaluation time handed to a policy. The last RK4 stage of a step is
/// flagged as a left limit: policies that switch formula at interval
/// boundaries (the learned controllers) must not be sampled across the jump.
struct Instant {
  double t = 0.0;
  bool left_limit = false;

  Instant(double time, bool left = false) : t(time), left_limit(left) {}  // NOLINT
};

using StatePolicy = std::function<Vec(Instant, const Vec&)>;

/// Classical fixed-step RK4 from t0 to t1. The last step is shortened to
/// land exactly on t1. Throws DivergenceError on a non-finite state.
Trajectory integrate(const TimeVaryingRhs& rhs, const Vec& x0, double t0,
                     double t1, double dt);

struct SimulationOptions {
  double dt = 1e-3;
  /// Emulation: recompute the input every `hold` seconds (a multiple of dt)
  /// and keep it constant in between. Unset means the policy is evaluated at
  /// every RK4 stage.
  std::optional<double> hold;
  double divergence_bound = 1e6;
};

/// Generic feedback loop ẏ = dynamics(y, u), u = policy(t, y). Used for the
/// plant itself and for the plant augmented with auxiliary states.
Trajectory simulate_feedback(
    const std::function<Vec(const Vec&, const Vec&)>& dynamics,
    const StatePolicy& policy, const std::function<bool(const Vec&)>& in_domain,
    const Vec& y0, double duration, const SimulationOptions& options);

/// ẋ = f(x) + g(x)u in closed loop with u = controller(t, x).
/// Throws DivergenceError on domain exit, non-finite state or ‖x‖ > bound.
Trajectory simulate_closed_loop(const PlantModel& plant,
                                const StatePolicy& controller, const Vec& x0,
                                double duration,
                                const SimulationOptions& options = {});

}  // namespace lfd
