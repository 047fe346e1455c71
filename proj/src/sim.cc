#include "lfd/sim.h"

#include <cmath>
#include <string>

#include "lfd/errors.h"

namespace lfd {

namespace {

// Number of dt-steps needed to reach `duration`, and the length of the
// final step (shortened if duration is not a multiple of dt).
struct StepPlan {
  long steps = 0;
  double last = 0.0;
};

StepPlan plan_steps(double duration, double dt) {
  if (!(dt > 0.0) || !(duration > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "integration needs dt > 0 and t1 > t0");
  }
  const double ratio = duration / dt;
  if (ratio > 1e8) {
    throw Error(ErrorKind::kInvalidArgument, "integration exceeds 1e8 steps");
  }
  StepPlan plan;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, ratio)) {
    plan.steps = static_cast<long>(rounded);
    plan.last = dt;
  } else {
    plan.steps = static_cast<long>(std::ceil(ratio));
    plan.last = duration - static_cast<double>(plan.steps - 1) * dt;
  }
  return plan;
}

double grid_time(double t0, double t1, const StepPlan& plan, double dt, long k) {
  if (k == plan.steps) return t1;
  return t0 + static_cast<double>(k) * dt;
}

}  // namespace

Trajectory integrate(const TimeVaryingRhs& rhs, const Vec& x0, double t0,
                     double t1, double dt) {
  const StepPlan plan = plan_steps(t1 - t0, dt);
  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(plan.steps) + 1);
  traj.states.reserve(static_cast<std::size_t>(plan.steps) + 1);
  traj.times.push_back(t0);
  traj.states.push_back(x0);
  Vec x = x0;
  for (long k = 0; k < plan.steps; ++k) {
    const double t = grid_time(t0, t1, plan, dt, k);
    const double h = (k + 1 == plan.steps) ? plan.last : dt;
    const Vec k1 = rhs(t, x);
    const Vec k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1);
    const Vec k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2);
    const Vec k4 = rhs(t + h, x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double t_next = grid_time(t0, t1, plan, dt, k + 1);
    if (!x.allFinite()) throw DivergenceError(t_next, "non-finite state");
    traj.times.push_back(t_next);
    traj.states.push_back(x);
  }
  traj.inputs.assign(traj.states.size(), Vec());
  return traj;
}

Trajectory simulate_feedback(
    const std::function<Vec(const Vec&, const Vec&)>& dynamics,
    const StatePolicy& policy, const std::function<bool(const Vec&)>& in_domain,
    const Vec& y0, double duration, const SimulationOptions& options) {
  const double dt = options.dt;
  const StepPlan plan = plan_steps(duration, dt);
  long hold_steps = 0;
  if (options.hold) {
    const double ratio = *options.hold / dt;
    hold_steps = static_cast<long>(std::llround(ratio));
    if (hold_steps < 1 || std::abs(ratio - static_cast<double>(hold_steps)) > 1e-9 * ratio) {
      throw Error(ErrorKind::kInvalidArgument, "hold period must be a positive multiple of dt");
    }
  }
  if (in_domain && !in_domain(y0)) {
    throw DivergenceError(0.0, "initial state outside the domain");
  }

  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(plan.steps) + 1);
  traj.states.reserve(static_cast<std::size_t>(plan.steps) + 1);
  traj.inputs.reserve(static_cast<std::size_t>(plan.steps) + 1);

  Vec y = y0;
  Vec held;
  for (long k = 0; k <= plan.steps; ++k) {
    const double t = grid_time(0.0, duration, plan, dt, k);
    // A stage state outside the domain (or at a singular feedback) means
    // the trajectory is leaving the region where the loop is defined.
    try {
      Vec u;
      if (hold_steps > 0) {
        if (k % hold_steps == 0) held = policy(t, y);
        u = held;
      } else {
        u = policy(t, y);
      }
      traj.times.push_back(t);
      traj.states.push_back(y);
      traj.inputs.push_back(u);
      if (k == plan.steps) break;

      const double h = (k + 1 == plan.steps) ? plan.last : dt;
      Vec k1, k2, k3, k4;
      if (hold_steps > 0) {
        k1 = dynamics(y, u);
        k2 = dynamics(y + 0.5 * h * k1, u);
        k3 = dynamics(y + 0.5 * h * k2, u);
        k4 = dynamics(y + h * k3, u);
      } else {
        k1 = dynamics(y, u);
        const Vec y2 = y + 0.5 * h * k1;
        k2 = dynamics(y2, policy(t + 0.5 * h, y2));
        const Vec y3 = y + 0.5 * h * k2;
        k3 = dynamics(y3, policy(t + 0.5 * h, y3));
        const Vec y4 = y + h * k3;
        k4 = dynamics(y4, policy(Instant(t + h, true), y4));
      }
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } catch (const DivergenceError&) {
      throw;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kDomain && e.kind() != ErrorKind::kSingularDecoupling &&
          e.kind() != ErrorKind::kSingularEmbedding) {
        throw;
      }
      throw DivergenceError(t, e.what());
    }

    const double t_next = grid_time(0.0, duration, plan, dt, k + 1);
    if (!y.allFinite()) throw DivergenceError(t_next, "non-finite state");
    if (y.norm() > options.divergence_bound) {
      throw DivergenceError(t_next, "state norm exceeded the divergence bound");
    }
    if (in_domain && !in_domain(y)) {
      throw DivergenceError(t_next, "state left the domain");
    }
  }
  return traj;
}

Trajectory simulate_closed_loop(const PlantModel& plant,
                                const StatePolicy& controller, const Vec& x0,
                                double duration,
                                const SimulationOptions& options) {
  if (x0.size() != plant.n) {
    throw Error(ErrorKind::kInvalidDimension, "simulate_closed_loop: state size mismatch");
  }
  auto dynamics = [&plant](const Vec& x, const Vec& u) { return plant.rhs(x, u); };
  std::function<bool(const Vec&)> domain;
  if (plant.in_domain) domain = plant.in_domain;
  return simulate_feedback(dynamics, controller, domain, x0, duration, options);
}

}  // namespace lfd
