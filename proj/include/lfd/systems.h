#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lfd/embed.h"
#include "lfd/numerics.h"
#include "lfd/plant.h"
#include "lfd/sim.h"

namespace lfd {

/// n-th order integrator chain ẋ_k = x_{k+1}, ẋ_n = c·u with h(x) = x₁.
PlantModel chain_plant(int n, double input_gain = 1.0);

/// Ball and beam, x = (r, ṙ, φ, ω):
///   ṙ = ṙ, r̈ = b̄(rω² − ḡ sin φ), φ̇ = ω, ω̇ = u, h(x) = r.
/// Not feedback linearizable; the domain is |φ| < π/2.
PlantModel ball_beam_plant(double b = 0.7143, double g = 9.81);

struct BallBeamPreset {
  PlantModel plant;
  EmbeddingConfig embedding;
};

/// w = (1, 3, 3), so A_ξ has the triple eigenvalue −1.
Vec ball_beam_default_w();

BallBeamPreset ball_beam_preset(double b = 0.7143, double g = 9.81);
BallBeamPreset ball_beam_preset(double b, double g, const Vec& w);

/// One axis of the flat quadrotor, z = (p, ṗ, p̈), ż₃ = v.
PlantModel flat_quad_axis();

/// Flat quadrotor, x = (p, ṗ, p̈) ∈ ℝ⁹ with p ∈ ℝ³ and three jerk inputs.
/// The thrust/attitude back-map is taken as the identity.
PlantModel flat_quad_3d();

struct PresetParameters {
  double ball_beam_b = 0.7143;
  double ball_beam_g = 9.81;
  double input_gain = 1.0;  // chain presets only
};

/// Registry: "chain{n}" (e.g. "chain2"), "ball_beam", "flat_quad_axis",
/// "flat_quad_3d". Throws kInvalidArgument for unknown names.
PlantModel make_plant(const std::string& name, const PresetParameters& params = {});
std::vector<std::string> preset_names();

/// Default expert initial conditions: unit vectors for chains and the
/// quadrotor, the four published initial states for the ball and beam.
std::vector<Vec> default_initial_states(const PlantModel& plant);

/// Default synthetic expert. Chains: LQR with Q = I, R = 1, except n = 2
/// (Q = diag(1, 2), K = [1, 2]) and the quadrotor axis (Q = diag(10, 10, 1),
/// R = 0.1 per axis). Ball and beam: LQR on the linearization with
/// Q = diag(1, 1, 30, 30), R = 0.3.
ExpertController default_expert(const PlantModel& plant);

/// A reference in normal-form coordinates with feedforward v_R = d/dt z_R,top.
struct Reference {
  int n = 0;
  int m = 1;
  std::function<Vec(double)> z;
  std::function<Vec(double)> v;
  std::string description;
};

/// p_R(t) = (sin 4πft, sin 2πft, 0.1 sin 2πft + 0.7), stacked as
/// z_R = (p_R, ṗ_R, p̈_R) with v_R = p⃛_R.
Reference figure_eight(double f);

/// A single axis (0, 1 or 2) of the figure-eight, z_R = (p, ṗ, p̈).
Reference figure_eight_axis(double f, int axis);

/// Constant z_R with zero feedforward.
Reference setpoint(const Vec& z_R, int m = 1);

/// u = b(x)⁻¹(−a(x) + v_R(t) + κ̂(t, z − z_R(t))) with z = Φ(x); the learned
/// policy acts on the tracking error.
Vec track(const StatePolicy& policy, const Reference& ref, const PlantModel& plant,
          Instant t, const Vec& x);

/// Closed-loop tracking run. Each call needs a fresh policy instance.
Trajectory simulate_tracking(const PlantModel& plant, const StatePolicy& policy,
                             const Reference& ref, const Vec& x0, double duration,
                             const SimulationOptions& options = {});

}  // namespace lfd
