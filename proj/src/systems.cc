#include "lfd/systems.h"

#include <cmath>
#include <numbers>
#include <string>

#include "lfd/errors.h"

namespace lfd {

PlantModel chain_plant(int n, double input_gain) {
  if (n < 1) throw Error(ErrorKind::kInvalidDimension, "chain: n must be positive");
  PlantModel p;
  p.name = "chain" + std::to_string(n);
  p.n = n;
  p.m = 1;
  p.chain = brunovsky_pair(n);
  const Mat A = p.chain.A;
  const Mat B = input_gain * p.chain.B;
  p.f = [A](const Vec& x) -> Vec { return A * x; };
  p.g = [B](const Vec&) -> Mat { return B; };
  p.h = [](const Vec& x) { return x(0); };
  p.lie_f_h = [n](int k, const Vec& x) { return k < n ? x(k) : 0.0; };
  p.lie_g_lie_f_h = [n, input_gain](int k, const Vec&) { return k == n - 1 ? input_gain : 0.0; };
  p.inverse_normal_form = [](const Vec& z) { return z; };
  return p;
}

PlantModel ball_beam_plant(double b, double g) {
  if (!(b > 0.0) || !(g > 0.0)) throw Error(ErrorKind::kInvalidArgument, "ball_beam: b and g must be positive");
  PlantModel p;
  p.name = "ball_beam";
  p.n = 4;
  p.m = 1;
  p.feedback_linearizable = false;
  p.chain = brunovsky_pair(4);
  p.f = [b, g](const Vec& x) -> Vec {
    Vec dx(4);
    dx << x(1), b * (x(0) * x(3) * x(3) - g * std::sin(x(2))), x(3), 0.0;
    return dx;
  };
  p.g = [](const Vec&) -> Mat {
    Mat G = Mat::Zero(4, 1);
    G(3, 0) = 1.0;
    return G;
  };
  p.h = [](const Vec& x) { return x(0); };
  p.lie_f_h = [b, g](int k, const Vec& x) {
    const double w2 = x(3) * x(3);
    switch (k) {
      case 0: return x(0);
      case 1: return x(1);
      case 2: return b * (x(0) * w2 - g * std::sin(x(2)));
      case 3: return b * (x(1) * w2 - g * x(3) * std::cos(x(2)));
      case 4: return b * (w2 * b * (x(0) * w2 - g * std::sin(x(2))) + g * w2 * std::sin(x(2)));
      default: throw Error(ErrorKind::kInvalidArgument, "ball_beam: Lie derivative order out of range");
    }
  };
  p.lie_g_lie_f_h = [b, g](int k, const Vec& x) {
    switch (k) {
      case 0:
      case 1: return 0.0;
      case 2: return 2.0 * b * x(0) * x(3);
      case 3: return b * (2.0 * x(1) * x(3) - g * std::cos(x(2)));
      default: throw Error(ErrorKind::kInvalidArgument, "ball_beam: Lie derivative order out of range");
    }
  };
  p.in_domain = [](const Vec& x) { return std::abs(x(2)) < std::numbers::pi / 2.0; };
  return p;
}

Vec ball_beam_default_w() { return (Vec(3) << 1.0, 3.0, 3.0).finished(); }

BallBeamPreset ball_beam_preset(double b, double g) { return ball_beam_preset(b, g, ball_beam_default_w()); }

BallBeamPreset ball_beam_preset(double b, double g, const Vec& w) {
  PlantModel plant = ball_beam_plant(b, g);
  EmbeddingConfig cfg(plant, w);
  return {std::move(plant), std::move(cfg)};
}

PlantModel flat_quad_axis() {
  PlantModel p = chain_plant(3);
  p.name = "flat_quad_axis";
  return p;
}

PlantModel flat_quad_3d() {
  PlantModel p;
  p.name = "flat_quad_3d";
  p.n = 9;
  p.m = 3;
  p.chain = brunovsky_pair(3, 3);
  const Mat A = p.chain.A;
  const Mat B = p.chain.B;
  p.f = [A](const Vec& x) -> Vec { return A * x; };
  p.g = [B](const Vec&) -> Mat { return B; };
  p.normal_form = [](const Vec& x) { return x; };
  p.inverse_normal_form = [](const Vec& z) { return z; };
  p.drift_term = [](const Vec&) -> Vec { return Vec::Zero(3); };
  p.decoupling = [](const Vec&) -> Mat { return Mat::Identity(3, 3); };
  return p;
}

PlantModel make_plant(const std::string& name, const PresetParameters& params) {
  if (name == "ball_beam") return ball_beam_plant(params.ball_beam_b, params.ball_beam_g);
  if (name == "flat_quad_axis") return flat_quad_axis();
  if (name == "flat_quad_3d") return flat_quad_3d();
  if (name.starts_with("chain") && name.size() > 5) {
    const std::string digits = name.substr(5);
    if (digits.find_first_not_of("0123456789") == std::string::npos && digits.size() <= 2) {
      return chain_plant(std::stoi(digits), params.input_gain);
    }
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
  return {"chain{n}", "ball_beam", "flat_quad_axis", "flat_quad_3d"};
}

std::vector<Vec> default_initial_states(const PlantModel& plant) {
  std::vector<Vec> out;
  if (plant.name == "ball_beam") {
    out.push_back((Vec(4) << 1.0, 0.0, 0.0, 0.0).finished());
    out.push_back((Vec(4) << 0.0, 1.0, 0.0, 0.0).finished());
    out.push_back((Vec(4) << 0.0, 0.0, std::numbers::pi / 8.0, 0.0).finished());
    out.push_back((Vec(4) << 0.0, 0.0, 0.0, 10.0).finished());
    return out;
  }
  for (int i = 0; i < plant.n; ++i) out.push_back(Vec::Unit(plant.n, i));
  return out;
}

ExpertController default_expert(const PlantModel& plant) {
  if (plant.name == "ball_beam") {
    const Vec q = (Vec(4) << 1.0, 1.0, 30.0, 30.0).finished();
    return expert_lqr_linearized(plant, q.asDiagonal(), Mat::Constant(1, 1, 0.3));
  }
  if (plant.name == "flat_quad_axis") {
    const Vec q = (Vec(3) << 10.0, 10.0, 1.0).finished();
    return expert_lqr(plant, q.asDiagonal(), 0.1);
  }
  if (plant.name == "flat_quad_3d") {
    Vec q(9);
    q << 10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 1.0, 1.0, 1.0;
    return expert_lqr(plant, q.asDiagonal(), 0.1 * Mat::Identity(3, 3));
  }
  if (plant.n == 2) {
    const Vec q = (Vec(2) << 1.0, 2.0).finished();
    return expert_lqr(plant, q.asDiagonal(), 1.0);
  }
  return expert_lqr(plant, Mat::Identity(plant.n, plant.n), 1.0);
}

Reference figure_eight_axis(double f, int axis) {
  if (!(f > 0.0)) throw Error(ErrorKind::kInvalidArgument, "figure_eight: f must be positive");
  if (axis < 0 || axis > 2) throw Error(ErrorKind::kInvalidArgument, "figure_eight: axis must be 0, 1 or 2");
  const double a = (axis == 0 ? 4.0 : 2.0) * std::numbers::pi * f;
  const double amp = axis == 2 ? 0.1 : 1.0;
  const double offset = axis == 2 ? 0.7 : 0.0;
  Reference ref;
  ref.n = 3;
  ref.m = 1;
  ref.z = [a, amp, offset](double t) {
    Vec z(3);
    z << offset + amp * std::sin(a * t), amp * a * std::cos(a * t), -amp * a * a * std::sin(a * t);
    return z;
  };
  ref.v = [a, amp](double t) { return Vec::Constant(1, -amp * a * a * a * std::cos(a * t)); };
  ref.description = "figure-eight axis " + std::to_string(axis);
  return ref;
}

Reference figure_eight(double f) {
  const Reference axes[3] = {figure_eight_axis(f, 0), figure_eight_axis(f, 1), figure_eight_axis(f, 2)};
  Reference ref;
  ref.n = 9;
  ref.m = 3;
  ref.z = [axes](double t) {
    Vec z(9);
    for (int i = 0; i < 3; ++i) {
      const Vec zi = axes[i].z(t);
      for (int k = 0; k < 3; ++k) z(3 * k + i) = zi(k);
    }
    return z;
  };
  ref.v = [axes](double t) {
    Vec v(3);
    for (int i = 0; i < 3; ++i) v(i) = axes[i].v(t)(0);
    return v;
  };
  ref.description = "figure-eight";
  return ref;
}

Reference setpoint(const Vec& z_R, int m) {
  Reference ref;
  ref.n = static_cast<int>(z_R.size());
  ref.m = m;
  ref.z = [z_R](double) { return z_R; };
  ref.v = [m](double) -> Vec { return Vec::Zero(m); };
  ref.description = "setpoint";
  return ref;
}

Vec track(const StatePolicy& policy, const Reference& ref, const PlantModel& plant, Instant t,
          const Vec& x) {
  const Vec z = feedback_linearize(plant, x);
  const Vec v = ref.v(t.t) + policy(t, z - ref.z(t.t));
  return linearizing_input(plant, x, v);
}

Trajectory simulate_tracking(const PlantModel& plant, const StatePolicy& policy,
                             const Reference& ref, const Vec& x0, double duration,
                             const SimulationOptions& options) {
  if (ref.n != plant.n || ref.m != plant.m) {
    throw Error(ErrorKind::kInvalidDimension, "reference does not match the plant dimensions");
  }
  const StatePolicy controller = [&](Instant t, const Vec& x) { return track(policy, ref, plant, t, x); };
  return simulate_closed_loop(plant, controller, x0, duration, options);
}

}  // namespace lfd
