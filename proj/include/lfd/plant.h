#pragma once

#include <functional>
#include <optional>
#include <string>

#include "lfd/numerics.h"

namespace lfd {

/// Shift/unit pair of an integrator chain. For multi-input chains the
/// state is stacked by derivative order, z = (y, ẏ, …, y^(r−1)) with
/// y ∈ ℝᵐ, so A = S ⊗ Iₘ and B = e_r ⊗ Iₘ.
struct BrunovskyPair {
  Mat A;
  Mat B;
};

BrunovskyPair brunovsky_pair(int n);
BrunovskyPair brunovsky_pair(int chain_length, int inputs);

/// A concrete plant ẋ = f(x) + g(x)u with closed-form Lie derivatives.
///
/// Single-input plants supply `lie_f_h(k, x)` = L_fᵏh(x) for k = 0..n and
/// `lie_g_lie_f_h(k, x)` = L_gL_fᵏh(x) for k = 0..n−1. The flat quadrotor
/// (three inputs, already in normal form) instead supplies `normal_form`,
/// `drift_term` and `decoupling` directly.
struct PlantModel {
  std::string name;
  int n = 0;
  int m = 1;
  bool feedback_linearizable = true;

  std::function<Vec(const Vec&)> f;
  std::function<Mat(const Vec&)> g;
  std::function<double(const Vec&)> h;
  std::function<double(int, const Vec&)> lie_f_h;
  std::function<double(int, const Vec&)> lie_g_lie_f_h;
  std::function<bool(const Vec&)> in_domain;

  // Multi-input normal-form overrides; empty for single-input plants.
  std::function<Vec(const Vec&)> normal_form;
  std::function<Vec(const Vec&)> drift_term;
  std::function<Mat(const Vec&)> decoupling;

  /// Φ⁻¹ where the preset has a closed form.
  std::function<Vec(const Vec&)> inverse_normal_form;

  BrunovskyPair chain;

  Vec rhs(const Vec& x, const Vec& u) const { return f(x) + g(x) * u; }
  bool contains(const Vec& x) const { return !in_domain || in_domain(x); }
};

enum class Coordinates { kState, kNormalForm };

/// A smooth (synthetic) expert policy.
struct ExpertController {
  std::function<Vec(const Vec&)> kappa;
  Coordinates coordinates = Coordinates::kNormalForm;
  std::string description;
  Mat gain;
};

/// z = Φ(x), z_k = L_f^{k−1}h(x).
Vec feedback_linearize(const PlantModel& plant, const Vec& x);

/// a(x) = L_fⁿh(x) and b(x) = L_gL_f^{n−1}h(x), so that v = a + b u.
Vec drift_term(const PlantModel& plant, const Vec& x);
Mat decoupling_matrix(const PlantModel& plant, const Vec& x);

/// u = b(x)⁻¹(v − a(x)). Throws kSingularDecoupling when |b| < 1e−9.
Vec linearizing_input(const PlantModel& plant, const Vec& x, const Vec& v);

/// Input the expert applies at state x, mapped through the linearizing
/// feedback when the expert acts on normal-form coordinates.
Vec expert_input(const PlantModel& plant, const ExpertController& expert,
                 const Vec& x);

/// κ(z) = −Kz with K the LQR gain of the plant's Brunovsky pair.
ExpertController expert_lqr(const PlantModel& plant, const Mat& Q,
                            const Mat& R);
ExpertController expert_lqr(const PlantModel& plant, const Mat& Q, double R);

/// u = −Kx with K the LQR gain of the plant's Jacobian linearization at the
/// origin. Used for plants that are not feedback linearizable.
ExpertController expert_lqr_linearized(const PlantModel& plant, const Mat& Q,
                                       const Mat& R);

/// Central-difference Jacobians of f + g u at (x, u) = (0, 0).
BrunovskyPair linearize_at_origin(const PlantModel& plant, double step = 1e-6);

}  // namespace lfd
