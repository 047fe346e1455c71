#pragma once

#include <utility>
#include <vector>

#include "lfd/demos.h"
#include "lfd/numerics.h"
#include "lfd/plant.h"
#include "lfd/sim.h"

namespace lfd {

/// Companion matrix of w: ones on the superdiagonal, last row −w.
Mat a_xi(const Vec& w);

/// Integrator-chain embedding of a single-input plant whose output does not
/// have full relative degree. Auxiliary states ξ ∈ ℝ^{n−1} absorb the input
/// terms L_gL_fᵏh, k < n−1.
class EmbeddingConfig {
 public:
  /// Throws kInvalidArgument unless w has n−1 entries and A_ξ(w) is Hurwitz.
  EmbeddingConfig(PlantModel plant, Vec w);

  const PlantModel& plant() const { return plant_; }
  const Vec& w() const { return w_; }
  int n() const { return plant_.n; }

 private:
  PlantModel plant_;
  Vec w_;
};

inline constexpr double kEmbeddingSingularity = 1e-6;

/// z_k = L_f^{k−1}h(x) + ξ_k (k < n), z_n = L_f^{n−1}h(x) − Σ w_j ξ_j.
/// Throws kDomain outside the plant's domain.
Vec phi_z(const EmbeddingConfig& cfg, const Vec& x, const Vec& xi);
std::pair<Vec, Vec> phi(const EmbeddingConfig& cfg, const Vec& x, const Vec& xi);

/// r(x) = L_gL_f^{n−1}h(x) + Σ w_j L_gL_f^{j−1}h(x).
double r_of_x(const EmbeddingConfig& cfg, const Vec& x);

/// s(x, ξ) = −L_fⁿh(x) + Σ_{j≤n−2} w_j ξ_{j+1} − w_{n−1} Σ w_i ξ_i, so that
/// ż_n = −s + r u.
double s_of_x_xi(const EmbeddingConfig& cfg, const Vec& x, const Vec& xi);

/// ξ̇_k = ξ_{k+1} − L_gL_f^{k−1}h(x)u, ξ̇_{n−1} = −Σ w_i ξ_i − L_gL_f^{n−2}h(x)u.
Vec aux_rhs(const EmbeddingConfig& cfg, const Vec& x, const Vec& xi, double u);

/// u = (s(x, ξ) + v)/r(x). Throws kSingularEmbedding when |r| ≤ 1e−6.
double dynamic_feedback(const EmbeddingConfig& cfg, const Vec& x, const Vec& xi, double v);

struct EmbeddedDemonstration {
  double dt = 0.0;
  std::vector<Vec> z;
  std::vector<Vec> xi;
  std::vector<double> v;

  std::size_t samples() const { return z.size(); }
};

struct EmbeddedDemonstrationSet {
  int n = 0;
  double T = 0.0;
  double dt = 0.0;
  Vec w;
  std::vector<EmbeddedDemonstration> demos;
};

/// Drives the auxiliary dynamics with each recorded (xⁱ, uⁱ) from ξ(0) = ξ₀
/// (RK4 on the recording grid, x Hermite-interpolated and u linearly
/// interpolated inside a step), then maps to zⁱ = Φ_z(xⁱ, ξⁱ) and
/// vⁱ = r(xⁱ)uⁱ − s(xⁱ, ξⁱ). A singular r anywhere on a recording throws
/// kSingularEmbedding naming the demonstration and time.
EmbeddedDemonstrationSet transform_demos(const EmbeddingConfig& cfg,
                                         const RawDemonstrationSet& raw,
                                         const Vec& xi0);
EmbeddedDemonstrationSet transform_demos(const EmbeddingConfig& cfg,
                                         const RawDemonstrationSet& raw);

/// The (z, v) part, ready for the learner.
DemonstrationSet to_demonstration_set(const EmbeddedDemonstrationSet& set);

/// x with Φ_z(x, ξ) = z, by damped Newton from `guess`. Throws kNumerical
/// if the iteration fails to converge.
Vec phi_inverse(const EmbeddingConfig& cfg, const Vec& z, const Vec& xi, const Vec& guess);

/// Central-difference Jacobian in ξ, at (z, ξ) = (0, 0), of the unforced
/// auxiliary drift −L_gL_f^{k−1}h(x)·s(x, ξ)/r(x) with x = Φ⁻¹(0, ξ).
/// A_ξ + A_w Hurwitz is a local surrogate for the ISS condition; it is not
/// a proof of it.
Mat a_w_numeric(const EmbeddingConfig& cfg, double eps = 1e-5);

/// Simulates the augmented state y = (x, ξ) with
/// u = dynamic_feedback(x, ξ, κ̂(t, Φ_z(x, ξ))). `policy` acts on z.
/// States of the returned trajectory are the stacked (x, ξ).
Trajectory simulate_embedded_closed_loop(const EmbeddingConfig& cfg,
                                         const StatePolicy& policy, const Vec& x0,
                                         const Vec& xi0, double duration,
                                         const SimulationOptions& options = {});

}  // namespace lfd
