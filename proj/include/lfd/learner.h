#pragma once

#include <memory>
#include <vector>

#include <Eigen/QR>

#include "lfd/demos.h"
#include "lfd/numerics.h"
#include "lfd/sim.h"

namespace lfd {

/// Grid-sampled difference matrices of n+1 demonstrations,
///   Z_I(t) = [z^{i₂}(t)−z^{i₁}(t) | … | z^{i_{n+1}}(t)−z^{i₁}(t)],
///   V_I(t) = [v^{i₂}(t)−v^{i₁}(t) | … | v^{i_{n+1}}(t)−v^{i₁}(t)],
/// together with the base trajectory (z^{i₁}, v^{i₁}). A QR factorization
/// of Z_I is cached for every grid point.
class AffineBasis {
 public:
  /// Throws AffineDependenceError naming the first grid time where
  /// σₙ(Z_I) ≤ 1e−8·σ₁(Z_I).
  static AffineBasis build(const DemonstrationSet& set, std::vector<int> indices);

  /// Rebuilds a basis from stored matrices (deserialization). Applies the
  /// same conditioning check as build().
  AffineBasis(std::vector<int> indices, double dt, std::vector<Mat> Zs,
              std::vector<Mat> Vs, std::vector<Vec> base_z,
              std::vector<Vec> base_v);

  const std::vector<int>& indices() const { return indices_; }
  int n() const { return static_cast<int>(Zs_.front().rows()); }
  int m() const { return static_cast<int>(Vs_.front().rows()); }
  double dt() const { return dt_; }
  std::size_t samples() const { return Zs_.size(); }
  double horizon() const { return dt_ * static_cast<double>(Zs_.size() - 1); }
  bool trivial_base() const { return trivial_base_; }

  const std::vector<Mat>& Zs() const { return Zs_; }
  const std::vector<Mat>& Vs() const { return Vs_; }
  const std::vector<Vec>& base_zs() const { return base_z_; }
  const std::vector<Vec>& base_vs() const { return base_v_; }

  /// Entry-wise linear interpolation between grid samples.
  Mat Z(double tau) const;
  Mat V(double tau) const;
  Vec base_z(double tau) const;
  Vec base_v(double tau) const;

  /// ζ solving Z(τ)ζ = z − z^{i₁}(τ). Off-grid times factorize the
  /// interpolated matrix; estimated condition numbers above 1e12 throw.
  Vec zeta(double tau, const Vec& z) const;

  /// v^{i₁}(τ) + V(τ)ζ.
  Vec input(double tau, const Vec& zeta) const;

  /// z^{i₁}(τ) + Z(τ)ζ, the state reached by replaying the combination ζ.
  Vec reconstruct(const Vec& zeta, double tau) const;

 private:
  AffineBasis() = default;
  void factorize();

  std::vector<int> indices_;
  double dt_ = 0.0;
  std::vector<Mat> Zs_;
  std::vector<Mat> Vs_;
  std::vector<Vec> base_z_;
  std::vector<Vec> base_v_;
  std::vector<Eigen::ColPivHouseholderQR<Mat>> qr_;
  bool trivial_base_ = false;
};

inline constexpr double kMaxSolveCondition = 1e12;

enum class FeedbackMode { kOpenLoop, kClosedLoop };

/// Position inside the interval partition [pT, (p+1)T]. Boundaries belong
/// to the interval that starts there, except for left-limit evaluations.
struct IntervalTime {
  long p = 0;
  double tau = 0.0;
};

IntervalTime split_interval(Instant t, double T);

/// The n+1-demonstration controller.
class LearnedController {
 public:
  LearnedController(AffineBasis basis, double T,
                    FeedbackMode mode = FeedbackMode::kClosedLoop);

  const AffineBasis& basis() const { return basis_; }
  double T() const { return T_; }
  FeedbackMode mode() const { return mode_; }

 private:
  AffineBasis basis_;
  double T_;
  FeedbackMode mode_;
};

/// ζ = Z⁻¹(τ)(z − z^{i₁}(τ)); equals Z⁻¹(τ)z for a trivial base.
Vec zeta(const AffineBasis& basis, double tau, const Vec& z);

/// v(t) = V(t−pT)·Z⁻¹(0)·z(pT), the sampled controller.
Vec control_open_loop(const LearnedController& ctrl, Instant t, const Vec& z_pT);

/// v(t) = V(t−pT)·Z⁻¹(t−pT)·z(t), the improved controller.
Vec control_closed_loop(const LearnedController& ctrl, Instant t, const Vec& z);

Vec reconstruct_trajectory(const AffineBasis& basis, const Vec& zeta, double tau);

/// Policy in normal-form coordinates for simulation. Open-loop mode keeps a
/// per-trajectory anchor z(pT), so every simulated trajectory needs its own
/// policy instance.
StatePolicy make_policy(const LearnedController& ctrl);

}  // namespace lfd
