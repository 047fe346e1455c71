#pragma once

#include <optional>
#include <vector>

#include "lfd/demos.h"
#include "lfd/geometry.h"
#include "lfd/learner.h"

namespace lfd {

/// Controller over M > n+1 demonstrations. The initial states 𝒵(0) are
/// triangulated; every simplex carries its own affine basis. At the start
/// of each interval the simplex is chosen from z(pT) and then held.
class MultiController {
 public:
  /// Delaunay triangulation of 𝒵(0).
  MultiController(const DemonstrationSet& set, double T,
                  FeedbackMode mode = FeedbackMode::kClosedLoop);
  /// Caller-supplied triangulation over the same points.
  MultiController(const DemonstrationSet& set, Triangulation tri, double T,
                  FeedbackMode mode = FeedbackMode::kClosedLoop);
  /// Restores a controller from stored parts.
  MultiController(Triangulation tri, std::vector<AffineBasis> bases, double T,
                  FeedbackMode mode);

  const Triangulation& triangulation() const { return tri_; }
  const std::vector<AffineBasis>& bases() const { return bases_; }
  double T() const { return T_; }
  FeedbackMode mode() const { return mode_; }
  int n() const { return bases_.front().n(); }
  int m() const { return bases_.front().m(); }

 private:
  void build_bases(const DemonstrationSet& set);
  void check_horizon() const;

  Triangulation tri_;
  std::vector<AffineBasis> bases_;
  double T_;
  FeedbackMode mode_;
};

struct IndexSelection {
  std::size_t simplex = 0;
  std::vector<int> indices;
  Vec theta;  // affine coordinates of z(pT) w.r.t. the simplex vertices
  bool inside_hull = true;
};

/// Inside conv 𝒵(0): the containing simplex. Outside: the simplex holding
/// the Euclidean projection, with θ from the affine extension (Σθ = 1,
/// entries may be negative).
IndexSelection select_index_set(const MultiController& ctrl, const Vec& z_pT);

/// Control for an interval whose simplex has already been selected.
///   closed loop: v = v^{i₁}(τ) + V_ℐ(τ) Z_ℐ⁻¹(τ)(z − z^{i₁}(τ))
///   open loop:   v = v^{i₁}(τ) + V_ℐ(τ) ζ(pT), z is the anchor z(pT)
Vec control_multi(const MultiController& ctrl, const IndexSelection& selection,
                  Instant t, const Vec& z);

/// Stateless evaluation: selects from `z_pT` and evaluates at (t, z).
Vec control_multi(const MultiController& ctrl, Instant t, const Vec& z_pT, const Vec& z);

/// Ψ_j(T) = Z_{ℐ_j}(T) Z_{ℐ_j}⁻¹(0) for every simplex.
std::vector<Mat> per_simplex_monodromy(const MultiController& ctrl);

/// Policy with a per-trajectory interval anchor. Each simulated trajectory
/// needs its own instance.
StatePolicy make_policy(const MultiController& ctrl);

/// Initial states z^i(0) of all demonstrations.
std::vector<Vec> initial_states(const DemonstrationSet& set);

}  // namespace lfd
