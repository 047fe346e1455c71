#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "lfd/numerics.h"
#include "lfd/plant.h"
#include "lfd/sim.h"

namespace lfd {

/// Expert solutions (xⁱ, uⁱ) on a shared uniform grid over [0, T].
/// Index 0 is always the trivial solution (x, u) ≡ (0, 0).
struct RawDemonstrationSet {
  double T = 0.0;
  double dt = 0.0;
  std::vector<Trajectory> demos;
};

/// Position of t on a uniform grid: t = (index + fraction)·dt with
/// fraction in [0, 1). Grid hits (to 1e−9 of a step) report fraction 0.
struct GridPosition {
  std::size_t index = 0;
  double fraction = 0.0;
};

/// Throws kRange if t lies outside [0, (samples−1)·dt].
GridPosition grid_position(double t, double dt, std::size_t samples);

/// One demonstration in Brunovsky coordinates, (zⁱ(t), vⁱ(t)).
struct Demonstration {
  double dt = 0.0;
  std::vector<Vec> z;
  std::vector<Vec> v;

  std::size_t samples() const { return z.size(); }
  double horizon() const { return dt * static_cast<double>(z.size() - 1); }
};

struct DemonstrationSet {
  int n = 0;
  int m = 1;
  double T = 0.0;
  double dt = 0.0;
  std::vector<Demonstration> demos;
  bool includes_trivial = false;

  std::size_t size() const { return demos.size(); }
  std::size_t samples() const { return demos.empty() ? 0 : demos.front().samples(); }

  /// Checks the structural invariants (common grid, finite samples,
  /// M ≥ n+1, demo 0 trivial). Throws kInvalidArgument on violation.
  void check_invariants() const;
};

/// Records one closed-loop expert run of length T per initial condition
/// and prepends the trivial solution. Divergence is reported with the
/// offending initial condition.
RawDemonstrationSet record_expert(const PlantModel& plant,
                                  const ExpertController& expert,
                                  const std::vector<Vec>& initial_states,
                                  double T, double dt, int jobs = 1);

/// zⁱ(t) = Φ(xⁱ(t)), vⁱ(t) = L_fⁿh(xⁱ) + L_gL_f^{n−1}h(xⁱ)uⁱ.
DemonstrationSet to_zv(const PlantModel& plant, const RawDemonstrationSet& raw);

struct AffineIndependenceReport {
  double min_sigma = 0.0;        // min over the grid of σₙ(Z_I(t))
  double min_sigma_time = 0.0;
  double min_ratio = 0.0;        // min over the grid of σₙ/σ₁
  double min_ratio_time = 0.0;
  double max_condition = 0.0;    // max over the grid of σ₁/σₙ
  double max_condition_time = 0.0;
  double condition_at_zero = 0.0;
  bool pass = false;
};

inline constexpr double kAffineIndependenceTolerance = 1e-8;

/// Scans Z_I(t) = [z^{i₂}−z^{i₁} | … | z^{i_{n+1}}−z^{i₁}] over the grid.
/// Passes iff σₙ(t) > 1e−8·σ₁(t) at every grid time.
AffineIndependenceReport validate_affine_independence(
    const DemonstrationSet& set, const std::vector<int>& indices);

/// (z, v) at time t, linearly interpolated between grid samples.
std::pair<Vec, Vec> eval_demo(const Demonstration& demo, double t);

}  // namespace lfd
