#pragma once

#include <optional>
#include <vector>

#include "lfd/learner.h"
#include "lfd/multi.h"
#include "lfd/numerics.h"

namespace lfd {

/// Ψ(T) = Z(T) Z⁻¹(0).
Mat monodromy_from_data(const AffineBasis& basis, double T);

/// Ψ(T) = e^{AT} + ∫₀ᵀ e^{A(T−τ)} B V(τ) Z⁻¹(0) dτ, with the exponential of
/// the nilpotent A summed exactly and the integral by the trapezoidal rule
/// on the demonstration grid.
Mat monodromy_from_integral(const AffineBasis& basis, const Mat& A, const Mat& B, double T);

struct SimplexCertificate {
  std::vector<int> indices;
  Mat psi;
  double norm = 0.0;
  double spectral_radius = 0.0;
  double frobenius_bound = 0.0;  // ‖Z(T)‖_F ‖Z⁻¹(0)‖₂ ≥ ‖Ψ(T)‖₂
};

struct MonodromyCertificate {
  double T = 0.0;
  std::vector<SimplexCertificate> per_simplex;
  double max_norm = 0.0;
  bool pass = false;  // max_j ‖Ψ_j(T)‖₂ < 1
  double margin = 0.0;  // 1 − max_j ‖Ψ_j(T)‖₂
};

MonodromyCertificate certify(const std::vector<AffineBasis>& bases, double T, int jobs = 1);
MonodromyCertificate certify(const LearnedController& ctrl);
MonodromyCertificate certify(const MultiController& ctrl, int jobs = 1);

/// Smallest candidate T with max_j ‖Ψ_j(T)‖₂ < 1. Candidates beyond the
/// demonstration horizon or not positive are skipped.
std::optional<double> find_T_tilde(const std::vector<AffineBasis>& bases,
                                   const std::vector<double>& candidates);
std::optional<double> find_T_tilde(const MultiController& ctrl,
                                   const std::vector<double>& candidates);

struct ContractionReport {
  double T = 0.0;
  double rate = 0.0;                 // max_j ‖Ψ_j(T)‖₂
  std::vector<double> norms;         // ‖z(pT)‖, p = 0..p_max
  std::vector<double> bounds;        // rate^p ‖z(0)‖ (1 + 1e−3)
  double max_replay_error = 0.0;     // max_p ‖z((p+1)T) − Ψ-map(z(pT))‖
  bool holds = true;
};

/// Simulates ż = Az + Bv under the learned controller from z0 for p_max
/// periods and compares ‖z(pT)‖ with the certified geometric bound. The
/// replay error compares each period's end state with the one-period map of
/// the selected simplex. Violations are reported, not thrown.
ContractionReport contraction_check(const LearnedController& ctrl, const Vec& z0, int p_max);
ContractionReport contraction_check(const MultiController& ctrl, const Vec& z0, int p_max);

}  // namespace lfd
