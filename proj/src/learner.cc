#include "lfd/learner.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "lfd/errors.h"

namespace lfd {

namespace {

void check_conditioning(const Mat& Z, double t) {
  Eigen::JacobiSVD<Mat> svd(Z);
  const Vec& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin > kAffineIndependenceTolerance * s(0))) {
    throw AffineDependenceError(t, "Z_I(t) is numerically singular (sigma_n/sigma_1 = " +
                                       std::to_string(s(0) > 0 ? smin / s(0) : 0.0) + ")");
  }
}

template <typename T>
T lerp_at(const std::vector<T>& samples, double tau, double dt) {
  const GridPosition pos = grid_position(tau, dt, samples.size());
  if (pos.fraction == 0.0) return samples[pos.index];
  return (1.0 - pos.fraction) * samples[pos.index] + pos.fraction * samples[pos.index + 1];
}

}  // namespace

AffineBasis AffineBasis::build(const DemonstrationSet& set, std::vector<int> indices) {
  if (indices.size() != static_cast<std::size_t>(set.n) + 1) {
    throw Error(ErrorKind::kInvalidArgument, "index set must have n+1 entries");
  }
  for (int i : indices) {
    if (i < 0 || static_cast<std::size_t>(i) >= set.size()) {
      throw Error(ErrorKind::kInvalidArgument, "index " + std::to_string(i) + " out of range");
    }
  }
  const std::size_t N = set.samples();
  AffineBasis basis;
  basis.indices_ = std::move(indices);
  basis.dt_ = set.dt;
  basis.Zs_.resize(N);
  basis.Vs_.resize(N);
  basis.base_z_.resize(N);
  basis.base_v_.resize(N);
  const Demonstration& base = set.demos[static_cast<std::size_t>(basis.indices_[0])];
  const Eigen::Index cols = set.n;
  for (std::size_t k = 0; k < N; ++k) {
    Mat Z(set.n, cols);
    Mat V(set.m, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
      const Demonstration& d = set.demos[static_cast<std::size_t>(basis.indices_[static_cast<std::size_t>(j) + 1])];
      Z.col(j) = d.z[k] - base.z[k];
      V.col(j) = d.v[k] - base.v[k];
    }
    basis.Zs_[k] = std::move(Z);
    basis.Vs_[k] = std::move(V);
    basis.base_z_[k] = base.z[k];
    basis.base_v_[k] = base.v[k];
  }
  basis.factorize();
  return basis;
}

AffineBasis::AffineBasis(std::vector<int> indices, double dt, std::vector<Mat> Zs,
                         std::vector<Mat> Vs, std::vector<Vec> base_z,
                         std::vector<Vec> base_v)
    : indices_(std::move(indices)),
      dt_(dt),
      Zs_(std::move(Zs)),
      Vs_(std::move(Vs)),
      base_z_(std::move(base_z)),
      base_v_(std::move(base_v)) {
  if (Zs_.size() < 2 || Vs_.size() != Zs_.size() || base_z_.size() != Zs_.size() ||
      base_v_.size() != Zs_.size() || !(dt_ > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "affine basis: inconsistent stored samples");
  }
  if (indices_.size() != static_cast<std::size_t>(Zs_.front().rows()) + 1) {
    throw Error(ErrorKind::kInvalidArgument, "affine basis: index set must have n+1 entries");
  }
  factorize();
}

void AffineBasis::factorize() {
  qr_.clear();
  qr_.reserve(Zs_.size());
  trivial_base_ = true;
  for (std::size_t k = 0; k < Zs_.size(); ++k) {
    check_conditioning(Zs_[k], static_cast<double>(k) * dt_);
    qr_.emplace_back(Zs_[k]);
    if (!base_z_[k].isZero(0.0) || !base_v_[k].isZero(0.0)) trivial_base_ = false;
  }
}

Mat AffineBasis::Z(double tau) const { return lerp_at(Zs_, tau, dt_); }
Mat AffineBasis::V(double tau) const { return lerp_at(Vs_, tau, dt_); }
Vec AffineBasis::base_z(double tau) const { return lerp_at(base_z_, tau, dt_); }
Vec AffineBasis::base_v(double tau) const { return lerp_at(base_v_, tau, dt_); }

Vec AffineBasis::zeta(double tau, const Vec& z) const {
  if (z.size() != n()) throw Error(ErrorKind::kInvalidDimension, "zeta: state size mismatch");
  const GridPosition pos = grid_position(tau, dt_, Zs_.size());
  if (pos.fraction == 0.0) {
    return qr_[pos.index].solve(z - base_z_[pos.index]);
  }
  const double a = pos.fraction;
  const Mat Zt = (1.0 - a) * Zs_[pos.index] + a * Zs_[pos.index + 1];
  const Vec zb = (1.0 - a) * base_z_[pos.index] + a * base_z_[pos.index + 1];
  Eigen::ColPivHouseholderQR<Mat> qr(Zt);
  const auto& R = qr.matrixR();
  const double rmax = std::abs(R(0, 0));
  const double rmin = std::abs(R(n() - 1, n() - 1));
  if (!(rmin * kMaxSolveCondition > rmax)) {
    throw AffineDependenceError(tau, "interpolated Z(tau) is singular to working precision");
  }
  return qr.solve(z - zb);
}

Vec AffineBasis::input(double tau, const Vec& zeta) const {
  const GridPosition pos = grid_position(tau, dt_, Zs_.size());
  if (pos.fraction == 0.0) return base_v_[pos.index] + Vs_[pos.index] * zeta;
  return base_v(tau) + V(tau) * zeta;
}

Vec AffineBasis::reconstruct(const Vec& zeta, double tau) const {
  const GridPosition pos = grid_position(tau, dt_, Zs_.size());
  if (pos.fraction == 0.0) return base_z_[pos.index] + Zs_[pos.index] * zeta;
  return base_z(tau) + Z(tau) * zeta;
}

IntervalTime split_interval(Instant t, double T) {
  if (!(T > 0.0)) throw Error(ErrorKind::kInvalidArgument, "interval length must be positive");
  if (t.t < 0.0) throw Error(ErrorKind::kRange, "controller evaluated at negative time");
  const double s = t.t / T;
  const double nearest = std::round(s);
  if (std::abs(s - nearest) <= 1e-9 * std::max(1.0, s)) {
    const long p = static_cast<long>(nearest);
    if (t.left_limit && p > 0) return {p - 1, T};
    return {p, 0.0};
  }
  const long p = static_cast<long>(std::floor(s));
  const double tau = std::clamp(t.t - static_cast<double>(p) * T, 0.0, T);
  return {p, tau};
}

LearnedController::LearnedController(AffineBasis basis, double T, FeedbackMode mode)
    : basis_(std::move(basis)), T_(T), mode_(mode) {
  if (!(T > 0.0) || T > basis_.horizon() * (1.0 + 1e-12)) {
    throw Error(ErrorKind::kInvalidArgument,
                "controller horizon T must lie in (0, demonstration length]");
  }
}

Vec zeta(const AffineBasis& basis, double tau, const Vec& z) { return basis.zeta(tau, z); }

Vec control_open_loop(const LearnedController& ctrl, Instant t, const Vec& z_pT) {
  const IntervalTime it = split_interval(t, ctrl.T());
  const Vec coefficients = ctrl.basis().zeta(0.0, z_pT);
  return ctrl.basis().input(it.tau, coefficients);
}

Vec control_closed_loop(const LearnedController& ctrl, Instant t, const Vec& z) {
  const IntervalTime it = split_interval(t, ctrl.T());
  return ctrl.basis().input(it.tau, ctrl.basis().zeta(it.tau, z));
}

Vec reconstruct_trajectory(const AffineBasis& basis, const Vec& zeta, double tau) {
  return basis.reconstruct(zeta, tau);
}

StatePolicy make_policy(const LearnedController& controller) {
  auto shared = std::make_shared<const LearnedController>(controller);
  if (shared->mode() == FeedbackMode::kClosedLoop) {
    return [shared](Instant t, const Vec& z) { return control_closed_loop(*shared, t, z); };
  }
  struct Anchor {
    long p = -1;
    double time = -1.0;
    Vec coefficients;
  };
  auto anchor = std::make_shared<Anchor>();
  return [shared, anchor](Instant t, const Vec& z) {
    const LearnedController& ctrl = *shared;
    const IntervalTime it = split_interval(t, ctrl.T());
    // Re-anchoring at the same instant lets the accepted state replace a
    // provisional one.
    if (it.p != anchor->p || (it.tau == 0.0 && t.t == anchor->time)) {
      anchor->p = it.p;
      anchor->time = t.t;
      anchor->coefficients = ctrl.basis().zeta(0.0, z);
    }
    return ctrl.basis().input(it.tau, anchor->coefficients);
  };
}

}  // namespace lfd
