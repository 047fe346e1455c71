#include "lfd/demos.h"

#include <cmath>
#include <limits>
#include <string>

#include "lfd/errors.h"

namespace lfd {

GridPosition grid_position(double t, double dt, std::size_t samples) {
  if (samples == 0) throw Error(ErrorKind::kRange, "empty grid");
  const double last = static_cast<double>(samples - 1);
  const double s = t / dt;
  const double tol = 1e-9;
  if (!(s >= -tol) || !(s <= last + tol)) {
    throw Error(ErrorKind::kRange, "time " + std::to_string(t) + " outside the demonstration grid");
  }
  if (s <= 0.0) return {0, 0.0};
  if (s >= last) return {samples - 1, 0.0};
  double k = std::floor(s);
  double fraction = s - k;
  if (fraction < tol) {
    fraction = 0.0;
  } else if (fraction > 1.0 - tol) {
    k += 1.0;
    fraction = 0.0;
  }
  return {static_cast<std::size_t>(k), fraction};
}

void DemonstrationSet::check_invariants() const {
  if (n < 1 || m < 1) throw Error(ErrorKind::kInvalidArgument, "demonstration set: bad dimensions");
  if (!(dt > 0.0) || !(T > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "demonstration set: T and dt must be positive");
  }
  if (demos.size() < static_cast<std::size_t>(n) + 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "demonstration set: need at least n+1 = " + std::to_string(n + 1) + " demonstrations");
  }
  const std::size_t N = samples();
  if (std::abs(static_cast<double>(N - 1) * dt - T) > 1e-9 * std::max(1.0, T)) {
    throw Error(ErrorKind::kInvalidArgument, "demonstration set: grid does not cover [0, T]");
  }
  for (std::size_t i = 0; i < demos.size(); ++i) {
    const Demonstration& d = demos[i];
    if (d.z.size() != N || d.v.size() != N || d.dt != dt) {
      throw Error(ErrorKind::kInvalidArgument,
                  "demonstration " + std::to_string(i) + " is not on the common grid");
    }
    for (std::size_t k = 0; k < N; ++k) {
      if (d.z[k].size() != n || d.v[k].size() != m || !d.z[k].allFinite() || !d.v[k].allFinite()) {
        throw Error(ErrorKind::kInvalidArgument,
                    "demonstration " + std::to_string(i) + " has a malformed sample at index " +
                        std::to_string(k));
      }
    }
  }
  if (includes_trivial) {
    for (std::size_t k = 0; k < N; ++k) {
      if (!demos[0].z[k].isZero(0.0) || !demos[0].v[k].isZero(0.0)) {
        throw Error(ErrorKind::kInvalidArgument, "demonstration 0 must be the trivial solution");
      }
    }
  }
}

RawDemonstrationSet record_expert(const PlantModel& plant,
                                  const ExpertController& expert,
                                  const std::vector<Vec>& initial_states,
                                  double T, double dt, int jobs) {
  RawDemonstrationSet raw;
  raw.T = T;
  raw.dt = dt;
  raw.demos.resize(initial_states.size() + 1);

  SimulationOptions options;
  options.dt = dt;
  auto policy = [&plant, &expert](Instant, const Vec& x) { return expert_input(plant, expert, x); };
  parallel_for(initial_states.size(), jobs, [&](std::size_t i) {
    try {
      raw.demos[i + 1] = simulate_closed_loop(plant, policy, initial_states[i], T, options);
    } catch (const DivergenceError& e) {
      std::string ic;
      for (Eigen::Index j = 0; j < initial_states[i].size(); ++j) {
        ic += (j ? "," : "") + std::to_string(initial_states[i](j));
      }
      throw DivergenceError(e.time(), "expert run from x0=(" + ic + ") diverged: " + e.what());
    }
  });

  // The trivial solution shares the grid of the recorded runs.
  const Trajectory& shape = raw.demos.size() > 1
                                ? raw.demos[1]
                                : simulate_closed_loop(plant, policy, Vec::Zero(plant.n), T, options);
  Trajectory trivial;
  trivial.times = shape.times;
  trivial.states.assign(shape.size(), Vec::Zero(plant.n));
  trivial.inputs.assign(shape.size(), Vec::Zero(plant.m));
  raw.demos[0] = std::move(trivial);
  return raw;
}

DemonstrationSet to_zv(const PlantModel& plant, const RawDemonstrationSet& raw) {
  if (!plant.feedback_linearizable) {
    throw Error(ErrorKind::kNotFeedbackLinearizable,
                plant.name + " has no relative-degree-n output; transform its demonstrations with the embedding");
  }
  DemonstrationSet set;
  set.n = plant.n;
  set.m = plant.m;
  set.T = raw.T;
  set.dt = raw.dt;
  set.demos.resize(raw.demos.size());
  for (std::size_t i = 0; i < raw.demos.size(); ++i) {
    const Trajectory& traj = raw.demos[i];
    Demonstration& d = set.demos[i];
    d.dt = raw.dt;
    d.z.resize(traj.size());
    d.v.resize(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
      try {
        const Vec& x = traj.states[k];
        d.z[k] = feedback_linearize(plant, x);
        d.v[k] = drift_term(plant, x) + decoupling_matrix(plant, x) * traj.inputs[k];
      } catch (const Error& e) {
        throw Error(e.kind(), "demonstration " + std::to_string(i) + ", sample " + std::to_string(k) +
                                  ": " + e.what());
      }
    }
  }
  set.includes_trivial = true;
  for (std::size_t k = 0; k < set.samples() && !set.demos.empty(); ++k) {
    if (!set.demos[0].z[k].isZero(0.0) || !set.demos[0].v[k].isZero(0.0)) {
      set.includes_trivial = false;
      break;
    }
  }
  return set;
}

namespace {

Mat difference_matrix(const DemonstrationSet& set, const std::vector<int>& indices,
                      std::size_t k) {
  const Vec& base = set.demos[static_cast<std::size_t>(indices[0])].z[k];
  Mat Z(set.n, static_cast<Eigen::Index>(indices.size()) - 1);
  for (std::size_t j = 1; j < indices.size(); ++j) {
    Z.col(static_cast<Eigen::Index>(j) - 1) = set.demos[static_cast<std::size_t>(indices[j])].z[k] - base;
  }
  return Z;
}

}  // namespace

AffineIndependenceReport validate_affine_independence(
    const DemonstrationSet& set, const std::vector<int>& indices) {
  if (indices.size() != static_cast<std::size_t>(set.n) + 1) {
    throw Error(ErrorKind::kInvalidArgument, "index set must have n+1 entries");
  }
  for (int i : indices) {
    if (i < 0 || static_cast<std::size_t>(i) >= set.size()) {
      throw Error(ErrorKind::kInvalidArgument, "index " + std::to_string(i) + " out of range");
    }
  }
  AffineIndependenceReport report;
  report.min_sigma = std::numeric_limits<double>::infinity();
  report.min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < set.samples(); ++k) {
    const double t = static_cast<double>(k) * set.dt;
    Eigen::JacobiSVD<Mat> svd(difference_matrix(set, indices, k));
    const Vec& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    const double smax = s(0);
    const double ratio = smax > 0.0 ? smin / smax : 0.0;
    const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (smin < report.min_sigma) {
      report.min_sigma = smin;
      report.min_sigma_time = t;
    }
    if (ratio < report.min_ratio) {
      report.min_ratio = ratio;
      report.min_ratio_time = t;
    }
    if (cond > report.max_condition) {
      report.max_condition = cond;
      report.max_condition_time = t;
    }
    if (k == 0) report.condition_at_zero = cond;
  }
  report.pass = report.min_ratio > kAffineIndependenceTolerance;
  return report;
}

std::pair<Vec, Vec> eval_demo(const Demonstration& demo, double t) {
  const GridPosition pos = grid_position(t, demo.dt, demo.samples());
  if (pos.fraction == 0.0) return {demo.z[pos.index], demo.v[pos.index]};
  const double a = pos.fraction;
  return {(1.0 - a) * demo.z[pos.index] + a * demo.z[pos.index + 1],
          (1.0 - a) * demo.v[pos.index] + a * demo.v[pos.index + 1]};
}

}  // namespace lfd
