#include "lfd/embed.h"

#include <cmath>
#include <string>
#include <utility>

#include "lfd/errors.h"

namespace lfd {

Mat a_xi(const Vec& w) {
  const Eigen::Index k = w.size();
  Mat A = Mat::Zero(k, k);
  for (Eigen::Index i = 0; i + 1 < k; ++i) A(i, i + 1) = 1.0;
  if (k > 0) A.row(k - 1) = -w.transpose();
  return A;
}

EmbeddingConfig::EmbeddingConfig(PlantModel plant, Vec w) : plant_(std::move(plant)), w_(std::move(w)) {
  if (plant_.m != 1 || !plant_.lie_f_h || !plant_.lie_g_lie_f_h) {
    throw Error(ErrorKind::kInvalidArgument, "embedding needs a single-input plant with Lie derivatives");
  }
  if (plant_.n < 2 || w_.size() != plant_.n - 1) {
    throw Error(ErrorKind::kInvalidDimension, "embedding weights must have n-1 entries");
  }
  if (!hurwitz(a_xi(w_))) {
    throw Error(ErrorKind::kInvalidArgument, "embedding weights: A_xi is not Hurwitz");
  }
}

namespace {

void require_domain(const EmbeddingConfig& cfg, const Vec& x) {
  if (x.size() != cfg.n()) throw Error(ErrorKind::kInvalidDimension, "embedding: state size mismatch");
  if (!cfg.plant().contains(x)) throw Error(ErrorKind::kDomain, "embedding: state outside the plant domain");
}

void require_xi(const EmbeddingConfig& cfg, const Vec& xi) {
  if (xi.size() != cfg.n() - 1) throw Error(ErrorKind::kInvalidDimension, "embedding: xi must have n-1 entries");
}

// (h, L_f h, ..., L_f^{n−1} h).
Vec output_derivatives(const EmbeddingConfig& cfg, const Vec& x) {
  Vec out(cfg.n());
  for (int k = 0; k < cfg.n(); ++k) out(k) = cfg.plant().lie_f_h(k, x);
  return out;
}

}  // namespace

Vec phi_z(const EmbeddingConfig& cfg, const Vec& x, const Vec& xi) {
  require_domain(cfg, x);
  require_xi(cfg, xi);
  const int n = cfg.n();
  Vec z = output_derivatives(cfg, x);
  z.head(n - 1) += xi;
  z(n - 1) -= cfg.w().dot(xi);
  return z;
}

std::pair<Vec, Vec> phi(const EmbeddingConfig& cfg, const Vec& x, const Vec& xi) {
  return {phi_z(cfg, x, xi), xi};
}

double r_of_x(const EmbeddingConfig& cfg, const Vec& x) {
  const int n = cfg.n();
  double r = cfg.plant().lie_g_lie_f_h(n - 1, x);
  for (int j = 1; j <= n - 1; ++j) r += cfg.w()(j - 1) * cfg.plant().lie_g_lie_f_h(j - 1, x);
  return r;
}

double s_of_x_xi(const EmbeddingConfig& cfg, const Vec& x, const Vec& xi) {
  require_xi(cfg, xi);
  const int n = cfg.n();
  const Vec& w = cfg.w();
  double s = -cfg.plant().lie_f_h(n, x);
  for (int j = 1; j <= n - 2; ++j) s += w(j - 1) * xi(j);
  s -= w(n - 2) * w.dot(xi);
  return s;
}

Vec aux_rhs(const EmbeddingConfig& cfg, const Vec& x, const Vec& xi, double u) {
  require_xi(cfg, xi);
  const int k = cfg.n() - 1;
  Vec out(k);
  for (int i = 0; i + 1 < k; ++i) out(i) = xi(i + 1);
  out(k - 1) = -cfg.w().dot(xi);
  for (int i = 0; i < k; ++i) out(i) -= cfg.plant().lie_g_lie_f_h(i, x) * u;
  return out;
}

double dynamic_feedback(const EmbeddingConfig& cfg, const Vec& x, const Vec& xi, double v) {
  const double r = r_of_x(cfg, x);
  if (!(std::abs(r) > kEmbeddingSingularity)) {
    throw Error(ErrorKind::kSingularEmbedding, "dynamic feedback: |r(x)| <= 1e-6");
  }
  return (s_of_x_xi(cfg, x, xi) + v) / r;
}

EmbeddedDemonstrationSet transform_demos(const EmbeddingConfig& cfg, const RawDemonstrationSet& raw) {
  return transform_demos(cfg, raw, Vec::Zero(cfg.n() - 1));
}

EmbeddedDemonstrationSet transform_demos(const EmbeddingConfig& cfg,
                                         const RawDemonstrationSet& raw,
                                         const Vec& xi0) {
  require_xi(cfg, xi0);
  const PlantModel& plant = cfg.plant();

  // Pre-flight: r must stay away from zero on every recording.
  for (std::size_t i = 0; i < raw.demos.size(); ++i) {
    const Trajectory& d = raw.demos[i];
    for (std::size_t k = 0; k < d.size(); ++k) {
      if (!(std::abs(r_of_x(cfg, d.states[k])) > kEmbeddingSingularity)) {
        throw Error(ErrorKind::kSingularEmbedding,
                    "demonstration " + std::to_string(i) + ": |r(x)| <= 1e-6 at t = " +
                        std::to_string(d.times[k]));
      }
    }
  }

  EmbeddedDemonstrationSet out;
  out.n = cfg.n();
  out.T = raw.T;
  out.dt = raw.dt;
  out.w = cfg.w();
  out.demos.reserve(raw.demos.size());
  for (std::size_t i = 0; i < raw.demos.size(); ++i) {
    const Trajectory& d = raw.demos[i];
    if (d.inputs.size() != d.size()) {
      throw Error(ErrorKind::kInvalidArgument, "demonstration " + std::to_string(i) + " has no inputs");
    }
    EmbeddedDemonstration e;
    e.dt = raw.dt;
    e.xi.reserve(d.size());
    e.xi.push_back(xi0);
    for (std::size_t k = 0; k + 1 < d.size(); ++k) {
      const double h = d.times[k + 1] - d.times[k];
      const Vec& x0 = d.states[k];
      const Vec& x1 = d.states[k + 1];
      const double u0 = d.inputs[k](0);
      const double u1 = d.inputs[k + 1](0);
      const Vec dx0 = plant.rhs(x0, d.inputs[k]);
      const Vec dx1 = plant.rhs(x1, d.inputs[k + 1]);
      // Cubic Hermite midpoint of x and linear midpoint of u.
      const Vec xm = 0.5 * (x0 + x1) + 0.125 * h * (dx0 - dx1);
      const double um = 0.5 * (u0 + u1);
      const Vec& xi = e.xi.back();
      const Vec k1 = aux_rhs(cfg, x0, xi, u0);
      const Vec k2 = aux_rhs(cfg, xm, xi + 0.5 * h * k1, um);
      const Vec k3 = aux_rhs(cfg, xm, xi + 0.5 * h * k2, um);
      const Vec k4 = aux_rhs(cfg, x1, xi + h * k3, u1);
      e.xi.push_back(xi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    }
    e.z.reserve(d.size());
    e.v.reserve(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) {
      const Vec& x = d.states[k];
      e.z.push_back(phi_z(cfg, x, e.xi[k]));
      e.v.push_back(r_of_x(cfg, x) * d.inputs[k](0) - s_of_x_xi(cfg, x, e.xi[k]));
    }
    out.demos.push_back(std::move(e));
  }
  return out;
}

DemonstrationSet to_demonstration_set(const EmbeddedDemonstrationSet& set) {
  DemonstrationSet out;
  out.n = set.n;
  out.m = 1;
  out.T = set.T;
  out.dt = set.dt;
  out.includes_trivial = !set.demos.empty();
  for (const EmbeddedDemonstration& e : set.demos) {
    Demonstration d;
    d.dt = e.dt;
    d.z = e.z;
    d.v.reserve(e.v.size());
    for (double v : e.v) d.v.push_back(Vec::Constant(1, v));
    for (std::size_t k = 0; k < d.z.size() && out.demos.empty(); ++k) {
      if (!d.z[k].isZero(0.0) || d.v[k](0) != 0.0) out.includes_trivial = false;
    }
    out.demos.push_back(std::move(d));
  }
  out.check_invariants();
  return out;
}

Vec phi_inverse(const EmbeddingConfig& cfg, const Vec& z, const Vec& xi, const Vec& guess) {
  require_xi(cfg, xi);
  const int n = cfg.n();
  // Φ_z(x, ξ) = z  ⇔  (h, …, L_f^{n−1}h)(x) = target.
  Vec target = z;
  target.head(n - 1) -= xi;
  target(n - 1) += cfg.w().dot(xi);
  const double scale = std::max(1.0, target.norm());

  Vec x = guess;
  Vec residual = output_derivatives(cfg, x) - target;
  for (int iter = 0; iter < 100; ++iter) {
    if (residual.norm() <= 1e-13 * scale) return x;
    Mat J(n, n);
    for (int j = 0; j < n; ++j) {
      const double step = 1e-7 * std::max(1.0, std::abs(x(j)));
      Vec xp = x, xm = x;
      xp(j) += step;
      xm(j) -= step;
      J.col(j) = (output_derivatives(cfg, xp) - output_derivatives(cfg, xm)) / (2.0 * step);
    }
    const Vec dx = J.fullPivLu().solve(-residual);
    double alpha = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 30; ++halving) {
      const Vec trial = x + alpha * dx;
      if (cfg.plant().contains(trial)) {
        const Vec trial_residual = output_derivatives(cfg, trial) - target;
        if (trial_residual.norm() < residual.norm()) {
          x = trial;
          residual = trial_residual;
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
  }
  if (residual.norm() <= 1e-9 * scale) return x;
  throw Error(ErrorKind::kNumerical, "phi_inverse: Newton iteration did not converge");
}

Mat a_w_numeric(const EmbeddingConfig& cfg, double eps) {
  const int n = cfg.n();
  const int k = n - 1;
  const Vec z0 = Vec::Zero(n);
  auto drift = [&](const Vec& xi) {
    const Vec x = phi_inverse(cfg, z0, xi, Vec::Zero(n));
    const double u = s_of_x_xi(cfg, x, xi) / r_of_x(cfg, x);
    Vec out(k);
    for (int i = 0; i < k; ++i) out(i) = -cfg.plant().lie_g_lie_f_h(i, x) * u;
    return out;
  };
  Mat A(k, k);
  for (int j = 0; j < k; ++j) {
    Vec xp = Vec::Zero(k), xm = Vec::Zero(k);
    xp(j) = eps;
    xm(j) = -eps;
    A.col(j) = (drift(xp) - drift(xm)) / (2.0 * eps);
  }
  return A;
}

Trajectory simulate_embedded_closed_loop(const EmbeddingConfig& cfg, const StatePolicy& policy,
                                         const Vec& x0, const Vec& xi0, double duration,
                                         const SimulationOptions& options) {
  require_domain(cfg, x0);
  require_xi(cfg, xi0);
  const int n = cfg.n();
  const PlantModel& plant = cfg.plant();
  auto split = [n](const Vec& y) { return std::make_pair(Vec(y.head(n)), Vec(y.tail(n - 1))); };
  auto dynamics = [&](const Vec& y, const Vec& u) {
    const auto [x, xi] = split(y);
    Vec dy(2 * n - 1);
    dy.head(n) = plant.rhs(x, u);
    dy.tail(n - 1) = aux_rhs(cfg, x, xi, u(0));
    return dy;
  };
  auto control = [&](Instant t, const Vec& y) {
    const auto [x, xi] = split(y);
    const Vec v = policy(t, phi_z(cfg, x, xi));
    return Vec::Constant(1, dynamic_feedback(cfg, x, xi, v(0)));
  };
  auto in_domain = [&](const Vec& y) {
    const Vec x = y.head(n);
    return plant.contains(x) && std::abs(r_of_x(cfg, x)) > kEmbeddingSingularity;
  };
  Vec y0(2 * n - 1);
  y0 << x0, xi0;
  return simulate_feedback(dynamics, control, in_domain, y0, duration, options);
}

}  // namespace lfd
