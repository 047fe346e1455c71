#include "lfd/certify.h"

#include <algorithm>
#include <cmath>
#include <functional>

#include "lfd/errors.h"
#include "lfd/plant.h"
#include "lfd/sim.h"

namespace lfd {

Mat monodromy_from_data(const AffineBasis& basis, double T) {
  const Mat Z0 = basis.Z(0.0);
  const Eigen::FullPivLU<Mat> lu(Z0);
  if (!lu.isInvertible()) throw Error(ErrorKind::kAffineDependence, "monodromy: Z(0) is singular");
  // Z(0)Z⁻¹(0) is the identity by definition; avoid the rounding of the product.
  if (T == 0.0) return Mat::Identity(Z0.rows(), Z0.cols());
  return basis.Z(T) * lu.inverse();
}

Mat monodromy_from_integral(const AffineBasis& basis, const Mat& A, const Mat& B, double T) {
  if (T < 0.0 || T > basis.horizon() * (1.0 + 1e-12)) {
    throw Error(ErrorKind::kRange, "monodromy: T outside the demonstration horizon");
  }
  const Mat Z0inv = basis.Z(0.0).fullPivLu().inverse();
  Mat psi = nilpotent_exp(A, T);
  if (T == 0.0) return psi;
  std::vector<double> nodes;
  const double dt = basis.dt();
  for (std::size_t k = 0; static_cast<double>(k) * dt < T - 1e-9 * dt; ++k) {
    nodes.push_back(static_cast<double>(k) * dt);
  }
  nodes.push_back(T);
  auto integrand = [&](double tau) {
    return Mat(nilpotent_exp(A, T - tau) * B * basis.V(std::min(tau, basis.horizon())) * Z0inv);
  };
  Mat previous = integrand(nodes.front());
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    const Mat current = integrand(nodes[k]);
    psi += 0.5 * (nodes[k] - nodes[k - 1]) * (previous + current);
    previous = current;
  }
  return psi;
}

namespace {

SimplexCertificate certify_one(const AffineBasis& basis, double T) {
  SimplexCertificate c;
  c.indices = basis.indices();
  c.psi = monodromy_from_data(basis, T);
  c.norm = spectral_norm(c.psi);
  c.spectral_radius = spectral_radius(c.psi);
  c.frobenius_bound = basis.Z(T).norm() * spectral_norm(basis.Z(0.0).fullPivLu().inverse());
  return c;
}

}  // namespace

MonodromyCertificate certify(const std::vector<AffineBasis>& bases, double T, int jobs) {
  if (bases.empty()) throw Error(ErrorKind::kInvalidArgument, "certify: no bases");
  MonodromyCertificate cert;
  cert.T = T;
  cert.per_simplex.resize(bases.size());
  parallel_for(bases.size(), jobs, [&](std::size_t j) { cert.per_simplex[j] = certify_one(bases[j], T); });
  for (const SimplexCertificate& c : cert.per_simplex) cert.max_norm = std::max(cert.max_norm, c.norm);
  cert.pass = cert.max_norm < 1.0;
  cert.margin = 1.0 - cert.max_norm;
  return cert;
}

MonodromyCertificate certify(const LearnedController& ctrl) {
  return certify(std::vector<AffineBasis>{ctrl.basis()}, ctrl.T());
}

MonodromyCertificate certify(const MultiController& ctrl, int jobs) {
  return certify(ctrl.bases(), ctrl.T(), jobs);
}

std::optional<double> find_T_tilde(const std::vector<AffineBasis>& bases,
                                   const std::vector<double>& candidates) {
  std::vector<double> sorted = candidates;
  std::sort(sorted.begin(), sorted.end());
  for (double T : sorted) {
    if (!(T > 0.0) || T > bases.front().horizon() * (1.0 + 1e-12)) continue;
    if (certify(bases, T).pass) return T;
  }
  return std::nullopt;
}

std::optional<double> find_T_tilde(const MultiController& ctrl, const std::vector<double>& candidates) {
  return find_T_tilde(ctrl.bases(), candidates);
}

namespace {

// `one_period(z_pT)` returns the simplex map's prediction of z((p+1)T).
ContractionReport run_contraction(const StatePolicy& policy, double T, double dt, double rate,
                                  const Vec& z0, int p_max,
                                  const std::function<Vec(const Vec&)>& one_period) {
  if (p_max < 1) throw Error(ErrorKind::kInvalidArgument, "contraction check needs p_max >= 1");
  const int n = static_cast<int>(z0.size());
  const int m = static_cast<int>(policy(Instant(0.0), z0).size());
  const BrunovskyPair ab = brunovsky_pair(n / m, m);
  auto dynamics = [&ab](const Vec& z, const Vec& v) { return Vec(ab.A * z + ab.B * v); };
  SimulationOptions options;
  options.dt = dt;
  const Trajectory traj = simulate_feedback(dynamics, policy, nullptr, z0,
                                            T * static_cast<double>(p_max), options);
  ContractionReport report;
  report.T = T;
  report.rate = rate;
  const double steps_per_period = T / dt;
  Vec previous;
  for (int p = 0; p <= p_max; ++p) {
    const auto k = static_cast<std::size_t>(std::llround(steps_per_period * p));
    const Vec& z = traj.states[std::min(k, traj.size() - 1)];
    report.norms.push_back(z.norm());
    report.bounds.push_back(std::pow(rate, p) * z0.norm() * (1.0 + 1e-3));
    if (report.norms.back() > report.bounds.back()) report.holds = false;
    if (p > 0) report.max_replay_error = std::max(report.max_replay_error, (z - one_period(previous)).norm());
    previous = z;
  }
  return report;
}

}  // namespace

ContractionReport contraction_check(const LearnedController& ctrl, const Vec& z0, int p_max) {
  const MonodromyCertificate cert = certify(ctrl);
  const AffineBasis& basis = ctrl.basis();
  return run_contraction(make_policy(ctrl), ctrl.T(), basis.dt(), cert.max_norm, z0, p_max,
                         [&](const Vec& z) { return basis.reconstruct(basis.zeta(0.0, z), ctrl.T()); });
}

ContractionReport contraction_check(const MultiController& ctrl, const Vec& z0, int p_max) {
  const MonodromyCertificate cert = certify(ctrl);
  return run_contraction(make_policy(ctrl), ctrl.T(), ctrl.bases().front().dt(), cert.max_norm, z0,
                         p_max, [&](const Vec& z) {
                           const AffineBasis& basis = ctrl.bases()[select_index_set(ctrl, z).simplex];
                           return basis.reconstruct(basis.zeta(0.0, z), ctrl.T());
                         });
}

}  // namespace lfd
