#include "lfd/plant.h"

#include <cmath>

#include "lfd/errors.h"

namespace lfd {

BrunovskyPair brunovsky_pair(int n) { return brunovsky_pair(n, 1); }

BrunovskyPair brunovsky_pair(int chain_length, int inputs) {
  if (chain_length < 1 || inputs < 1) {
    throw Error(ErrorKind::kInvalidDimension, "brunovsky_pair: dimension must be positive");
  }
  const int n = chain_length * inputs;
  BrunovskyPair pair{Mat::Zero(n, n), Mat::Zero(n, inputs)};
  for (int i = 0; i + inputs < n; ++i) pair.A(i, i + inputs) = 1.0;
  pair.B.bottomRows(inputs) = Mat::Identity(inputs, inputs);
  return pair;
}

namespace {

void require_domain(const PlantModel& plant, const Vec& x) {
  if (x.size() != plant.n) {
    throw Error(ErrorKind::kInvalidDimension,
                plant.name + ": state has dimension " + std::to_string(x.size()));
  }
  if (!plant.contains(x)) {
    throw Error(ErrorKind::kDomain, plant.name + ": state outside the plant domain");
  }
}

void require_linearizable(const PlantModel& plant) {
  if (!plant.feedback_linearizable) {
    throw Error(ErrorKind::kNotFeedbackLinearizable,
                plant.name + " is not feedback linearizable; use the embedding pipeline");
  }
}

}  // namespace

Vec feedback_linearize(const PlantModel& plant, const Vec& x) {
  require_linearizable(plant);
  require_domain(plant, x);
  if (plant.normal_form) return plant.normal_form(x);
  Vec z(plant.n);
  for (int k = 0; k < plant.n; ++k) z(k) = plant.lie_f_h(k, x);
  return z;
}

Vec drift_term(const PlantModel& plant, const Vec& x) {
  require_linearizable(plant);
  require_domain(plant, x);
  if (plant.drift_term) return plant.drift_term(x);
  return Vec::Constant(1, plant.lie_f_h(plant.n, x));
}

Mat decoupling_matrix(const PlantModel& plant, const Vec& x) {
  require_linearizable(plant);
  require_domain(plant, x);
  if (plant.decoupling) return plant.decoupling(x);
  return Mat::Constant(1, 1, plant.lie_g_lie_f_h(plant.n - 1, x));
}

Vec linearizing_input(const PlantModel& plant, const Vec& x, const Vec& v) {
  const Vec a = drift_term(plant, x);
  const Mat b = decoupling_matrix(plant, x);
  if (v.size() != a.size()) {
    throw Error(ErrorKind::kInvalidDimension, "linearizing_input: input size mismatch");
  }
  if (b.size() == 1) {
    if (std::abs(b(0, 0)) < 1e-9) {
      throw Error(ErrorKind::kSingularDecoupling, plant.name + ": |L_g L_f^{n-1} h| below 1e-9");
    }
    return Vec::Constant(1, (v(0) - a(0)) / b(0, 0));
  }
  Eigen::FullPivLU<Mat> lu(b);
  if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-9) {
    throw Error(ErrorKind::kSingularDecoupling, plant.name + ": decoupling matrix singular");
  }
  return lu.solve(v - a);
}

Vec expert_input(const PlantModel& plant, const ExpertController& expert,
                 const Vec& x) {
  if (expert.coordinates == Coordinates::kState) return expert.kappa(x);
  return linearizing_input(plant, x, expert.kappa(feedback_linearize(plant, x)));
}

ExpertController expert_lqr(const PlantModel& plant, const Mat& Q,
                            const Mat& R) {
  require_linearizable(plant);
  const Mat K = lqr_gain(plant.chain.A, plant.chain.B, Q, R);
  ExpertController expert;
  expert.gain = K;
  expert.coordinates = Coordinates::kNormalForm;
  expert.description = "LQR on the Brunovsky chain, v = -Kz";
  expert.kappa = [K](const Vec& z) -> Vec { return -K * z; };
  return expert;
}

ExpertController expert_lqr(const PlantModel& plant, const Mat& Q, double R) {
  return expert_lqr(plant, Q, Mat::Constant(1, 1, R));
}

BrunovskyPair linearize_at_origin(const PlantModel& plant, double step) {
  const int n = plant.n;
  const int m = plant.m;
  BrunovskyPair lin{Mat::Zero(n, n), Mat::Zero(n, m)};
  const Vec u0 = Vec::Zero(m);
  for (int j = 0; j < n; ++j) {
    Vec dx = Vec::Zero(n);
    dx(j) = step;
    lin.A.col(j) = (plant.rhs(dx, u0) - plant.rhs(-dx, u0)) / (2.0 * step);
  }
  const Vec x0 = Vec::Zero(n);
  for (int j = 0; j < m; ++j) {
    Vec du = Vec::Zero(m);
    du(j) = step;
    lin.B.col(j) = (plant.rhs(x0, du) - plant.rhs(x0, -du)) / (2.0 * step);
  }
  return lin;
}

ExpertController expert_lqr_linearized(const PlantModel& plant, const Mat& Q,
                                       const Mat& R) {
  const BrunovskyPair lin = linearize_at_origin(plant);
  const Mat K = lqr_gain(lin.A, lin.B, Q, R);
  ExpertController expert;
  expert.gain = K;
  expert.coordinates = Coordinates::kState;
  expert.description = "LQR on the Jacobian linearization at the origin, u = -Kx";
  expert.kappa = [K](const Vec& x) -> Vec { return -K * x; };
  return expert;
}

}  // namespace lfd
