#include "lfd/plant.h"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "lfd/errors.h"
#include "lfd/sim.h"
#include "lfd/systems.h"
#include "test_fixtures.h"

namespace lfd {
namespace {

TEST(BrunovskyPairTest, ShiftStructure) {
  const BrunovskyPair p2 = brunovsky_pair(2);
  EXPECT_EQ(p2.A, (Mat(2, 2) << 0, 1, 0, 0).finished());
  EXPECT_EQ(p2.B, (Mat(2, 1) << 0, 1).finished());
  const BrunovskyPair p1 = brunovsky_pair(1);
  EXPECT_EQ(p1.A(0, 0), 0.0);
  EXPECT_EQ(p1.B(0, 0), 1.0);
  const BrunovskyPair p3 = brunovsky_pair(3);
  Mat expected = Mat::Zero(3, 3);
  expected(0, 1) = expected(1, 2) = 1.0;
  EXPECT_EQ(p3.A, expected);
  EXPECT_THROW(brunovsky_pair(0), Error);
}

TEST(BrunovskyPairTest, MultiInputStacking) {
  const BrunovskyPair p = brunovsky_pair(3, 3);
  EXPECT_EQ(p.A.rows(), 9);
  EXPECT_EQ(p.A(0, 3), 1.0);
  EXPECT_EQ(p.A(5, 8), 1.0);
  EXPECT_EQ(p.A.sum(), 6.0);
  EXPECT_EQ(p.B.bottomRows(3), Mat::Identity(3, 3));
  EXPECT_EQ(p.B.topRows(6).norm(), 0.0);
}

TEST(FeedbackLinearizeTest, ChainIsIdentity) {
  const PlantModel p = chain_plant(3);
  const Vec x = (Vec(3) << 0.3, -1.2, 2.5).finished();
  EXPECT_EQ(feedback_linearize(p, x), x);
  EXPECT_EQ(feedback_linearize(p, Vec::Zero(3)), Vec::Zero(3));
}

TEST(FeedbackLinearizeTest, FlatQuadrotorIsIdentity) {
  const PlantModel p = flat_quad_3d();
  Vec x(9);
  x << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  EXPECT_EQ(feedback_linearize(p, x), x);
}

TEST(FeedbackLinearizeTest, RejectsBallAndBeam) {
  const PlantModel p = ball_beam_plant();
  try {
    feedback_linearize(p, Vec::Zero(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotFeedbackLinearizable);
  }
}

TEST(LinearizingInputTest, ChainAndScaledInput) {
  EXPECT_DOUBLE_EQ(linearizing_input(chain_plant(2), Vec::Ones(2), Vec::Constant(1, 0.7))(0), 0.7);
  // g = (0, 2): a = 0, b = 2, so v = 4 needs u = 2.
  const PlantModel scaled = chain_plant(2, 2.0);
  EXPECT_DOUBLE_EQ(linearizing_input(scaled, Vec::Zero(2), Vec::Constant(1, 4.0))(0), 2.0);
  EXPECT_DOUBLE_EQ(linearizing_input(scaled, Vec::Zero(2), Vec::Zero(1))(0), 0.0);
}

TEST(LinearizingInputTest, SingularDecoupling) {
  const PlantModel degenerate = chain_plant(2, 1e-12);
  try {
    linearizing_input(degenerate, Vec::Zero(2), Vec::Ones(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSingularDecoupling);
  }
}

TEST(ExpertLqrTest, GainsAndStability) {
  const ExpertController e2 = expert_lqr(chain_plant(2), Mat::Identity(2, 2), 1.0);
  EXPECT_NEAR(e2.gain(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(e2.gain(0, 1), std::sqrt(3.0), 1e-12);
  const ExpertController e1 = expert_lqr(chain_plant(1), Mat::Identity(1, 1), 1.0);
  EXPECT_NEAR(e1.gain(0, 0), 1.0, 1e-12);
  EXPECT_EQ(e2.kappa(Vec::Zero(2)), Vec::Zero(1));
  const BrunovskyPair ab = brunovsky_pair(2);
  const Eigen::EigenSolver<Mat> es(ab.A - ab.B * e2.gain);
  EXPECT_LT(es.eigenvalues().real().maxCoeff(), 0.0);
}

// Directional derivative of φ along the field F by central differences.
double lie(const std::function<double(const Vec&)>& phi, const Vec& F, const Vec& x, double eps) {
  return (phi(x + eps * F) - phi(x - eps * F)) / (2.0 * eps);
}

void check_lie_derivatives(const PlantModel& p, std::mt19937& rng, double scale) {
  for (int trial = 0; trial < 100; ++trial) {
    Vec x = testing::random_vec(rng, p.n, -scale, scale);
    if (!p.contains(x)) continue;
    const Vec f = p.f(x);
    const Vec g = p.g(x).col(0);
    for (int k = 0; k < p.n; ++k) {
      auto phi = [&p, k](const Vec& y) { return p.lie_f_h(k, y); };
      const double tol = 1e-6 * std::max(1.0, std::abs(p.lie_f_h(k + 1, x)));
      EXPECT_NEAR(lie(phi, f, x, 1e-5), p.lie_f_h(k + 1, x), tol) << p.name << " k=" << k;
      EXPECT_NEAR(lie(phi, g, x, 1e-5), p.lie_g_lie_f_h(k, x), 1e-6 * std::max(1.0, std::abs(p.lie_g_lie_f_h(k, x))))
          << p.name << " k=" << k;
    }
    EXPECT_NEAR(p.lie_f_h(0, x), p.h(x), 0.0);
  }
}

TEST(LieDerivativeTest, PresetsMatchFiniteDifferences) {
  std::mt19937 rng(11);
  check_lie_derivatives(chain_plant(4, 1.7), rng, 2.0);
  check_lie_derivatives(flat_quad_axis(), rng, 2.0);
  check_lie_derivatives(ball_beam_plant(), rng, 1.2);
}

TEST(LieDerivativeTest, ChainHasRelativeDegreeN) {
  const PlantModel p = chain_plant(4);
  std::mt19937 rng(5);
  const Vec x = testing::random_vec(rng, 4);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(p.lie_g_lie_f_h(k, x), 0.0);
  EXPECT_NE(p.lie_g_lie_f_h(3, x), 0.0);
}

TEST(InverseNormalFormTest, ChainRoundTrip) {
  const PlantModel p = chain_plant(3);
  std::mt19937 rng(2);
  const Vec x = testing::random_vec(rng, 3);
  EXPECT_LT((p.inverse_normal_form(feedback_linearize(p, x)) - x).norm(), 1e-9);
}

TEST(ExpertClosedLoopTest, PresetsSettleFromUnitBall) {
  std::mt19937 rng(9);
  for (const PlantModel& p : {chain_plant(2), chain_plant(3), flat_quad_axis(), flat_quad_3d()}) {
    const ExpertController e = default_expert(p);
    const StatePolicy policy = [&](Instant, const Vec& x) { return expert_input(p, e, x); };
    for (int trial = 0; trial < 5; ++trial) {
      Vec x0 = testing::random_vec(rng, p.n);
      x0 /= std::max(1.0, x0.norm());
      const Trajectory tr = simulate_closed_loop(p, policy, x0, 25.0);
      EXPECT_LT(tr.states.back().norm(), 1e-3) << p.name;
    }
  }
}

TEST(ExpertClosedLoopTest, BallAndBeamLinearizedExpert) {
  const PlantModel p = ball_beam_plant();
  const ExpertController e = default_expert(p);
  EXPECT_EQ(e.coordinates, Coordinates::kState);
  const StatePolicy policy = [&](Instant, const Vec& x) { return expert_input(p, e, x); };
  for (const Vec& x0 : default_initial_states(p)) {
    const Trajectory tr = simulate_closed_loop(p, policy, x0, 20.0);
    EXPECT_LT(tr.states.back().norm(), 1e-3);
  }
}

TEST(LinearizeAtOriginTest, BallAndBeamJacobian) {
  const BrunovskyPair lin = linearize_at_origin(ball_beam_plant(0.7143, 9.81));
  Mat A = Mat::Zero(4, 4);
  A(0, 1) = 1.0;
  A(1, 2) = -0.7143 * 9.81;
  A(2, 3) = 1.0;
  EXPECT_LT((lin.A - A).norm(), 1e-6);
  EXPECT_LT((lin.B - Vec::Unit(4, 3)).norm(), 1e-9);
}

}  // namespace
}  // namespace lfd
