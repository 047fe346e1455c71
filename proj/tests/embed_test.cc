#include "lfd/embed.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lfd/errors.h"
#include "lfd/numerics.h"
#include "lfd/systems.h"
#include "test_fixtures.h"

namespace lfd {
namespace {

constexpr double kB = 0.7143;
constexpr double kG = 9.81;

Vec x4(double a, double b, double c, double d) { return (Vec(4) << a, b, c, d).finished(); }
Vec x3(double a, double b, double c) { return (Vec(3) << a, b, c).finished(); }

class BallBeamEmbedTest : public ::testing::Test {
 protected:
  BallBeamEmbedTest() : preset_(ball_beam_preset()), cfg_(preset_.embedding) {}
  BallBeamPreset preset_;
  const EmbeddingConfig& cfg_;
};

TEST(AXiTest, Examples) {
  const Mat A = a_xi(x3(1, 3, 3));
  EXPECT_EQ(A.row(2), x3(-1, -3, -3).transpose());
  EXPECT_EQ(A(0, 1), 1.0);
  EXPECT_EQ(A(1, 2), 1.0);
  for (const auto& lambda : eigenvalues_via_charpoly(A)) {
    EXPECT_NEAR(lambda.real(), -1.0, 1e-9);
    EXPECT_NEAR(lambda.imag(), 0.0, 1e-9);
  }
  EXPECT_TRUE(hurwitz(A));
  EXPECT_FALSE(hurwitz(a_xi(Vec::Constant(1, -1.0))));
  EXPECT_TRUE(hurwitz(a_xi(Vec::Constant(1, 1.0))));
}

TEST(EmbeddingConfigTest, Validation) {
  EXPECT_THROW(EmbeddingConfig(ball_beam_plant(), x3(1, -3, 3)), Error);
  EXPECT_THROW(EmbeddingConfig(ball_beam_plant(), Vec::Ones(2)), Error);
  EXPECT_THROW(EmbeddingConfig(chain_plant(2), Vec::Constant(1, -1.0)), Error);
  EXPECT_NO_THROW(EmbeddingConfig(chain_plant(2), Vec::Constant(1, 1.0)));
  EXPECT_THROW(EmbeddingConfig(flat_quad_3d(), Vec::Ones(8)), Error);
}

TEST_F(BallBeamEmbedTest, PhiExamples) {
  EXPECT_EQ(phi_z(cfg_, Vec::Zero(4), Vec::Zero(3)).norm(), 0.0);
  const Vec x = x4(0.3, -0.2, 0.1, 0.4);
  const Vec xi = x3(0.05, -0.1, 0.2);
  const Vec z0 = phi_z(cfg_, x, Vec::Zero(3));
  EXPECT_NEAR(z0(0), x(0), 1e-15);
  EXPECT_NEAR(z0(1), x(1), 1e-15);
  EXPECT_NEAR(z0(2), -kB * kG * std::sin(x(2)) + kB * x(0) * x(3) * x(3), 1e-15);
  const Vec z = phi_z(cfg_, x, xi);
  EXPECT_NEAR(z(2), z0(2) + xi(2), 1e-15);
  EXPECT_NEAR(z(3), z0(3) - (xi(0) + 3 * xi(1) + 3 * xi(2)), 1e-15);
  const auto [zz, xx] = phi(cfg_, x, xi);
  EXPECT_EQ(xx, xi);
  EXPECT_EQ(zz, z);
}

TEST_F(BallBeamEmbedTest, RAndSExamples) {
  EXPECT_NEAR(r_of_x(cfg_, Vec::Zero(4)), -7.0073, 1e-4);
  EXPECT_NEAR(r_of_x(cfg_, Vec::Zero(4)), -kB * kG, 1e-12);
  EXPECT_EQ(s_of_x_xi(cfg_, Vec::Zero(4), Vec::Zero(3)), 0.0);
  const Vec x = x4(0.3, -0.2, 0.1, 0.4);
  EXPECT_NEAR(r_of_x(cfg_, x), 2 * kB * x(1) * x(3) - kB * kG * std::cos(x(2)) + 3.0 * 2 * kB * x(0) * x(3), 1e-12);
  const EmbeddingConfig plain(chain_plant(2, 2.0), Vec::Constant(1, 1.0));
  EXPECT_NEAR(r_of_x(plain, Vec::Ones(2)), 2.0, 1e-15);
}

TEST_F(BallBeamEmbedTest, AuxRhsExamples) {
  const Vec x = x4(0.3, -0.2, 0.1, 0.4);
  EXPECT_EQ(aux_rhs(cfg_, x, Vec::Zero(3), 0.0).norm(), 0.0);
  const Vec xi = x3(0.05, -0.1, 0.2);
  EXPECT_LT((aux_rhs(cfg_, x, xi, 0.0) - a_xi(cfg_.w()) * xi).norm(), 1e-15);
  const double u = 1.7;
  const Vec d = aux_rhs(cfg_, x, xi, u);
  EXPECT_NEAR(d(0), xi(1), 1e-15);
  EXPECT_NEAR(d(1), xi(2), 1e-15);
  EXPECT_NEAR(d(2), -xi(0) - 3 * xi(1) - 3 * xi(2) - 2 * kB * x(0) * x(3) * u, 1e-14);
}

TEST_F(BallBeamEmbedTest, DynamicFeedbackExamples) {
  EXPECT_EQ(dynamic_feedback(cfg_, Vec::Zero(4), Vec::Zero(3), 0.0), 0.0);
  EXPECT_NEAR(dynamic_feedback(cfg_, Vec::Zero(4), Vec::Zero(3), 2.5), 2.5 / (-kB * kG), 1e-14);
  const Vec x = x4(0.3, -0.2, 0.1, 0.4);
  const Vec xi = x3(0.05, -0.1, 0.2);
  EXPECT_NEAR(dynamic_feedback(cfg_, x, xi, -s_of_x_xi(cfg_, x, xi)), 0.0, 1e-15);
  // r vanishes where 2b x₂x₄ + 6b x₁x₄ = bg cos x₃.
  const Vec singular = x4(0.0, kG / 2.0, 0.0, 1.0);
  EXPECT_NEAR(r_of_x(cfg_, singular), 0.0, 1e-12);
  try {
    dynamic_feedback(cfg_, singular, Vec::Zero(3), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSingularEmbedding);
  }
}

// u = (s + v)/r makes the z-coordinates a pure integrator chain.
TEST_F(BallBeamEmbedTest, ZCoordinatesFollowChain) {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec x = testing::random_vec(rng, 4, -0.5, 0.5);
    const Vec xi = testing::random_vec(rng, 3, -0.5, 0.5);
    const double v = testing::random_vec(rng, 1)(0);
    const double u = dynamic_feedback(cfg_, x, xi, v);
    const double h = 1e-6;
    const Vec xdot = preset_.plant.rhs(x, Vec::Constant(1, u));
    const Vec xidot = aux_rhs(cfg_, x, xi, u);
    const Vec zdot = (phi_z(cfg_, x + h * xdot, xi + h * xidot) - phi_z(cfg_, x - h * xdot, xi - h * xidot)) / (2 * h);
    const Vec z = phi_z(cfg_, x, xi);
    EXPECT_NEAR(zdot(0), z(1), 1e-7);
    EXPECT_NEAR(zdot(1), z(2), 1e-7);
    EXPECT_NEAR(zdot(2), z(3), 1e-7);
    EXPECT_NEAR(zdot(3), v, 1e-6);
  }
}

class TransformTest : public BallBeamEmbedTest {
 protected:
  RawDemonstrationSet record(double dt) const {
    return record_expert(preset_.plant, default_expert(preset_.plant), default_initial_states(preset_.plant), 2.0, dt);
  }
};

TEST_F(TransformTest, TrivialDemoAndRoundTrip) {
  const RawDemonstrationSet raw = record(1e-3);
  const EmbeddedDemonstrationSet set = transform_demos(cfg_, raw);
  ASSERT_EQ(set.demos.size(), raw.demos.size());
  for (std::size_t k = 0; k < set.demos[0].samples(); ++k) {
    EXPECT_EQ(set.demos[0].z[k].norm(), 0.0);
    EXPECT_EQ(set.demos[0].xi[k].norm(), 0.0);
    EXPECT_EQ(set.demos[0].v[k], 0.0);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < raw.demos.size(); ++i) {
    for (std::size_t k = 0; k < raw.demos[i].size(); ++k) {
      const double u = dynamic_feedback(cfg_, raw.demos[i].states[k], set.demos[i].xi[k], set.demos[i].v[k]);
      worst = std::max(worst, std::abs(u - raw.demos[i].inputs[k](0)));
      EXPECT_LT((phi_z(cfg_, raw.demos[i].states[k], set.demos[i].xi[k]) - set.demos[i].z[k]).norm(), 1e-14);
    }
  }
  EXPECT_LE(worst, 1e-6);
  const DemonstrationSet zv = to_demonstration_set(set);
  EXPECT_TRUE(zv.includes_trivial);
  EXPECT_EQ(zv.n, 4);
}

TEST_F(TransformTest, ChainDynamicsToSecondOrder) {
  auto residual = [&](double dt) {
    const EmbeddedDemonstrationSet set = transform_demos(cfg_, record(dt));
    const Mat A = brunovsky_pair(4).A;
    const Mat B = brunovsky_pair(4).B;
    double worst = 0.0;
    for (const EmbeddedDemonstration& d : set.demos) {
      for (std::size_t k = 1; k + 1 < d.samples(); ++k) {
        const Vec dz = (d.z[k + 1] - d.z[k - 1]) / (2 * dt);
        const Vec rhs = A * d.z[k] + B * d.v[k];
        worst = std::max(worst, (dz - rhs).norm() / (1.0 + rhs.norm()));
      }
    }
    return worst;
  };
  const double coarse = residual(2e-3);
  const double fine = residual(1e-3);
  EXPECT_GT(coarse / fine, 3.0);
  EXPECT_LT(fine, 1e-2);
}

TEST_F(TransformTest, SingularityNamesDemonstration) {
  RawDemonstrationSet raw = record(1e-2);
  raw.demos[2].states[7] = x4(0.0, kG / 2.0, 0.0, 1.0);
  try {
    transform_demos(cfg_, raw);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSingularEmbedding);
    EXPECT_NE(std::string(e.what()).find("demonstration 2"), std::string::npos) << e.what();
  }
}

TEST_F(BallBeamEmbedTest, PhiInverse) {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec x = testing::random_vec(rng, 4, -0.5, 0.5);
    const Vec xi = testing::random_vec(rng, 3, -0.2, 0.2);
    EXPECT_LT((phi_inverse(cfg_, phi_z(cfg_, x, xi), xi, Vec::Zero(4)) - x).norm(), 1e-9);
  }
}

TEST_F(BallBeamEmbedTest, AwSurrogate) {
  const Mat Aw = a_w_numeric(cfg_);
  ASSERT_EQ(Aw.rows(), 3);
  EXPECT_LT(Aw.topRows(2).norm(), 1e-12);
  const double scale = std::max(1.0, Aw.norm());
  EXPECT_LT((a_w_numeric(cfg_, 1e-4) - Aw).norm(), 1e-3 * scale);
  EXPECT_LT((a_w_numeric(cfg_, 1e-6) - Aw).norm(), 1e-3 * scale);
  EXPECT_TRUE(hurwitz(a_xi(cfg_.w()) + Aw));
  const EmbeddingConfig chain(chain_plant(3), x3(1, 3, 3).head(2));
  EXPECT_LT(a_w_numeric(chain).norm(), 1e-12);
}

TEST_F(BallBeamEmbedTest, SimulationZeroAndReplay) {
  const Trajectory zero =
      simulate_embedded_closed_loop(cfg_, [](Instant, const Vec&) { return Vec::Zero(1); }, Vec::Zero(4), Vec::Zero(3), 1.0);
  for (const Vec& s : zero.states) EXPECT_EQ(s.norm(), 0.0);
  ASSERT_EQ(zero.states.front().size(), 7);

  const RawDemonstrationSet raw = record_expert(preset_.plant, default_expert(preset_.plant),
                                                {x4(0.5, 0.0, 0.0, 0.0)}, 2.0, 1e-3);
  const EmbeddedDemonstrationSet set = transform_demos(cfg_, raw);
  const EmbeddedDemonstration& d = set.demos[1];
  const StatePolicy replay = [&d](Instant t, const Vec&) {
    const GridPosition pos = grid_position(t.t, d.dt, d.samples());
    const double v = pos.fraction == 0.0 ? d.v[pos.index]
                                         : (1 - pos.fraction) * d.v[pos.index] + pos.fraction * d.v[pos.index + 1];
    return Vec::Constant(1, v);
  };
  const Trajectory tr = simulate_embedded_closed_loop(cfg_, replay, raw.demos[1].states.front(), Vec::Zero(3), 2.0);
  double err = 0.0;
  for (std::size_t k = 0; k < tr.size(); ++k) err = std::max(err, (tr.states[k].head(4) - raw.demos[1].states[k]).norm());
  EXPECT_LT(err, 1e-4);
}

}  // namespace
}  // namespace lfd
