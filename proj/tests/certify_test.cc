#include "lfd/certify.h"

#include <cmath>

#include <gtest/gtest.h>

#include "lfd/errors.h"
#include "lfd/numerics.h"
#include "test_fixtures.h"

namespace lfd {
namespace {

Mat closed_form_psi2() {
  Mat P(2, 2);
  P << 3.0, 2.0, -2.0, -1.0;
  return std::exp(-2.0) * P;
}

AffineBasis basis_from_samples(double dt, int samples, const std::function<Mat(double)>& Z,
                               const std::function<Mat(double)>& V) {
  std::vector<Mat> Zs, Vs;
  std::vector<Vec> zb, vb;
  for (int k = 0; k < samples; ++k) {
    Zs.push_back(Z(k * dt));
    Vs.push_back(V(k * dt));
    zb.push_back(Vec::Zero(Zs.back().rows()));
    vb.push_back(Vec::Zero(Vs.back().rows()));
  }
  std::vector<int> indices(static_cast<std::size_t>(Zs.front().rows()) + 1);
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = static_cast<int>(i);
  return AffineBasis(indices, dt, Zs, Vs, zb, vb);
}

class DoubleIntegratorCertifyTest : public ::testing::Test {
 protected:
  DoubleIntegratorCertifyTest() : set_(testing::double_integrator_set()), basis_(AffineBasis::build(set_, {0, 1, 2})) {}
  DemonstrationSet set_;
  AffineBasis basis_;
};

TEST_F(DoubleIntegratorCertifyTest, DataMonodromyMatchesClosedForm) {
  const Mat psi = monodromy_from_data(basis_, 2.0);
  EXPECT_LT((psi - closed_form_psi2()).norm(), 1e-10);
  EXPECT_NEAR(spectral_norm(psi), 0.5732, 1e-3);
  EXPECT_EQ(monodromy_from_data(basis_, 0.0), Mat::Identity(2, 2));
}

TEST_F(DoubleIntegratorCertifyTest, IntegralFormAgrees) {
  const BrunovskyPair chain = brunovsky_pair(2);
  for (double T : {0.5, 1.0, 2.0}) {
    EXPECT_LE((monodromy_from_integral(basis_, chain.A, chain.B, T) - monodromy_from_data(basis_, T)).norm(), 1e-4);
  }
}

TEST_F(DoubleIntegratorCertifyTest, CertificateFields) {
  const MonodromyCertificate cert = certify(LearnedController(basis_, 2.0));
  ASSERT_EQ(cert.per_simplex.size(), 1u);
  const SimplexCertificate& s = cert.per_simplex[0];
  EXPECT_TRUE(cert.pass);
  EXPECT_NEAR(cert.max_norm, spectral_norm(closed_form_psi2()), 1e-9);
  EXPECT_NEAR(cert.margin, 1.0 - cert.max_norm, 1e-15);
  EXPECT_GE(s.frobenius_bound, s.norm);
  // Ψ has the double eigenvalue e⁻².
  EXPECT_NEAR(s.spectral_radius, std::exp(-2.0), 1e-6);
  EXPECT_EQ(s.indices, (std::vector<int>{0, 1, 2}));
}

TEST_F(DoubleIntegratorCertifyTest, FindTTilde) {
  EXPECT_EQ(find_T_tilde({basis_}, {2.0, 1.0, 0.5}), std::optional<double>(0.5));
  EXPECT_FALSE(find_T_tilde({basis_}, {0.0}).has_value());
  for (double T : {0.5, 1.0, 2.0}) {
    EXPECT_NEAR(spectral_norm(monodromy_from_data(basis_, T)), spectral_norm(testing::double_integrator_flow(T)),
                1e-9);
  }
  EXPECT_NEAR(spectral_norm(testing::double_integrator_flow(0.5)), 0.981, 1e-3);
  EXPECT_NEAR(spectral_norm(testing::double_integrator_flow(1.0)), 0.888, 1e-3);
}

TEST_F(DoubleIntegratorCertifyTest, ContractionCheck) {
  const LearnedController ctrl(basis_, 2.0);
  const ContractionReport r = contraction_check(ctrl, (Vec(2) << 0.5, 0.5).finished(), 5);
  EXPECT_TRUE(r.holds);
  EXPECT_LE(r.rate, 0.574);
  ASSERT_EQ(r.norms.size(), 6u);
  for (std::size_t p = 1; p < r.norms.size(); ++p) EXPECT_LE(r.norms[p], 0.574 * r.norms[p - 1]);
  EXPECT_LT(r.max_replay_error, 1e-6);
  const ContractionReport zero = contraction_check(ctrl, Vec::Zero(2), 3);
  for (double v : zero.norms) EXPECT_EQ(v, 0.0);
}

TEST(MonodromyTest, UnstableExpertNeverCertifies) {
  const PlantModel plant = chain_plant(2);
  ExpertController unstable;
  unstable.coordinates = Coordinates::kNormalForm;
  unstable.kappa = [](const Vec& z) { return Vec::Constant(1, z(0)); };
  const DemonstrationSet set = to_zv(plant, record_expert(plant, unstable, {Vec::Unit(2, 0), Vec::Unit(2, 1)}, 2.0, 1e-3));
  const AffineBasis basis = AffineBasis::build(set, {0, 1, 2});
  EXPECT_FALSE(find_T_tilde({basis}, {0.5, 1.0, 1.5, 2.0}).has_value());
  Mat Acl(2, 2);
  Acl << 0.0, 1.0, 1.0, 0.0;
  EXPECT_LT((monodromy_from_data(basis, 2.0) - testing::expm(2.0 * Acl)).norm(), 1e-9);
}

TEST(MonodromyTest, ScalarIntegralCase) {
  const AffineBasis basis = basis_from_samples(
      1e-3, 2001, [](double t) { return Mat::Constant(1, 1, std::exp(-t)); },
      [](double t) { return Mat::Constant(1, 1, -std::exp(-t)); });
  for (double T : {0.5, 2.0}) {
    EXPECT_NEAR(monodromy_from_integral(basis, Mat::Zero(1, 1), Mat::Ones(1, 1), T)(0, 0), std::exp(-T), 1e-6);
    EXPECT_NEAR(monodromy_from_data(basis, T)(0, 0), std::exp(-T), 1e-15);
  }
}

TEST(MonodromyTest, ZeroInputGivesFreeFlow) {
  const BrunovskyPair chain = brunovsky_pair(3);
  const AffineBasis basis = basis_from_samples(
      1e-2, 201, [&](double t) { return Mat(nilpotent_exp(chain.A, t)); }, [](double) { return Mat::Zero(1, 3); });
  const Mat expected = nilpotent_exp(chain.A, 2.0);
  EXPECT_LT((monodromy_from_integral(basis, chain.A, chain.B, 2.0) - expected).norm(), 1e-14);
  EXPECT_LT((monodromy_from_data(basis, 2.0) - expected).norm(), 1e-14);
  EXPECT_LT((testing::expm(2.0 * chain.A) - expected).norm(), 1e-14);
}

TEST(MonodromyTest, InvariantUnderCommonScaling) {
  const DemonstrationSet set = testing::double_integrator_set();
  const AffineBasis basis = AffineBasis::build(set, {0, 1, 2});
  std::vector<Mat> Zs = basis.Zs(), Vs = basis.Vs();
  for (auto& Z : Zs) Z *= -3.5;
  for (auto& V : Vs) V *= -3.5;
  const AffineBasis scaled(basis.indices(), basis.dt(), Zs, Vs, basis.base_zs(), basis.base_vs());
  EXPECT_LT((monodromy_from_data(scaled, 2.0) - monodromy_from_data(basis, 2.0)).norm(), 1e-14);
}

TEST(FrobeniusBoundTest, DominatesNormOnRandomBases) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec x0a = testing::random_vec(rng, 2, -2, 2), x0b = testing::random_vec(rng, 2, -2, 2);
    const DemonstrationSet set = testing::double_integrator_set(1.0, 1e-2, {x0a, x0b});
    const MonodromyCertificate cert = certify({AffineBasis::build(set, {0, 1, 2})}, 1.0);
    EXPECT_GE(cert.per_simplex[0].frobenius_bound, cert.per_simplex[0].norm * (1 - 1e-12));
  }
}

TEST(CertifyTest, RejectsBadHorizon) {
  const AffineBasis basis = AffineBasis::build(testing::double_integrator_set(), {0, 1, 2});
  EXPECT_THROW(certify({basis}, 3.0), Error);
  EXPECT_THROW(certify({basis}, -1.0), Error);
}

}  // namespace
}  // namespace lfd
