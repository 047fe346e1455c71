#include "lfd/numerics.h"

#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "lfd/errors.h"
#include "lfd/plant.h"
#include "test_fixtures.h"

namespace lfd {
namespace {

// Residual of AᵀP + PA − PBR⁻¹BᵀP + Q.
double riccati_residual(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, const Mat& P) {
  return (A.transpose() * P + P * A - P * B * R.inverse() * B.transpose() * P + Q).norm();
}

TEST(LqrGainTest, DoubleIntegratorIdentityWeights) {
  const BrunovskyPair ab = brunovsky_pair(2);
  Mat P;
  const Mat K = lqr_gain(ab.A, ab.B, Mat::Identity(2, 2), Mat::Identity(1, 1), &P);
  EXPECT_NEAR(K(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(K(0, 1), std::sqrt(3.0), 1e-12);
  EXPECT_LT(riccati_residual(ab.A, ab.B, Mat::Identity(2, 2), Mat::Identity(1, 1), P), 1e-10);
}

TEST(LqrGainTest, ScalarIntegrator) {
  const BrunovskyPair ab = brunovsky_pair(1);
  const Mat K = lqr_gain(ab.A, ab.B, Mat::Identity(1, 1), Mat::Identity(1, 1));
  EXPECT_NEAR(K(0, 0), 1.0, 1e-12);
}

TEST(LqrGainTest, DoubleIntegratorDiagonalWeights) {
  const BrunovskyPair ab = brunovsky_pair(2);
  const Mat Q = Vec::Map(std::vector<double>{1.0, 2.0}.data(), 2).asDiagonal();
  const Mat K = lqr_gain(ab.A, ab.B, Q, Mat::Identity(1, 1));
  EXPECT_NEAR(K(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(K(0, 1), 2.0, 1e-12);
}

TEST(LqrGainTest, ClosedLoopIsStableForVariousWeights) {
  std::mt19937 rng(7);
  for (int n = 1; n <= 6; ++n) {
    const BrunovskyPair ab = brunovsky_pair(n);
    const Vec q = testing::random_vec(rng, n, 0.1, 10.0);
    const Mat R = Mat::Constant(1, 1, testing::random_vec(rng, 1, 0.05, 5.0)(0));
    Mat P;
    const Mat K = lqr_gain(ab.A, ab.B, q.asDiagonal(), R, &P);
    EXPECT_LT(riccati_residual(ab.A, ab.B, q.asDiagonal(), R, P), 1e-8 * std::max(1.0, P.norm()));
    const Eigen::EigenSolver<Mat> es(ab.A - ab.B * K);
    EXPECT_LT(es.eigenvalues().real().maxCoeff(), 0.0) << "n=" << n;
  }
}

TEST(LqrGainTest, MultiInputChain) {
  const BrunovskyPair ab = brunovsky_pair(3, 3);
  const Mat K = lqr_gain(ab.A, ab.B, Mat::Identity(9, 9), 0.1 * Mat::Identity(3, 3));
  const Eigen::EigenSolver<Mat> es(ab.A - ab.B * K);
  EXPECT_LT(es.eigenvalues().real().maxCoeff(), 0.0);
}

TEST(LqrGainTest, RejectsBadWeights) {
  const BrunovskyPair ab = brunovsky_pair(2);
  EXPECT_THROW(lqr_gain(ab.A, ab.B, Mat::Identity(3, 3), Mat::Identity(1, 1)), Error);
}

TEST(NilpotentExpTest, MatchesPadeExponential) {
  for (int n = 1; n <= 5; ++n) {
    const Mat A = brunovsky_pair(n).A;
    for (double t : {0.0, 0.3, 2.0, 8.0}) {
      EXPECT_LT((nilpotent_exp(A, t) - testing::expm(A * t)).norm(), 1e-10 * std::max(1.0, std::pow(t, n)));
    }
  }
}

TEST(NormTest, SpectralNormAndRadius) {
  Mat M(2, 2);
  M << 0.0, 2.0, 0.0, 0.0;
  EXPECT_NEAR(spectral_norm(M), 2.0, 1e-14);
  EXPECT_NEAR(spectral_radius(M), 0.0, 1e-14);
  EXPECT_NEAR(spectral_norm(Mat::Identity(3, 3)), 1.0, 1e-15);
}

TEST(CharacteristicPolynomialTest, CompanionMatrixRecoversCoefficients) {
  // s³ + 3s² + 3s + 1 from the companion matrix with last row −(1, 3, 3).
  Mat C = Mat::Zero(3, 3);
  C(0, 1) = C(1, 2) = 1.0;
  C.row(2) << -1.0, -3.0, -3.0;
  const std::vector<double> c = characteristic_polynomial(C);
  ASSERT_EQ(c.size(), 4u);
  EXPECT_NEAR(c[0], 1.0, 1e-14);
  EXPECT_NEAR(c[1], 3.0, 1e-14);
  EXPECT_NEAR(c[2], 3.0, 1e-14);
  EXPECT_NEAR(c[3], 1.0, 1e-14);
}

TEST(PolynomialRootsTest, TripleRootIsResolved) {
  const auto roots = polynomial_roots({1.0, 3.0, 3.0, 1.0});
  ASSERT_EQ(roots.size(), 3u);
  for (const auto& r : roots) {
    EXPECT_NEAR(r.real(), -1.0, 1e-9);
    EXPECT_NEAR(r.imag(), 0.0, 1e-9);
  }
}

TEST(PolynomialRootsTest, ComplexPair) {
  // s² + 2s + 5 = (s + 1)² + 4.
  const auto roots = polynomial_roots({5.0, 2.0, 1.0});
  ASSERT_EQ(roots.size(), 2u);
  for (const auto& r : roots) {
    EXPECT_NEAR(r.real(), -1.0, 1e-12);
    EXPECT_NEAR(std::abs(r.imag()), 2.0, 1e-12);
  }
}

TEST(EigenvaluesTest, AgreeWithEigenSolverOnRandomMatrices) {
  std::mt19937 rng(3);
  for (int n = 1; n <= 6; ++n) {
    Mat M(n, n);
    for (int i = 0; i < n; ++i) M.col(i) = testing::random_vec(rng, n);
    auto mine = eigenvalues_via_charpoly(M);
    const Eigen::EigenSolver<Mat> es(M);
    std::vector<std::complex<double>> ref(es.eigenvalues().data(), es.eigenvalues().data() + n);
    auto key = [](const std::complex<double>& a, const std::complex<double>& b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    };
    std::sort(mine.begin(), mine.end(), key);
    std::sort(ref.begin(), ref.end(), key);
    for (int i = 0; i < n; ++i) EXPECT_LT(std::abs(mine[i] - ref[i]), 1e-8) << "n=" << n;
  }
}

TEST(HurwitzTest, CompanionExamples) {
  Mat stable = Mat::Constant(1, 1, -1.0);
  Mat unstable = Mat::Constant(1, 1, 1.0);
  EXPECT_TRUE(hurwitz(stable));
  EXPECT_FALSE(hurwitz(unstable));
  EXPECT_FALSE(hurwitz(Mat::Zero(2, 2)));
  Mat C = Mat::Zero(3, 3);
  C(0, 1) = C(1, 2) = 1.0;
  C.row(2) << -1.0, -3.0, -3.0;
  EXPECT_TRUE(hurwitz(C));
}

TEST(ParallelForTest, VisitsEveryIndexOnce) {
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(ParallelForTest, RethrowsLowestFailingIndex) {
  try {
    parallel_for(50, 4, [](std::size_t i) {
      if (i == 13 || i == 40) throw std::runtime_error("fail " + std::to_string(i));
    });
    FAIL() << "expected an exception";
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "fail 13");
  }
}

}  // namespace
}  // namespace lfd
