#include "lfd/numerics.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <Eigen/Eigenvalues>

#include "lfd/errors.h"

namespace lfd {

Mat lqr_gain(const Mat& A, const Mat& B, const Mat& Q, const Mat& R,
             Mat* riccati_solution) {
  const Eigen::Index n = A.rows();
  const Eigen::Index m = B.cols();
  if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n ||
      R.rows() != m || R.cols() != m) {
    throw Error(ErrorKind::kInvalidDimension, "lqr_gain: inconsistent sizes");
  }
  Eigen::LLT<Mat> r_llt(R);
  if (r_llt.info() != Eigen::Success) {
    throw Error(ErrorKind::kInvalidArgument, "lqr_gain: R is not positive definite");
  }
  const Mat r_inv = r_llt.solve(Mat::Identity(m, m));
  const Mat G = B * r_inv * B.transpose();

  Mat H(2 * n, 2 * n);
  H << A, -G, -Q, -A.transpose();

  Mat W = H;
  bool converged = false;
  for (int iter = 0; iter < 200; ++iter) {
    Eigen::PartialPivLU<Mat> lu(W);
    const double det = lu.determinant();
    if (!std::isfinite(det) || det == 0.0) break;
    const double c = std::pow(std::abs(det), -1.0 / static_cast<double>(2 * n));
    const Mat next = 0.5 * (c * W + lu.inverse() / c);
    const double change = (next - W).lpNorm<1>();
    W = next;
    if (change <= 1e-13 * W.lpNorm<1>()) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw Error(ErrorKind::kNumerical, "lqr_gain: Hamiltonian sign iteration did not converge");
  }

  const Mat I = Mat::Identity(n, n);
  Mat lhs(2 * n, n);
  lhs << W.topRightCorner(n, n), W.bottomRightCorner(n, n) + I;
  Mat rhs(2 * n, n);
  rhs << W.topLeftCorner(n, n) + I, W.bottomLeftCorner(n, n);
  Mat P = -lhs.colPivHouseholderQr().solve(rhs);
  P = 0.5 * (P + P.transpose()).eval();

  const Mat residual = A.transpose() * P + P * A - P * G * P + Q;
  const double scale = 1.0 + Q.norm() + (A.transpose() * P).norm() + (P * G * P).norm();
  if (!P.allFinite() || residual.norm() > 1e-8 * scale) {
    throw Error(ErrorKind::kNumerical, "lqr_gain: Riccati residual too large");
  }
  if (riccati_solution != nullptr) *riccati_solution = P;
  return r_inv * B.transpose() * P;
}

double spectral_norm(const Mat& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(M);
  return svd.singularValues()(0);
}

double spectral_radius(const Mat& M) {
  if (M.size() == 0) return 0.0;
  Eigen::EigenSolver<Mat> es(M, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Mat nilpotent_exp(const Mat& A, double t) {
  const Eigen::Index n = A.rows();
  Mat result = Mat::Identity(n, n);
  Mat term = Mat::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    term = (term * A * t / static_cast<double>(k)).eval();
    result += term;
  }
  return result;
}

std::vector<double> characteristic_polynomial(const Mat& M) {
  const Eigen::Index n = M.rows();
  if (M.cols() != n) {
    throw Error(ErrorKind::kInvalidDimension, "characteristic_polynomial: non-square matrix");
  }
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  c[static_cast<std::size_t>(n)] = 1.0;
  Mat Mk = Mat::Zero(n, n);
  const Mat I = Mat::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    Mk = (M * Mk + c[static_cast<std::size_t>(n - k + 1)] * I).eval();
    c[static_cast<std::size_t>(n - k)] = -(M * Mk).trace() / static_cast<double>(k);
  }
  return c;
}

namespace {

// Value of the d-th derivative of the polynomial at s.
std::complex<double> poly_derivative(const std::vector<double>& c, int d,
                                     std::complex<double> s) {
  std::complex<double> acc = 0.0;
  for (int k = static_cast<int>(c.size()) - 1; k >= d; --k) {
    double factor = 1.0;
    for (int j = 0; j < d; ++j) factor *= static_cast<double>(k - j);
    acc = acc * s + c[static_cast<std::size_t>(k)] * factor;
  }
  return acc;
}

}  // namespace

std::vector<std::complex<double>> polynomial_roots(
    const std::vector<double>& coefficients) {
  std::vector<double> c = coefficients;
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  if (c.size() < 2) return {};
  const int degree = static_cast<int>(c.size()) - 1;
  const double lead = c.back();
  for (double& x : c) x /= lead;

  Mat companion = Mat::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -c[static_cast<std::size_t>(i)];
  Eigen::EigenSolver<Mat> es(companion, false);
  std::vector<std::complex<double>> raw(es.eigenvalues().begin(), es.eigenvalues().end());

  // Group numerically split multiple roots. The centroid of a cluster is
  // far better conditioned than its members.
  std::vector<int> cluster(raw.size(), -1);
  std::vector<std::complex<double>> out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (cluster[i] >= 0) continue;
    std::vector<std::size_t> members{i};
    cluster[i] = static_cast<int>(i);
    for (std::size_t j = i + 1; j < raw.size(); ++j) {
      if (cluster[j] >= 0) continue;
      if (std::abs(raw[j] - raw[i]) <= 1e-3 * (1.0 + std::abs(raw[i]))) {
        cluster[j] = static_cast<int>(i);
        members.push_back(j);
      }
    }
    std::complex<double> centre = 0.0;
    for (std::size_t j : members) centre += raw[j];
    centre /= static_cast<double>(members.size());
    const int d = static_cast<int>(members.size()) - 1;
    for (int iter = 0; iter < 8; ++iter) {
      const std::complex<double> f = poly_derivative(c, d, centre);
      const std::complex<double> df = poly_derivative(c, d + 1, centre);
      if (std::abs(df) == 0.0) break;
      const std::complex<double> next = centre - f / df;
      if (std::abs(poly_derivative(c, d, next)) >= std::abs(f)) break;
      centre = next;
    }
    for (std::size_t k = 0; k < members.size(); ++k) out.push_back(centre);
  }
  return out;
}

std::vector<std::complex<double>> eigenvalues_via_charpoly(const Mat& M) {
  if (M.rows() == 0) return {};
  return polynomial_roots(characteristic_polynomial(M));
}

bool hurwitz(const Mat& M, double margin) {
  for (const auto& lambda : eigenvalues_via_charpoly(M)) {
    if (!(lambda.real() < -margin)) return false;
  }
  return true;
}

void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  std::vector<std::exception_ptr> errors(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace lfd
