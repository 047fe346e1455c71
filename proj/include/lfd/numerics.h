#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace lfd {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Infinite-horizon continuous-time LQR gain K = R⁻¹BᵀP, where P is the
/// stabilizing solution of AᵀP + PA − PBR⁻¹BᵀP + Q = 0. Solved with the
/// scaled Newton iteration for the sign of the Hamiltonian matrix.
/// Throws Error(kNumerical) if the iteration does not converge or the
/// Riccati residual is not small.
Mat lqr_gain(const Mat& A, const Mat& B, const Mat& Q, const Mat& R,
             Mat* riccati_solution = nullptr);

/// Largest singular value.
double spectral_norm(const Mat& M);
double spectral_radius(const Mat& M);

/// exp(A t) for nilpotent A, summed exactly as a finite power series.
Mat nilpotent_exp(const Mat& A, double t);

/// Monic characteristic polynomial of a square matrix by the
/// Faddeev–LeVerrier recursion. Coefficients are returned in ascending
/// order, c[0] + c[1] s + ... + c[n] sⁿ with c[n] = 1.
std::vector<double> characteristic_polynomial(const Mat& M);

/// Roots of the polynomial c[0] + c[1] s + ... + c[d] s^d (c[d] ≠ 0).
/// Clustered roots are replaced by their centroid and polished on the
/// matching derivative, so repeated roots come back accurately.
std::vector<std::complex<double>> polynomial_roots(
    const std::vector<double>& coefficients);

/// Eigenvalues obtained as roots of the characteristic polynomial.
/// Intended for small matrices (n ≤ 8).
std::vector<std::complex<double>> eigenvalues_via_charpoly(const Mat& M);

/// All eigenvalue real parts below −margin.
bool hurwitz(const Mat& M, double margin = 1e-9);

/// Runs body(i) for i in [0, count) on up to `jobs` threads. Results must be
/// written to per-index storage by the caller. The exception from the lowest
/// failing index is rethrown after all workers finish.
void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& body);

}  // namespace lfd
