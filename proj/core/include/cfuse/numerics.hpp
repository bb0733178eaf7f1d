#pragma once

#include <complex>
#include <span>

#include <Eigen/Dense>

namespace cfuse {

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Floating-point policy shared by every module.
///
/// rank_tol is relative to the largest singular value of whatever is being
/// ranked; residual_tol bounds operator-identity residuals and is the one-sided
/// slack used when an inequality is attested numerically; psd_tol is the
/// absolute eigenvalue threshold separating "positive" from "zero".
struct Tolerances {
  double rank_tol = 1e-10;
  double residual_tol = 1e-8;
  double psd_tol = 1e-10;

  /// Throws InvalidArgument unless all are finite, positive, and rank_tol < 1.
  void validate() const;
};

/// Asymmetry allowed before a matrix is rejected as non-Hermitian (relative
/// to max(1, largest entry)).
inline constexpr double kHermitianTol = 1e-10;

struct SpectralExtremes {
  double min = 0.0;
  double max = 0.0;
};

/// Orthonormal basis (n x k) of the numerical span of `vectors`, built by
/// Gram-Schmidt in input order. k is the numerical rank under rank_tol.
Matrix orthonormalize(std::span<const Vector> vectors, const Tolerances& tol = {});

/// Smallest and largest eigenvalue of a Hermitian matrix.
SpectralExtremes hermitian_extremes(const Matrix& m);

/// Eigenvalues of a Hermitian matrix in increasing order.
RealVector hermitian_eigenvalues(const Matrix& m);

bool is_hermitian(const Matrix& m, double rel_tol = kHermitianTol);

/// Largest singular value; 0 for empty or zero matrices.
double spectral_norm(const Matrix& m);

/// Singular values in decreasing order.
RealVector singular_values(const Matrix& m);

/// Number of singular values above rank_tol times the largest one.
Eigen::Index numerical_rank(const Matrix& m, double rank_tol);

/// Solves m x = b for Hermitian positive definite m.
Vector solve_hpd(const Matrix& m, const Vector& b, const Tolerances& tol = {});

/// Inverse of a Hermitian positive definite matrix (Hermitian by construction).
Matrix inverse_hpd(const Matrix& m, const Tolerances& tol = {});

/// Moore-Penrose pseudoinverse with singular values below
/// rank_tol * sigma_max treated as zero.
Matrix pseudoinverse(const Matrix& m, double rank_tol);

}  // namespace cfuse
