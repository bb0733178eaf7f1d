#include "cfuse/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cfuse/error.hpp"

namespace cfuse {

namespace {

bool all_finite(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const Scalar z = m(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  }
  return true;
}

Matrix symmetrized(const Matrix& m) {
  return (m + m.adjoint()) * 0.5;
}

}  // namespace

void Tolerances::validate() const {
  auto ok = [](double t) { return std::isfinite(t) && t > 0.0; };
  if (!ok(rank_tol) || !ok(residual_tol) || !ok(psd_tol)) {
    throw Error(ErrorKind::InvalidArgument, "tolerances must be finite and strictly positive");
  }
  if (rank_tol >= 1.0) {
    throw Error(ErrorKind::InvalidArgument, "rank_tol must be < 1");
  }
}

Matrix orthonormalize(std::span<const Vector> vectors, const Tolerances& tol) {
  if (vectors.empty()) {
    throw Error(ErrorKind::InvalidArgument, "orthonormalize needs at least one vector");
  }
  const Eigen::Index n = vectors.front().size();
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "vectors must have dimension >= 1");

  Matrix stacked(n, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != n) {
      throw Error(ErrorKind::DimensionMismatch, "all spanning vectors must share one dimension");
    }
    stacked.col(static_cast<Eigen::Index>(j)) = vectors[j];
  }
  if (!all_finite(stacked)) throw Error(ErrorKind::InvalidArgument, "non-finite entry in spanning vectors");

  const RealVector sv = singular_values(stacked);
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  if (sigma_max == 0.0) {
    throw Error(ErrorKind::AllVectorsNumericallyZero, "spanning set has numerical rank 0");
  }
  const double cutoff = tol.rank_tol * sigma_max;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  if (rank == 0) {
    throw Error(ErrorKind::AllVectorsNumericallyZero, "spanning set has numerical rank 0");
  }

  // Modified Gram-Schmidt with one reorthogonalization pass.
  std::vector<Vector> basis;
  basis.reserve(static_cast<std::size_t>(rank));
  for (const Vector& v : vectors) {
    if (static_cast<Eigen::Index>(basis.size()) == rank) break;
    Vector r = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& q : basis) r -= q * q.dot(r);
    }
    const double norm = r.norm();
    if (norm > cutoff) basis.push_back(r / norm);
  }

  if (static_cast<Eigen::Index>(basis.size()) != rank) {
    // Gram-Schmidt residuals disagreed with the SVD rank (borderline case);
    // fall back to the dominant left singular vectors.
    Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeThinU);
    return svd.matrixU().leftCols(rank);
  }

  Matrix out(n, rank);
  for (Eigen::Index j = 0; j < rank; ++j) out.col(j) = basis[static_cast<std::size_t>(j)];
  return out;
}

bool is_hermitian(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

RealVector hermitian_eigenvalues(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "expected a nonempty square matrix");
  }
  if (!all_finite(m)) throw Error(ErrorKind::InvalidArgument, "non-finite matrix entry");
  if (!is_hermitian(m)) throw Error(ErrorKind::NotHermitian, "matrix asymmetry exceeds tolerance");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

SpectralExtremes hermitian_extremes(const Matrix& m) {
  const RealVector ev = hermitian_eigenvalues(m);
  return {ev(0), ev(ev.size() - 1)};
}

RealVector singular_values(const Matrix& m) {
  if (m.size() == 0) return RealVector(0);
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues();
}

double spectral_norm(const Matrix& m) {
  const RealVector sv = singular_values(m);
  return sv.size() == 0 ? 0.0 : sv(0);
}

Eigen::Index numerical_rank(const Matrix& m, double rank_tol) {
  const RealVector sv = singular_values(m);
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cutoff = rank_tol * sv(0);
  return (sv.array() > cutoff).count();
}

Vector solve_hpd(const Matrix& m, const Vector& b, const Tolerances& tol) {
  if (b.size() != m.rows()) throw Error(ErrorKind::DimensionMismatch, "right-hand side size mismatch");
  const SpectralExtremes ext = hermitian_extremes(m);
  if (ext.min <= tol.psd_tol) {
    throw Error(ErrorKind::NotPositiveDefinite, "smallest eigenvalue is not above psd_tol");
  }
  Eigen::LLT<Matrix> llt(symmetrized(m));
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::NotPositiveDefinite, "Cholesky factorization failed");
  }
  return llt.solve(b);
}

Matrix inverse_hpd(const Matrix& m, const Tolerances& tol) {
  const SpectralExtremes ext = hermitian_extremes(m);
  if (ext.min <= tol.psd_tol) {
    throw Error(ErrorKind::NotPositiveDefinite, "smallest eigenvalue is not above psd_tol");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(m));
  const RealVector inv = solver.eigenvalues().cwiseInverse();
  const Matrix& u = solver.eigenvectors();
  return u * inv.asDiagonal() * u.adjoint();
}

Matrix pseudoinverse(const Matrix& m, double rank_tol) {
  if (m.size() == 0) return Matrix::Zero(m.cols(), m.rows());
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sv = svd.singularValues();
  RealVector inv = RealVector::Zero(sv.size());
  const double cutoff = sv.size() > 0 ? rank_tol * sv(0) : 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

}  // namespace cfuse
