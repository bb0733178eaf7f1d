#include "cfuse/space.hpp"

#include <cmath>
#include <set>

#include "cfuse/error.hpp"

namespace cfuse {

MeasureSpace::MeasureSpace(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw Error(ErrorKind::InvariantError, "measure space needs at least one atom");
  std::set<std::string> seen;
  for (const Atom& a : atoms_) {
    if (!std::isfinite(a.mass) || a.mass <= 0.0) {
      throw Error(ErrorKind::InvariantError, "atom '" + a.id + "' must have a finite positive mass");
    }
    if (!seen.insert(a.id).second) {
      throw Error(ErrorKind::InvariantError, "duplicate atom id '" + a.id + "'");
    }
  }
}

MeasureSpace MeasureSpace::from_masses(std::span<const double> masses) {
  std::vector<Atom> atoms;
  atoms.reserve(masses.size());
  for (std::size_t i = 0; i < masses.size(); ++i) atoms.push_back({"a" + std::to_string(i), masses[i]});
  return MeasureSpace(std::move(atoms));
}

MeasureSpace MeasureSpace::counting(std::size_t n) {
  const std::vector<double> ones(n, 1.0);
  return from_masses(ones);
}

double MeasureSpace::total_mass() const noexcept {
  double total = 0.0;
  for (const Atom& a : atoms_) total += a.mass;
  return total;
}

std::size_t MeasureSpace::index_of(const std::string& id) const noexcept {
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].id == id) return i;
  }
  return atoms_.size();
}

WeightMap::WeightMap(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] <= 0.0) {
      throw Error(ErrorKind::InvariantError,
                  "weight at atom " + std::to_string(i) + " must be finite and strictly positive");
    }
  }
}

WeightMap WeightMap::constant(std::size_t n, double value) {
  return WeightMap(std::vector<double>(n, value));
}

Subspace::Subspace(Matrix basis) : basis_(std::move(basis)) {
  if (basis_.cols() < 1 || basis_.rows() < 1) {
    throw Error(ErrorKind::InvariantError, "subspace must have dimension >= 1");
  }
  if (basis_.cols() > basis_.rows()) {
    throw Error(ErrorKind::InvariantError, "subspace dimension exceeds ambient dimension");
  }
  const Matrix gram = basis_.adjoint() * basis_;
  const double err = (gram - Matrix::Identity(basis_.cols(), basis_.cols())).cwiseAbs().maxCoeff();
  if (!(err <= 1e-10)) throw Error(ErrorKind::InvariantError, "subspace basis is not orthonormal");
}

Subspace Subspace::spanned_by(std::span<const Vector> vectors, const Tolerances& tol) {
  return Subspace(orthonormalize(vectors, tol));
}

Subspace Subspace::full(Eigen::Index n) {
  return Subspace(Matrix::Identity(n, n));
}

Subspace Subspace::coordinate_axis(Eigen::Index n, Eigen::Index i) {
  Matrix b = Matrix::Zero(n, 1);
  b(i, 0) = 1.0;
  return Subspace(std::move(b));
}

bool Subspace::same_span(const Subspace& other, double tol) const {
  if (ambient_dim() != other.ambient_dim() || dim() != other.dim()) return false;
  return (projection(*this) - projection(other)).cwiseAbs().maxCoeff() <= tol;
}

double Subspace::distance(const Vector& v) const {
  return (v - basis_ * (basis_.adjoint() * v)).norm();
}

Matrix projection(const Subspace& s) {
  return s.basis() * s.basis().adjoint();
}

Subspace image_subspace(const Matrix& m, const Subspace& s, const Tolerances& tol) {
  if (m.rows() != m.cols() || m.cols() != s.ambient_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "operator and subspace dimensions disagree");
  }
  const RealVector sv = singular_values(m);
  if (sv.size() == 0 || sv(sv.size() - 1) <= tol.rank_tol * sv(0)) {
    throw Error(ErrorKind::SingularOperator, "operator is not numerically invertible");
  }
  const Matrix image = m * s.basis();
  std::vector<Vector> cols;
  cols.reserve(static_cast<std::size_t>(image.cols()));
  for (Eigen::Index j = 0; j < image.cols(); ++j) cols.emplace_back(image.col(j));
  Subspace out = Subspace::spanned_by(cols, tol);
  if (out.dim() != s.dim()) {
    throw Error(ErrorKind::SingularOperator, "image lost dimension under rank policy");
  }
  return out;
}

MeasureSpace product_space(const MeasureSpace& x, const MeasureSpace& y) {
  std::vector<Atom> atoms;
  atoms.reserve(x.size() * y.size());
  for (const Atom& a : x.atoms()) {
    for (const Atom& b : y.atoms()) {
      atoms.push_back({"(" + a.id + "," + b.id + ")", a.mass * b.mass});
    }
  }
  return MeasureSpace(std::move(atoms));
}

}  // namespace cfuse
