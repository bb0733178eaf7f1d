#pragma once

#include <span>
#include <string>
#include <vector>

#include "cfuse/numerics.hpp"

namespace cfuse {

struct Atom {
  std::string id;
  double mass = 0.0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// A finite atomic measure space. Integrals over it are mass-weighted sums.
class MeasureSpace {
 public:
  /// Throws InvariantError on an empty list, a non-positive or non-finite
  /// mass, or a repeated id.
  explicit MeasureSpace(std::vector<Atom> atoms);

  /// Atoms named "a0", "a1", ... with the given masses.
  static MeasureSpace from_masses(std::span<const double> masses);
  /// n atoms of mass 1.
  static MeasureSpace counting(std::size_t n);

  std::size_t size() const noexcept { return atoms_.size(); }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const Atom& atom(std::size_t i) const { return atoms_.at(i); }
  double mass(std::size_t i) const { return atoms_.at(i).mass; }
  double total_mass() const noexcept;
  /// Index of the atom with this id, or size() when absent.
  std::size_t index_of(const std::string& id) const noexcept;

  friend bool operator==(const MeasureSpace&, const MeasureSpace&) = default;

 private:
  std::vector<Atom> atoms_;
};

/// v(x) at every atom. Strictly positive: on an atomic space "nonzero almost
/// everywhere" means nonzero at each atom.
class WeightMap {
 public:
  explicit WeightMap(std::vector<double> values);

  static WeightMap constant(std::size_t n, double value);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_.at(i); }
  const std::vector<double>& values() const noexcept { return values_; }

  friend bool operator==(const WeightMap&, const WeightMap&) = default;

 private:
  std::vector<double> values_;
};

/// Nonzero subspace of C^n carried by an orthonormal basis (n x k, k >= 1).
class Subspace {
 public:
  /// Validates orthonormality of `basis` to 1e-10.
  explicit Subspace(Matrix basis);

  /// Orthonormalized span of the given vectors.
  static Subspace spanned_by(std::span<const Vector> vectors, const Tolerances& tol = {});
  static Subspace full(Eigen::Index n);
  /// span{e_i} in C^n.
  static Subspace coordinate_axis(Eigen::Index n, Eigen::Index i);

  Eigen::Index ambient_dim() const noexcept { return basis_.rows(); }
  Eigen::Index dim() const noexcept { return basis_.cols(); }
  const Matrix& basis() const noexcept { return basis_; }

  /// Same span as `other` (projections agree to `tol`).
  bool same_span(const Subspace& other, double tol = 1e-8) const;
  /// Distance of v from the subspace, ||v - P v||.
  double distance(const Vector& v) const;

 private:
  Matrix basis_;
};

/// Orthogonal projection basis * basis^* onto s.
Matrix projection(const Subspace& s);

/// Orthonormalized span of m * basis(s). Throws SingularOperator when m is
/// not numerically invertible.
Subspace image_subspace(const Matrix& m, const Subspace& s, const Tolerances& tol = {});

/// Ordered pairs (x, y) with mass(x) * mass(y); ids are "(x,y)", x-major.
MeasureSpace product_space(const MeasureSpace& x, const MeasureSpace& y);

}  // namespace cfuse
