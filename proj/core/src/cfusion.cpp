#include "cfuse/cfusion.hpp"

#include <cmath>

#include "cfuse/error.hpp"

namespace cfuse {

CFusionFrame::CFusionFrame(MeasureSpace space, std::vector<Subspace> fibers, WeightMap weights)
    : space_(std::move(space)), fibers_(std::move(fibers)), weights_(std::move(weights)) {
  if (fibers_.size() != space_.size() || weights_.size() != space_.size()) {
    throw Error(ErrorKind::DimensionMismatch, "need exactly one fiber and one weight per atom");
  }
  const Eigen::Index n = fibers_.front().ambient_dim();
  offsets_.reserve(fibers_.size() + 1);
  offsets_.push_back(0);
  for (const Subspace& s : fibers_) {
    if (s.ambient_dim() != n) throw Error(ErrorKind::DimensionMismatch, "fibers disagree on ambient dimension");
    offsets_.push_back(offsets_.back() + s.dim());
  }
}

std::string_view to_string(FrameClass c) noexcept {
  switch (c) {
    case FrameClass::frame: return "frame";
    case FrameClass::bessel_only: return "bessel_only";
    case FrameClass::not_bessel_never_occurs_finite: return "not_bessel_never_occurs_finite";
    case FrameClass::degenerate: return "degenerate";
  }
  return "unknown";
}

Matrix synthesis_matrix(const CFusionFrame& f) {
  Matrix t(f.ambient_dim(), f.coord_dim());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double scale = std::sqrt(f.space().mass(i)) * f.weights()[i];
    t.middleCols(f.block_offset(i), f.fiber(i).dim()) = scale * f.fiber(i).basis();
  }
  return t;
}

Matrix analysis_matrix(const CFusionFrame& f) {
  return synthesis_matrix(f).adjoint();
}

Matrix frame_operator(const CFusionFrame& f) {
  const Eigen::Index n = f.ambient_dim();
  Matrix s = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = f.weights()[i];
    s += (f.space().mass(i) * v * v) * projection(f.fiber(i));
  }
  return (s + s.adjoint()) * 0.5;
}

FrameBounds frame_bounds(const CFusionFrame& f, const Tolerances& tol) {
  const SpectralExtremes ext = hermitian_extremes(frame_operator(f));
  FrameBounds b;
  b.lower = std::max(ext.min, 0.0);
  b.upper = ext.max;
  b.classification = b.lower > tol.psd_tol ? FrameClass::frame : FrameClass::bessel_only;
  b.tight = b.is_frame() && std::abs(b.upper - b.lower) <= kParsevalTol;
  b.parseval = std::abs(b.lower - 1.0) <= kParsevalTol && std::abs(b.upper - 1.0) <= kParsevalTol;
  return b;
}

Vector reconstruct(const CFusionFrame& f, const Vector& h, const Tolerances& tol) {
  if (h.size() != f.ambient_dim()) throw Error(ErrorKind::DimensionMismatch, "vector has wrong dimension");
  const Matrix s = frame_operator(f);
  if (hermitian_extremes(s).min <= tol.psd_tol) {
    throw Error(ErrorKind::NotAFrame, "lower frame bound is not above psd_tol");
  }
  Vector acc = Vector::Zero(h.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = f.weights()[i];
    const Matrix& b = f.fiber(i).basis();
    acc += (f.space().mass(i) * v * v) * (b * (b.adjoint() * h));
  }
  return solve_hpd(s, acc, tol);
}

CFusionFrame from_discrete_frame(std::span<const Vector> vectors, const Tolerances& tol) {
  if (vectors.empty()) throw Error(ErrorKind::InvalidArgument, "discrete frame needs at least one vector");
  std::vector<Subspace> fibers;
  std::vector<double> weights;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const double norm = vectors[i].norm();
    if (!(norm > 0.0)) throw Error(ErrorKind::ZeroVector, "frame vector " + std::to_string(i) + " is zero");
    const Vector unit = vectors[i] / norm;
    fibers.push_back(Subspace::spanned_by(std::span<const Vector>(&unit, 1), tol));
    weights.push_back(norm);
  }
  return CFusionFrame(MeasureSpace::counting(vectors.size()), std::move(fibers), WeightMap(std::move(weights)));
}

CFusionFrame from_fusion_frame(std::vector<Subspace> subspaces, std::vector<double> weights) {
  if (subspaces.size() != weights.size()) {
    throw Error(ErrorKind::DimensionMismatch, "subspace and weight counts differ");
  }
  if (subspaces.empty()) throw Error(ErrorKind::InvalidArgument, "fusion frame needs at least one subspace");
  const std::size_t m = subspaces.size();
  return CFusionFrame(MeasureSpace::counting(m), std::move(subspaces), WeightMap(std::move(weights)));
}

Vector to_coords(const CFusionFrame& f, const FiberField& field, double fiber_tol) {
  if (field.size() != f.size()) throw Error(ErrorKind::DimensionMismatch, "field needs one vector per atom");
  Vector c(f.coord_dim());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Subspace& s = f.fiber(i);
    if (field[i].size() != s.ambient_dim()) throw Error(ErrorKind::DimensionMismatch, "field vector has wrong dimension");
    if (s.distance(field[i]) > fiber_tol * std::max(1.0, field[i].norm())) {
      throw Error(ErrorKind::FiberViolation, "field value leaves its fiber at atom " + std::to_string(i));
    }
    c.segment(f.block_offset(i), s.dim()) = std::sqrt(f.space().mass(i)) * (s.basis().adjoint() * field[i]);
  }
  return c;
}

FiberField from_coords(const CFusionFrame& f, const Vector& coords) {
  if (coords.size() != f.coord_dim()) throw Error(ErrorKind::DimensionMismatch, "coordinate vector has wrong length");
  FiberField field;
  field.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Subspace& s = f.fiber(i);
    field.emplace_back(s.basis() * coords.segment(f.block_offset(i), s.dim()) / std::sqrt(f.space().mass(i)));
  }
  return field;
}

bool share_domain(const CFusionFrame& a, const CFusionFrame& b) noexcept {
  return a.space() == b.space() && a.ambient_dim() == b.ambient_dim();
}

}  // namespace cfuse
