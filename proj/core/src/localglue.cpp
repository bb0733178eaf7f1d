#include "cfuse/localglue.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cfuse/error.hpp"

namespace cfuse {

ContinuousFrame::ContinuousFrame(MeasureSpace space, std::vector<Vector> vectors)
    : space_(std::move(space)), vectors_(std::move(vectors)) {
  if (vectors_.size() != space_.size()) {
    throw Error(ErrorKind::DimensionMismatch, "continuous frame needs one vector per atom");
  }
  for (const Vector& v : vectors_) {
    if (v.size() != vectors_.front().size() || v.size() < 1) {
      throw Error(ErrorKind::DimensionMismatch, "continuous frame vectors disagree on dimension");
    }
  }
}

Matrix frame_operator(const ContinuousFrame& cf) {
  const Eigen::Index n = cf.ambient_dim();
  Matrix s = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < cf.vectors().size(); ++i) {
    const Vector& g = cf.vectors()[i];
    s += cf.space().mass(i) * (g * g.adjoint());
  }
  return (s + s.adjoint()) * 0.5;
}

FrameBounds frame_bounds(const ContinuousFrame& cf, const Tolerances& tol) {
  const SpectralExtremes ext = hermitian_extremes(frame_operator(cf));
  FrameBounds b;
  b.lower = std::max(ext.min, 0.0);
  b.upper = ext.max;
  b.classification = b.lower > tol.psd_tol ? FrameClass::frame : FrameClass::bessel_only;
  b.tight = b.is_frame() && std::abs(b.upper - b.lower) <= kParsevalTol;
  b.parseval = std::abs(b.lower - 1.0) <= kParsevalTol && std::abs(b.upper - 1.0) <= kParsevalTol;
  return b;
}

LocalFrameFamily::LocalFrameFamily(MeasureSpace base, MeasureSpace inner, std::vector<Subspace> fibers,
                                   std::vector<std::vector<Vector>> vectors, const Tolerances& tol)
    : base_(std::move(base)), inner_(std::move(inner)), fibers_(std::move(fibers)), vectors_(std::move(vectors)) {
  if (fibers_.size() != base_.size() || vectors_.size() != base_.size()) {
    throw Error(ErrorKind::DimensionMismatch, "need one fiber and one local frame per base atom");
  }
  const Eigen::Index n = fibers_.front().ambient_dim();
  for (std::size_t x = 0; x < base_.size(); ++x) {
    if (fibers_[x].ambient_dim() != n) throw Error(ErrorKind::DimensionMismatch, "fibers disagree on dimension");
    if (vectors_[x].size() != inner_.size()) {
      throw Error(ErrorKind::DimensionMismatch, "local frame at base atom " + std::to_string(x) +
                                                    " needs one vector per inner atom");
    }
    for (std::size_t y = 0; y < inner_.size(); ++y) {
      const Vector& u = vectors_[x][y];
      if (u.size() != n) throw Error(ErrorKind::DimensionMismatch, "local vector has wrong dimension");
      if (fibers_[x].distance(u) > kFiberTol * std::max(1.0, u.norm())) {
        throw Error(ErrorKind::FiberViolation, "local vector (" + std::to_string(x) + ", " + std::to_string(y) +
                                                   ") leaves its fiber");
      }
    }
    const Matrix& b = fibers_[x].basis();
    const Matrix restricted = b.adjoint() * local_frame_operator(*this, x) * b;
    const SpectralExtremes ext = hermitian_extremes((restricted + restricted.adjoint()) * 0.5);
    if (ext.min <= tol.psd_tol) {
      throw Error(ErrorKind::NotAFrame, "local family at base atom " + std::to_string(x) + " does not span its fiber");
    }
    local_bounds_.push_back(ext);
  }
}

double LocalFrameFamily::lower() const noexcept {
  double a = std::numeric_limits<double>::infinity();
  for (const SpectralExtremes& e : local_bounds_) a = std::min(a, e.min);
  return a;
}

double LocalFrameFamily::upper() const noexcept {
  double b = 0.0;
  for (const SpectralExtremes& e : local_bounds_) b = std::max(b, e.max);
  return b;
}

CFusionFrame LocalFrameFamily::fusion(const WeightMap& v) const {
  return CFusionFrame(base_, fibers_, v);
}

Matrix local_frame_operator(const LocalFrameFamily& l, std::size_t atom) {
  const Eigen::Index n = l.ambient_dim();
  Matrix s = Matrix::Zero(n, n);
  for (std::size_t y = 0; y < l.inner().size(); ++y) {
    const Vector& u = l.vectors().at(atom)[y];
    s += l.inner().mass(y) * (u * u.adjoint());
  }
  return s;
}

ContinuousFrame glue(const LocalFrameFamily& l, const WeightMap& v) {
  if (v.size() != l.base().size()) throw Error(ErrorKind::DimensionMismatch, "weight map size differs from base");
  std::vector<Vector> vectors;
  vectors.reserve(l.base().size() * l.inner().size());
  for (std::size_t x = 0; x < l.base().size(); ++x) {
    for (std::size_t y = 0; y < l.inner().size(); ++y) vectors.push_back(v[x] * l.vectors()[x][y]);
  }
  return ContinuousFrame(product_space(l.base(), l.inner()), std::move(vectors));
}

GlueReport glue_report(const LocalFrameFamily& l, const WeightMap& v, const Tolerances& tol) {
  GlueReport r;
  r.local_lower = l.lower();
  r.local_upper = l.upper();
  r.cfusion = frame_bounds(l.fusion(v), tol);
  r.glued = frame_bounds(glue(l, v), tol);
  const double slack = tol.residual_tol;
  r.sandwich_holds = r.local_lower * r.cfusion.lower <= r.glued.lower + slack &&
                     r.glued.lower <= r.glued.upper + slack &&
                     r.glued.upper <= r.local_upper * r.cfusion.upper + slack;
  return r;
}

EquivalenceProbe equivalence_probe(const LocalFrameFamily& l, const WeightMap& v, const Tolerances& tol) {
  EquivalenceProbe p;
  p.cfusion_is_frame = frame_bounds(l.fusion(v), tol).is_frame();
  p.glued_is_frame = frame_bounds(glue(l, v), tol).is_frame();
  p.agree = p.cfusion_is_frame == p.glued_is_frame;
  return p;
}

QOperator q_from_local_duals(const LocalFrameFamily& lf, const LocalFrameFamily& lg) {
  if (!(lf.base() == lg.base()) || !(lf.inner() == lg.inner()) || lf.ambient_dim() != lg.ambient_dim()) {
    throw Error(ErrorKind::ShapeMismatch, "local families must share base space, inner space and dimension");
  }
  const CFusionFrame f = lf.fusion(WeightMap::constant(lf.base().size(), 1.0));
  const CFusionFrame g = lg.fusion(WeightMap::constant(lg.base().size(), 1.0));
  QOperator q = QOperator::zero(f, g);
  const Eigen::Index n = lf.ambient_dim();
  for (std::size_t x = 0; x < lf.base().size(); ++x) {
    Matrix local = Matrix::Zero(n, n);  // T_{G_x} T_{F_x}^*
    for (std::size_t y = 0; y < lf.inner().size(); ++y) {
      local += lf.inner().mass(y) * (lg.vectors()[x][y] * lf.vectors()[x][y].adjoint());
    }
    q.set_block(f, g, x, x, g.fiber(x).basis().adjoint() * local * f.fiber(x).basis());
  }
  return q;
}

std::vector<double> local_dual_pair_residuals(const LocalFrameFamily& lf, const WeightMap& v,
                                              const LocalFrameFamily& lg, const WeightMap& w) {
  if (!(lf.base() == lg.base()) || !(lf.inner() == lg.inner()) || lf.ambient_dim() != lg.ambient_dim()) {
    throw Error(ErrorKind::ShapeMismatch, "local families must share base space, inner space and dimension");
  }
  if (v.size() != lf.base().size() || w.size() != lg.base().size()) {
    throw Error(ErrorKind::DimensionMismatch, "weight map size differs from base");
  }
  const Eigen::Index n = lf.ambient_dim();
  std::vector<double> out;
  out.reserve(lf.base().size());
  for (std::size_t x = 0; x < lf.base().size(); ++x) {
    Matrix local = Matrix::Zero(n, n);
    for (std::size_t y = 0; y < lf.inner().size(); ++y) {
      local += lf.inner().mass(y) * (lg.vectors()[x][y] * lf.vectors()[x][y].adjoint());
    }
    out.push_back(spectral_norm(v[x] * w[x] * local - Matrix::Identity(n, n)));
  }
  return out;
}

}  // namespace cfuse
