#pragma once

#include <vector>

#include "cfuse/cfusion.hpp"
#include "cfuse/qdual.hpp"

namespace cfuse {

/// A finite continuous frame: one vector per atom of a measure space.
class ContinuousFrame {
 public:
  ContinuousFrame(MeasureSpace space, std::vector<Vector> vectors);

  const MeasureSpace& space() const noexcept { return space_; }
  const std::vector<Vector>& vectors() const noexcept { return vectors_; }
  Eigen::Index ambient_dim() const noexcept { return vectors_.front().size(); }

 private:
  MeasureSpace space_;
  std::vector<Vector> vectors_;
};

/// sum_i mu_i g_i g_i^*.
Matrix frame_operator(const ContinuousFrame& cf);
FrameBounds frame_bounds(const ContinuousFrame& cf, const Tolerances& tol = {});

/// Fiber tolerance for local vectors: ||u - pi_F u|| <= kFiberTol max(1, ||u||).
inline constexpr double kFiberTol = 1e-10;

/// For every atom x of a base space X, a continuous frame F_x for the fiber
/// F(x) indexed by a shared inner space Y. Vectors are stored ambiently.
class LocalFrameFamily {
 public:
  /// vectors[x][y] = F_x(y). Throws FiberViolation if a vector leaves its
  /// fiber, NotAFrame if some F_x does not span F(x), DimensionMismatch on
  /// shape errors.
  LocalFrameFamily(MeasureSpace base, MeasureSpace inner, std::vector<Subspace> fibers,
                   std::vector<std::vector<Vector>> vectors, const Tolerances& tol = {});

  const MeasureSpace& base() const noexcept { return base_; }
  const MeasureSpace& inner() const noexcept { return inner_; }
  const std::vector<Subspace>& fibers() const noexcept { return fibers_; }
  const std::vector<std::vector<Vector>>& vectors() const noexcept { return vectors_; }
  Eigen::Index ambient_dim() const noexcept { return fibers_.front().ambient_dim(); }

  /// Spectral extremes of the local frame operator restricted to F(x).
  const std::vector<SpectralExtremes>& local_bounds() const noexcept { return local_bounds_; }
  /// inf_x A_x.
  double lower() const noexcept;
  /// sup_x B_x.
  double upper() const noexcept;

  /// The c-fusion family (F, v) carried by this family's fibers.
  CFusionFrame fusion(const WeightMap& v) const;

 private:
  MeasureSpace base_;
  MeasureSpace inner_;
  std::vector<Subspace> fibers_;
  std::vector<std::vector<Vector>> vectors_;
  std::vector<SpectralExtremes> local_bounds_;
};

/// Local frame operator of F_x as an ambient n x n matrix.
Matrix local_frame_operator(const LocalFrameFamily& l, std::size_t atom);

/// The family v(x) F_x(y) over product_space(X, Y).
ContinuousFrame glue(const LocalFrameFamily& l, const WeightMap& v);

struct GlueReport {
  double local_lower = 0.0;  // A = inf A_x
  double local_upper = 0.0;  // B = sup B_x
  FrameBounds cfusion;       // bounds of (F, v)
  FrameBounds glued;         // bounds of the glued continuous frame
  bool sandwich_holds = false;
};

/// Bounds of both sides and the two-sided estimate
///   A A_{F,v} <= A_glued <= B_glued <= B B_{F,v}   (slack residual_tol).
GlueReport glue_report(const LocalFrameFamily& l, const WeightMap& v, const Tolerances& tol = {});

struct EquivalenceProbe {
  bool cfusion_is_frame = false;
  bool glued_is_frame = false;
  bool agree = false;
};

EquivalenceProbe equivalence_probe(const LocalFrameFamily& l, const WeightMap& v, const Tolerances& tol = {});

/// Block-diagonal Q whose block at x is the coordinate form of
/// T_{G_x} T_{F_x}^* : F(x) -> G(x). Frames are the c-fusion families carried
/// by `lf` and `lg` (weights do not enter Q).
QOperator q_from_local_duals(const LocalFrameFamily& lf, const LocalFrameFamily& lg);

/// Per atom x: ||T_{w(x) G_x} T_{v(x) F_x}^* - I|| on the ambient space.
/// A zero entry means (v(x) F_x, w(x) G_x) is a dual pair for the whole space.
std::vector<double> local_dual_pair_residuals(const LocalFrameFamily& lf, const WeightMap& v,
                                              const LocalFrameFamily& lg, const WeightMap& w);

}  // namespace cfuse
