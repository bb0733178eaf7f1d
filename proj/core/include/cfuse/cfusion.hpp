#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "cfuse/numerics.hpp"
#include "cfuse/space.hpp"

namespace cfuse {

/// A weighted family (F, v) of subspaces indexed by a finite measure space.
///
/// Elements of the fiber space L^2(X, F) are handled in measure-scaled fiber
/// coordinates: block i holds sqrt(mu_i) * basis_i^* f(x_i), so the Euclidean
/// norm of the stacked coordinates is the L^2(X, F) norm and matrix spectral
/// norms are operator norms.
class CFusionFrame {
 public:
  /// Throws DimensionMismatch when fiber/weight counts differ from the atom
  /// count or fibers disagree on the ambient dimension.
  CFusionFrame(MeasureSpace space, std::vector<Subspace> fibers, WeightMap weights);

  const MeasureSpace& space() const noexcept { return space_; }
  const std::vector<Subspace>& fibers() const noexcept { return fibers_; }
  const Subspace& fiber(std::size_t i) const { return fibers_.at(i); }
  const WeightMap& weights() const noexcept { return weights_; }

  std::size_t size() const noexcept { return fibers_.size(); }
  Eigen::Index ambient_dim() const noexcept { return fibers_.front().ambient_dim(); }
  /// K = sum of fiber dimensions (length of a coordinate vector).
  Eigen::Index coord_dim() const noexcept { return offsets_.back(); }
  /// Start of atom i's coordinate block; offsets()[size()] == coord_dim().
  Eigen::Index block_offset(std::size_t i) const { return offsets_.at(i); }
  const std::vector<Eigen::Index>& offsets() const noexcept { return offsets_; }

 private:
  MeasureSpace space_;
  std::vector<Subspace> fibers_;
  WeightMap weights_;
  std::vector<Eigen::Index> offsets_;
};

enum class FrameClass {
  frame,
  bessel_only,
  // Kept for report compatibility; finite families are always Bessel and
  // validated families always act nontrivially, so neither is produced.
  not_bessel_never_occurs_finite,
  degenerate,
};

std::string_view to_string(FrameClass c) noexcept;

/// Optimal frame bounds: the spectral extremes of the frame operator.
struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
  FrameClass classification = FrameClass::bessel_only;
  bool tight = false;
  bool parseval = false;

  bool is_frame() const noexcept { return classification == FrameClass::frame; }
};

/// Parseval / tight detection slack.
inline constexpr double kParsevalTol = 1e-8;

/// n x K matrix whose block i is sqrt(mu_i) v_i basis_i.
Matrix synthesis_matrix(const CFusionFrame& f);
/// K x n conjugate transpose of the synthesis matrix: h -> v pi_F(h).
Matrix analysis_matrix(const CFusionFrame& f);
/// sum_i mu_i v_i^2 pi_i.
Matrix frame_operator(const CFusionFrame& f);
FrameBounds frame_bounds(const CFusionFrame& f, const Tolerances& tol = {});

/// sum_i mu_i v_i^2 S^{-1} pi_i h. Throws NotAFrame when A <= psd_tol.
Vector reconstruct(const CFusionFrame& f, const Vector& h, const Tolerances& tol = {});

/// Discrete frame {h_i} as one-dimensional fibers span{h_i} with weights
/// ||h_i|| over counting measure, so the frame operator is sum h_i h_i^*.
CFusionFrame from_discrete_frame(std::span<const Vector> vectors, const Tolerances& tol = {});

/// Fusion frame {(W_i, v_i)} over counting measure.
CFusionFrame from_fusion_frame(std::vector<Subspace> subspaces, std::vector<double> weights);

/// A field f in L^2(X, F), stored ambiently: one vector f(x_i) in F(x_i) per atom.
using FiberField = std::vector<Vector>;

/// Scaled coordinates of a field; throws FiberViolation if some f(x_i) leaves F(x_i).
Vector to_coords(const CFusionFrame& f, const FiberField& field, double fiber_tol = 1e-10);
/// Field represented by scaled coordinates.
FiberField from_coords(const CFusionFrame& f, const Vector& coords);

/// True when both families live on the same atoms and ambient space.
bool share_domain(const CFusionFrame& a, const CFusionFrame& b) noexcept;

}  // namespace cfuse
