#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "cfuse/cfusion.hpp"

namespace cfuse {

/// Seeded engine used for every randomized probe and generator.
using Rng = std::mt19937_64;

/// Standard Gaussian entries; imaginary parts are zero unless `complex_field`.
Vector random_gaussian_vector(Rng& rng, Eigen::Index n, bool complex_field);
Matrix random_gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, bool complex_field);
/// Uniform on the unit sphere of C^n (or R^n).
Vector random_unit_vector(Rng& rng, Eigen::Index n, bool complex_field);
/// Random d-dimensional subspace of C^n (or R^n).
Subspace random_subspace(Rng& rng, Eigen::Index n, Eigen::Index d, bool complex_field);

struct IntRange {
  int min = 1;
  int max = 1;
};

struct RealRange {
  double min = 1.0;
  double max = 1.0;
};

/// Parameters for generate_random_frame. All ranges are inclusive.
struct RandomFrameSpec {
  std::uint64_t seed = 1;
  IntRange ambient_dim{2, 4};
  IntRange atoms{1, 6};
  IntRange fiber_dim{1, 8};  // clamped to the ambient dimension
  RealRange weight{0.5, 2.0};
  RealRange mass{0.5, 2.0};
  bool complex_field = true;
  /// Add a full-space atom (or widen the last one) when lambda_min(S) is below
  /// frame_threshold.
  bool ensure_frame = false;
  double frame_threshold = 1e-3;

  /// Throws InvalidArgument on empty or non-positive ranges.
  void validate() const;
};

/// Deterministic for a fixed spec (including seed).
CFusionFrame generate_random_frame(const RandomFrameSpec& spec);
/// Same, drawing from an existing engine (for suites that chain draws).
CFusionFrame generate_random_frame(const RandomFrameSpec& spec, Rng& rng);

}  // namespace cfuse
