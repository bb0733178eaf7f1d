#include "cfuse/random.hpp"

#include <algorithm>
#include <cmath>

#include "cfuse/error.hpp"

namespace cfuse {

Vector random_gaussian_vector(Rng& rng, Eigen::Index n, bool complex_field) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = complex_field ? normal(rng) : 0.0;
    v(i) = Scalar(re, im);
  }
  return v;
}

Matrix random_gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, bool complex_field) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) m.col(j) = random_gaussian_vector(rng, rows, complex_field);
  return m;
}

Vector random_unit_vector(Rng& rng, Eigen::Index n, bool complex_field) {
  for (;;) {
    Vector v = random_gaussian_vector(rng, n, complex_field);
    const double norm = v.norm();
    if (norm > 1e-12) return v / norm;
  }
}

Subspace random_subspace(Rng& rng, Eigen::Index n, Eigen::Index d, bool complex_field) {
  for (;;) {
    std::vector<Vector> vs;
    vs.reserve(static_cast<std::size_t>(d));
    for (Eigen::Index j = 0; j < d; ++j) vs.push_back(random_gaussian_vector(rng, n, complex_field));
    Subspace s = Subspace::spanned_by(vs);
    if (s.dim() == d) return s;
  }
}

void RandomFrameSpec::validate() const {
  auto bad_int = [](IntRange r) { return r.min < 1 || r.max < r.min; };
  auto bad_real = [](RealRange r) { return !(r.min > 0.0) || !(r.max >= r.min) || !std::isfinite(r.max); };
  if (bad_int(ambient_dim) || bad_int(atoms) || bad_int(fiber_dim) || bad_real(weight) || bad_real(mass)) {
    throw Error(ErrorKind::InvalidArgument, "random frame spec has an empty or non-positive range");
  }
  if (!(frame_threshold > 0.0)) throw Error(ErrorKind::InvalidArgument, "frame_threshold must be positive");
}

CFusionFrame generate_random_frame(const RandomFrameSpec& spec) {
  Rng rng(spec.seed);
  return generate_random_frame(spec, rng);
}

CFusionFrame generate_random_frame(const RandomFrameSpec& spec, Rng& rng) {
  spec.validate();
  auto draw_int = [&rng](IntRange r) { return std::uniform_int_distribution<int>(r.min, r.max)(rng); };
  auto draw_real = [&rng](RealRange r) {
    return r.min == r.max ? r.min : std::uniform_real_distribution<double>(r.min, r.max)(rng);
  };

  const int n = draw_int(spec.ambient_dim);
  const int count = draw_int(spec.atoms);
  std::vector<double> masses;
  std::vector<double> weights;
  std::vector<Subspace> fibers;
  for (int i = 0; i < count; ++i) {
    const int hi = std::min(spec.fiber_dim.max, n);
    const int lo = std::min(spec.fiber_dim.min, hi);
    const int d = draw_int({lo, hi});
    fibers.push_back(random_subspace(rng, n, d, spec.complex_field));
    masses.push_back(draw_real(spec.mass));
    weights.push_back(draw_real(spec.weight));
  }

  CFusionFrame f(MeasureSpace::from_masses(masses), fibers, WeightMap(weights));
  if (!spec.ensure_frame) return f;
  if (hermitian_extremes(frame_operator(f)).min >= spec.frame_threshold) return f;

  // mu v^2 of a full-space atom lower-bounds lambda_min. Append one, or widen
  // the last fiber when the atom budget is spent.
  double mass = draw_real(spec.mass);
  double weight = draw_real(spec.weight);
  if (mass * weight * weight < spec.frame_threshold) weight = std::sqrt(spec.frame_threshold / mass) * 2.0;
  if (count < spec.atoms.max) {
    masses.push_back(mass);
    weights.push_back(weight);
    fibers.push_back(Subspace::full(n));
  } else {
    masses.back() = mass;
    weights.back() = weight;
    fibers.back() = Subspace::full(n);
  }
  return CFusionFrame(MeasureSpace::from_masses(masses), std::move(fibers), WeightMap(std::move(weights)));
}

}  // namespace cfuse
