#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "cfuse/cfusion.hpp"
#include "cfuse/error.hpp"
#include "cfuse/random.hpp"
#include "cfuse/scenario.hpp"
#include "test_util.hpp"

namespace cfuse {
namespace {

using test::mat;
using test::max_abs;
using test::vec;

// Two unit-mass atoms, weights 1, fibers span{e1} and span{(e1+e2)/sqrt2}.
CFusionFrame skewed_pair() {
  const std::vector<Vector> diag{vec({1, 1})};
  return CFusionFrame(MeasureSpace::counting(2), {Subspace::coordinate_axis(2, 0), Subspace::spanned_by(diag)},
                      WeightMap({1.0, 1.0}));
}

RandomFrameSpec suite_spec(std::uint64_t seed) {
  RandomFrameSpec spec;
  spec.seed = seed;
  spec.ambient_dim = {1, 10};
  spec.atoms = {1, 8};
  spec.fiber_dim = {1, 10};
  return spec;
}

TEST(Synthesis, SingleFullAtomIsIdentity) {
  const CFusionFrame f(MeasureSpace::counting(1), {Subspace::full(2)}, WeightMap({1.0}));
  EXPECT_LT(max_abs(synthesis_matrix(f) - Matrix::Identity(2, 2)), 1e-15);
}

TEST(Synthesis, MassScalesColumns) {
  const CFusionFrame f(MeasureSpace({{"x", 4.0}}), {Subspace::coordinate_axis(2, 0)}, WeightMap({1.0}));
  EXPECT_LT(max_abs(synthesis_matrix(f) - mat({{2}, {0}})), 1e-15);
}

TEST(Synthesis, DiskExampleIsIdentity) {
  const DiskExample d = build_disk_example(1.5, M_PI - 1.5);
  EXPECT_LT(max_abs(synthesis_matrix(d.frame) - Matrix::Identity(2, 2)), 1e-15);
  // G's fibers are swapped, so its synthesis matrix is the column permutation.
  EXPECT_LT(max_abs(synthesis_matrix(d.dual) - mat({{0, 1}, {1, 0}})), 1e-15);
}

TEST(Synthesis, AppliedToCoordinatesEqualsWeightedIntegral) {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const CFusionFrame f = generate_random_frame(suite_spec(1000 + trial));
    FiberField field;
    for (const Subspace& s : f.fibers()) field.push_back(s.basis() * random_gaussian_vector(rng, s.dim(), true));
    Vector direct = Vector::Zero(f.ambient_dim());
    for (std::size_t i = 0; i < f.size(); ++i) direct += f.space().mass(i) * f.weights()[i] * field[i];
    const Vector c = to_coords(f, field);
    EXPECT_LT((synthesis_matrix(f) * c - direct).norm(), 1e-10 * std::max(1.0, direct.norm()));
    // Coordinates are isometric for the L^2(X, F) norm.
    double l2 = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) l2 += f.space().mass(i) * field[i].squaredNorm();
    EXPECT_NEAR(c.squaredNorm(), l2, 1e-10 * std::max(1.0, l2));
    const FiberField back = from_coords(f, c);
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_LT((back[i] - field[i]).norm(), 1e-10);
  }
}

TEST(Synthesis, CoordinatesRejectOffFiberField) {
  const CFusionFrame f(MeasureSpace::counting(1), {Subspace::coordinate_axis(2, 0)}, WeightMap({1.0}));
  try {
    (void)to_coords(f, {vec({0, 1})});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::FiberViolation);
  }
}

TEST(FrameOperator, Examples) {
  const DiskExample d = build_disk_example(1.5, M_PI - 1.5);
  EXPECT_LT(max_abs(frame_operator(d.frame) - Matrix::Identity(2, 2)), 1e-15);

  // pi_{e1} + pi_{(e1+e2)/sqrt2} = [[1,0],[0,0]] + [[.5,.5],[.5,.5]].
  const Matrix by_hand = mat({{1, 0}, {0, 0}}) + mat({{.5, .5}, {.5, .5}});
  EXPECT_LT(max_abs(frame_operator(skewed_pair()) - by_hand), 1e-15);
  EXPECT_LT(max_abs(by_hand - mat({{1.5, .5}, {.5, .5}})), 1e-15);

  const CFusionFrame single(MeasureSpace({{"x", 2.5}}), {Subspace::full(3)}, WeightMap({0.7}));
  EXPECT_LT(max_abs(frame_operator(single) - 2.5 * 0.49 * Matrix::Identity(3, 3)), 1e-15);
}

TEST(FrameOperator, MatchesSynthesisTimesAnalysisOnRandomFrames) {
  for (int trial = 0; trial < 1000; ++trial) {
    const CFusionFrame f = generate_random_frame(suite_spec(trial));
    const Matrix t = synthesis_matrix(f);
    const Matrix s = frame_operator(f);
    EXPECT_LE(max_abs(s - t * t.adjoint()), 1e-10);
    EXPECT_GE(hermitian_extremes(s).min, -1e-10);
  }
}

TEST(FrameBounds, Examples) {
  const DiskExample d = build_disk_example(1.5, M_PI - 1.5);
  FrameBounds b = frame_bounds(d.frame);
  EXPECT_NEAR(b.lower, 1.0, 1e-12);
  EXPECT_NEAR(b.upper, 1.0, 1e-12);
  EXPECT_TRUE(b.parseval);
  EXPECT_TRUE(b.tight);
  EXPECT_EQ(b.classification, FrameClass::frame);

  b = frame_bounds(skewed_pair());
  EXPECT_NEAR(b.lower, 1.0 - M_SQRT2 / 2.0, 1e-14);
  EXPECT_NEAR(b.upper, 1.0 + M_SQRT2 / 2.0, 1e-14);
  EXPECT_FALSE(b.parseval);

  const CFusionFrame flat(MeasureSpace::counting(2), {Subspace::coordinate_axis(2, 0), Subspace::coordinate_axis(2, 0)},
                          WeightMap({1.0, 1.0}));
  b = frame_bounds(flat);
  EXPECT_EQ(b.lower, 0.0);
  EXPECT_EQ(b.classification, FrameClass::bessel_only);
}

TEST(FrameBounds, CertifiedByProjectionEnergies) {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const CFusionFrame f = generate_random_frame(suite_spec(5000 + trial));
    const FrameBounds b = frame_bounds(f);
    for (int k = 0; k < 100; ++k) {
      const Vector h = random_unit_vector(rng, f.ambient_dim(), true);
      double energy = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) {
        const double v = f.weights()[i];
        energy += f.space().mass(i) * v * v * (f.fiber(i).basis().adjoint() * h).squaredNorm();
      }
      EXPECT_GE(energy, b.lower - 1e-8);
      EXPECT_LE(energy, b.upper + 1e-8);
    }
  }
}

TEST(Analysis, IsAdjointOfSynthesis) {
  Rng rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    const CFusionFrame f = generate_random_frame(suite_spec(9000 + trial));
    const Vector c = random_gaussian_vector(rng, f.coord_dim(), true);
    const Vector h = random_gaussian_vector(rng, f.ambient_dim(), true);
    const Scalar lhs = h.dot(synthesis_matrix(f) * c);
    const Scalar rhs = (analysis_matrix(f) * h).dot(c);
    EXPECT_LT(std::abs(lhs - rhs), 1e-10 * std::max(1.0, std::abs(lhs)));
    // T^* h = v pi_F(h) fiber by fiber.
    const FiberField field = from_coords(f, analysis_matrix(f) * h);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const Vector expected = f.weights()[i] * (projection(f.fiber(i)) * h);
      EXPECT_LT((field[i] - expected).norm(), 1e-10 * std::max(1.0, expected.norm()));
    }
  }
}

TEST(Reconstruct, Examples) {
  const DiskExample d = build_disk_example(1.5, M_PI - 1.5);
  const Vector y = vec({0.3, -2.0});
  EXPECT_LT((reconstruct(d.frame, y) - y).norm(), 1e-14);

  // S^{-1} = [[1,-1],[-1,3]]; pi_1 e1 = e1, pi_2 e1 = (.5, .5).
  const Matrix s_inv = mat({{1, -1}, {-1, 3}});
  const Vector by_hand = s_inv * vec({1, 0}) + s_inv * vec({.5, .5});
  EXPECT_LT((by_hand - vec({1, 0})).norm(), 1e-15);
  EXPECT_LT((reconstruct(skewed_pair(), vec({1, 0})) - by_hand).norm(), 1e-12);
}

TEST(Reconstruct, NotAFrameIsAnError) {
  const CFusionFrame flat(MeasureSpace::counting(1), {Subspace::coordinate_axis(2, 0)}, WeightMap({1.0}));
  try {
    (void)reconstruct(flat, vec({1, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAFrame);
  }
}

TEST(Reconstruct, RecoversEveryVectorOfRandomFrames) {
  Rng rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    RandomFrameSpec spec = suite_spec(12000 + trial);
    spec.ensure_frame = true;
    const CFusionFrame f = generate_random_frame(spec);
    ASSERT_TRUE(frame_bounds(f).is_frame());
    const Vector h = random_gaussian_vector(rng, f.ambient_dim(), true);
    EXPECT_LE((reconstruct(f, h) - h).norm(), 1e-8 * h.norm());
  }
}

TEST(DiscreteFrame, Examples) {
  const std::vector<Vector> onb{vec({1, 0}), vec({0, 1})};
  FrameBounds b = frame_bounds(from_discrete_frame(onb));
  EXPECT_NEAR(b.lower, 1.0, 1e-15);
  EXPECT_NEAR(b.upper, 1.0, 1e-15);

  const std::vector<Vector> repeated{vec({1, 0}), vec({1, 0}), vec({0, 1})};
  const CFusionFrame f = from_discrete_frame(repeated);
  EXPECT_LT(max_abs(frame_operator(f) - mat({{2, 0}, {0, 1}})), 1e-15);
  b = frame_bounds(f);
  EXPECT_NEAR(b.lower, 1.0, 1e-15);
  EXPECT_NEAR(b.upper, 2.0, 1e-15);

  const std::vector<Vector> lone{vec({1, 1})};
  b = frame_bounds(from_discrete_frame(lone));
  EXPECT_NEAR(b.lower, 0.0, 1e-15);
  EXPECT_NEAR(b.upper, 2.0, 1e-14);
  EXPECT_EQ(b.classification, FrameClass::bessel_only);
}

TEST(DiscreteFrame, FrameOperatorIsSumOfOuterProducts) {
  Rng rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 1 + trial % 6;
    std::vector<Vector> hs;
    Matrix expected = Matrix::Zero(n, n);
    for (int i = 0; i < 1 + trial % 9; ++i) {
      hs.push_back(random_gaussian_vector(rng, n, true));
      expected += hs.back() * hs.back().adjoint();
    }
    EXPECT_LE(max_abs(frame_operator(from_discrete_frame(hs)) - expected), 1e-10);
  }
}

TEST(DiscreteFrame, ZeroVectorIsAnError) {
  const std::vector<Vector> hs{vec({1, 0}), vec({0, 0})};
  try {
    (void)from_discrete_frame(hs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroVector);
  }
}

TEST(FusionFrame, Examples) {
  const Subspace e1 = Subspace::coordinate_axis(2, 0);
  const Subspace e2 = Subspace::coordinate_axis(2, 1);
  EXPECT_TRUE(frame_bounds(from_fusion_frame({e1, e2}, {1.0, 1.0})).parseval);

  const CFusionFrame doubled = from_fusion_frame({e1, e1}, {1.0, 1.0});
  EXPECT_LT(max_abs(frame_operator(doubled) - 2.0 * projection(e1)), 1e-15);
  FrameBounds b = frame_bounds(doubled);
  EXPECT_NEAR(b.lower, 0.0, 1e-15);
  EXPECT_NEAR(b.upper, 2.0, 1e-15);

  b = frame_bounds(from_fusion_frame({Subspace::full(2)}, {1.7}));
  EXPECT_NEAR(b.lower, 1.7 * 1.7, 1e-14);
  EXPECT_NEAR(b.upper, 1.7 * 1.7, 1e-14);
  EXPECT_TRUE(b.tight);
}

TEST(FusionFrame, DimensionMismatch) {
  EXPECT_THROW((void)from_fusion_frame({Subspace::full(2), Subspace::full(3)}, {1.0, 1.0}), Error);
  EXPECT_THROW((void)from_fusion_frame({Subspace::full(2)}, {1.0, 1.0}), Error);
}

}  // namespace
}  // namespace cfuse
