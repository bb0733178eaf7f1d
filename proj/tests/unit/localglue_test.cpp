#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "../support/builders.hpp"
#include "cfuse/error.hpp"
#include "cfuse/localglue.hpp"
#include "test_util.hpp"

namespace cfuse {
namespace {

using test::max_abs;
using test::vec;

// Base: two atoms with fibers e1-axis and e2-axis; inner: two unit atoms.
LocalFrameFamily axis_family(double scale) {
  const MeasureSpace base = MeasureSpace::counting(2);
  const MeasureSpace inner = MeasureSpace::counting(2);
  std::vector<std::vector<Vector>> vectors{{vec({scale, 0}), vec({scale, 0})}, {vec({0, scale}), vec({0, -scale})}};
  return LocalFrameFamily(base, inner, {Subspace::coordinate_axis(2, 0), Subspace::coordinate_axis(2, 1)},
                          std::move(vectors));
}

TEST(LocalFamily, LocalBoundsByHand) {
  const LocalFrameFamily l = axis_family(1.0);
  // Each local frame operator restricted to its fiber is 1 + 1 = 2.
  EXPECT_NEAR(l.lower(), 2.0, 1e-14);
  EXPECT_NEAR(l.upper(), 2.0, 1e-14);
  EXPECT_LT(max_abs(local_frame_operator(l, 0) - test::mat({{2, 0}, {0, 0}})), 1e-15);
}

TEST(LocalFamily, FiberViolation) {
  std::vector<std::vector<Vector>> vectors{{vec({1, 0}), vec({1, 0.5})}};
  try {
    (void)LocalFrameFamily(MeasureSpace::counting(1), MeasureSpace::counting(2), {Subspace::coordinate_axis(2, 0)},
                           std::move(vectors));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::FiberViolation);
  }
}

TEST(LocalFamily, MustSpanFiber) {
  std::vector<std::vector<Vector>> vectors{{vec({1, 0}), vec({2, 0})}};
  try {
    (void)LocalFrameFamily(MeasureSpace::counting(1), MeasureSpace::counting(2), {Subspace::full(2)},
                           std::move(vectors));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAFrame);
  }
}

TEST(Glue, AxisFamilyBoundsAndSandwich) {
  const LocalFrameFamily l = axis_family(1.0);
  const WeightMap v({1.0, 1.0});
  const ContinuousFrame g = glue(l, v);
  EXPECT_EQ(g.space().size(), 4u);
  EXPECT_EQ(g.space().atom(1).id, "(a0,a1)");
  EXPECT_LT(max_abs(frame_operator(g) - 2.0 * Matrix::Identity(2, 2)), 1e-15);
  const GlueReport r = glue_report(l, v);
  EXPECT_NEAR(r.glued.lower, 2.0, 1e-14);
  EXPECT_NEAR(r.glued.upper, 2.0, 1e-14);
  EXPECT_NEAR(r.cfusion.lower, 1.0, 1e-14);
  EXPECT_TRUE(r.sandwich_holds);
}

TEST(Glue, ScalingLocalVectorsScalesBoundsByFour) {
  const WeightMap v({0.7, 1.3});
  const GlueReport one = glue_report(axis_family(1.0), v);
  const GlueReport two = glue_report(axis_family(2.0), v);
  EXPECT_NEAR(two.local_lower, 4.0 * one.local_lower, 1e-12);
  EXPECT_NEAR(two.glued.lower, 4.0 * one.glued.lower, 1e-12);
  EXPECT_NEAR(two.glued.upper, 4.0 * one.glued.upper, 1e-12);
  EXPECT_TRUE(two.sandwich_holds);
}

TEST(Glue, EquivalenceOnBesselOnlyFusion) {
  // Both fibers on the e1-axis: neither side is a frame.
  std::vector<std::vector<Vector>> vectors{{vec({1, 0})}, {vec({-2, 0})}};
  const LocalFrameFamily l(MeasureSpace::counting(2), MeasureSpace::counting(1),
                           {Subspace::coordinate_axis(2, 0), Subspace::coordinate_axis(2, 0)}, std::move(vectors));
  const EquivalenceProbe p = equivalence_probe(l, WeightMap({1.0, 1.0}));
  EXPECT_FALSE(p.cfusion_is_frame);
  EXPECT_FALSE(p.glued_is_frame);
  EXPECT_TRUE(p.agree);
}

TEST(Glue, RandomFamiliesSandwichAndAgree) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const CFusionFrame f = generate_random_frame(test::suite_frame_spec(seed));
    const MeasureSpace inner = MeasureSpace::from_masses(std::vector<double>(
        static_cast<std::size_t>(f.ambient_dim() + 1 + static_cast<Eigen::Index>(seed % 3)), 0.75));
    const LocalFrameFamily l = test::random_local_family(rng, f.space(), inner, f.fibers());
    const GlueReport r = glue_report(l, f.weights());
    EXPECT_TRUE(r.sandwich_holds) << "seed " << seed;
    EXPECT_TRUE(equivalence_probe(l, f.weights()).agree);
    // Independent assembly: sum over (x, y) of mu_x mu_y v_x^2 u u^*.
    Matrix s = Matrix::Zero(f.ambient_dim(), f.ambient_dim());
    for (std::size_t x = 0; x < f.size(); ++x) {
      for (std::size_t y = 0; y < inner.size(); ++y) {
        const Vector& u = l.vectors()[x][y];
        s += f.space().mass(x) * inner.mass(y) * f.weights()[x] * f.weights()[x] * (u * u.adjoint());
      }
    }
    EXPECT_LT(max_abs(frame_operator(glue(l, f.weights())) - s), 1e-10);
  }
}

TEST(LocalDuals, ScaledStandardBasisPair) {
  const MeasureSpace base({{"x", 1.0}});
  const MeasureSpace inner = MeasureSpace::counting(2);
  const LocalFrameFamily lf(base, inner, {Subspace::full(2)}, {{vec({2, 0}), vec({0, 2})}});
  const LocalFrameFamily lg(base, inner, {Subspace::full(2)}, {{vec({0.5, 0}), vec({0, 0.5})}});
  const WeightMap one({1.0});
  const std::vector<double> res = local_dual_pair_residuals(lf, one, lg, one);
  ASSERT_EQ(res.size(), 1u);
  EXPECT_LT(res[0], 1e-15);
  const QOperator q = q_from_local_duals(lf, lg);
  EXPECT_LT(max_abs(q.matrix() - Matrix::Identity(2, 2)), 1e-15);
  const DualityReport r = verify_duality(lf.fusion(one), lg.fusion(one), q);
  EXPECT_TRUE(r.is_dual);
  EXPECT_LE(r.residual, 1e-12);
}

TEST(LocalDuals, ShapeMismatch) {
  const LocalFrameFamily a = axis_family(1.0);
  const LocalFrameFamily b(MeasureSpace({{"x", 1.0}}), MeasureSpace::counting(2), {Subspace::full(2)},
                           {{vec({1, 0}), vec({0, 1})}});
  EXPECT_THROW((void)q_from_local_duals(a, b), Error);
}

TEST(LocalDuals, RandomSingletonPairsAssembleADual) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(seed % 5);
    const double mass = 0.5 + 0.1 * static_cast<double>(seed % 7);
    const MeasureSpace base({{"x", mass}});
    const MeasureSpace inner = MeasureSpace::from_masses(std::vector<double>(static_cast<std::size_t>(n + 2), 1.0));
    const LocalFrameFamily lf = test::random_local_family(rng, base, inner, {Subspace::full(n)});
    // Canonical local dual S_x^{-1} u; weights chosen so mu v w = 1.
    const Matrix s_inv = inverse_hpd(local_frame_operator(lf, 0));
    std::vector<Vector> dual;
    for (const Vector& u : lf.vectors()[0]) dual.push_back(s_inv * u);
    const LocalFrameFamily lg(base, inner, {Subspace::full(n)}, {dual});
    const WeightMap v({1.0 / std::sqrt(mass)});
    const WeightMap w({1.0 / std::sqrt(mass)});
    const WeightMap one({1.0});
    EXPECT_LT(local_dual_pair_residuals(lf, one, lg, one)[0], 1e-9);
    const QOperator q = q_from_local_duals(lf, lg);
    const CFusionFrame f = lf.fusion(v);
    const CFusionFrame g = lg.fusion(w);
    const DualityReport r = verify_duality(f, g, q);
    EXPECT_LE(r.residual, 1e-9) << "seed " << seed;
    EXPECT_LE(spectral_norm(q.matrix()), std::sqrt(frame_bounds(f).upper * frame_bounds(g).upper) + 1e-8);
  }
}

}  // namespace
}  // namespace cfuse
