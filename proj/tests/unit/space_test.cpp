#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "cfuse/error.hpp"
#include "cfuse/random.hpp"
#include "cfuse/space.hpp"
#include "test_util.hpp"

namespace cfuse {
namespace {

using test::mat;
using test::max_abs;
using test::vec;

TEST(MeasureSpace, RejectsBadAtoms) {
  EXPECT_THROW(MeasureSpace(std::vector<Atom>{}), Error);
  EXPECT_THROW(MeasureSpace({{"a", 0.0}}), Error);
  EXPECT_THROW(MeasureSpace({{"a", -1.0}}), Error);
  EXPECT_THROW(MeasureSpace({{"a", 1.0}, {"a", 2.0}}), Error);
  EXPECT_THROW(MeasureSpace({{"a", std::nan("")}}), Error);
}

TEST(WeightMap, StrictlyPositive) {
  EXPECT_NO_THROW(WeightMap({0.5, 2.0}));
  try {
    WeightMap({1.0, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvariantError);
  }
}

TEST(Subspace, RejectsNonOrthonormalBasis) {
  EXPECT_THROW(Subspace(mat({{1, 1}, {0, 1}})), Error);
  EXPECT_THROW(Subspace(Matrix(2, 0)), Error);
}

TEST(Projection, Examples) {
  EXPECT_LT(max_abs(projection(Subspace::coordinate_axis(2, 0)) - mat({{1, 0}, {0, 0}})), 1e-15);
  EXPECT_LT(max_abs(projection(Subspace::full(2)) - Matrix::Identity(2, 2)), 1e-15);
  const std::vector<Vector> diag{vec({1, 1})};
  EXPECT_LT(max_abs(projection(Subspace::spanned_by(diag)) - mat({{0.5, 0.5}, {0.5, 0.5}})), 1e-15);
}

TEST(Projection, FixesSpanAndKillsComplement) {
  const std::vector<Vector> span{vec({1, 2, 0}), vec({0, 1, 1})};
  const Subspace s = Subspace::spanned_by(span);
  const Matrix p = projection(s);
  for (const Vector& v : span) EXPECT_LT((p * v - v).norm(), 1e-14);
  // (2, -1, 1) is orthogonal to both spanning vectors.
  EXPECT_LT((p * vec({2, -1, 1})).norm(), 1e-14);
}

TEST(Projection, RandomSubspacesAreOrthogonalProjections) {
  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = std::uniform_int_distribution<Eigen::Index>(1, 9)(rng);
    const auto k = std::uniform_int_distribution<Eigen::Index>(1, n)(rng);
    const Subspace s = random_subspace(rng, n, k, trial % 2 == 0);
    const Matrix p = projection(s);
    EXPECT_LE(max_abs(p * p - p), 1e-9);
    EXPECT_LE(max_abs(p - p.adjoint()), 1e-9);
    EXPECT_NEAR(p.trace().real(), static_cast<double>(k), 1e-8);
    EXPECT_EQ(numerical_rank(p, 1e-10), k);
  }
}

TEST(ImageSubspace, Examples) {
  const Subspace s = Subspace::coordinate_axis(2, 0);
  EXPECT_TRUE(image_subspace(Matrix::Identity(2, 2), s).same_span(s));
  EXPECT_TRUE(image_subspace(2.0 * Matrix::Identity(2, 2), s).same_span(s));
  // M e2 = (1, 1).
  const Subspace img = image_subspace(mat({{1, 1}, {0, 1}}), Subspace::coordinate_axis(2, 1));
  EXPECT_LT(max_abs(projection(img) - mat({{0.5, 0.5}, {0.5, 0.5}})), 1e-15);
}

TEST(ImageSubspace, SingularOperatorIsAnError) {
  try {
    (void)image_subspace(mat({{1, 0}, {0, 0}}), Subspace::full(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularOperator);
  }
}

TEST(ImageSubspace, InverseRoundTripRestoresSpan) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 2 + trial % 6;
    const Matrix m = random_gaussian_matrix(rng, n, n, true) + 0.5 * Matrix::Identity(n, n);
    const Subspace s = random_subspace(rng, n, 1 + trial % n, true);
    const Subspace back = image_subspace(m, image_subspace(m.inverse(), s));
    EXPECT_LE(max_abs(projection(back) - projection(s)), 1e-8);
  }
}

TEST(ProductSpace, Examples) {
  const MeasureSpace one = product_space(MeasureSpace({{"a", 1}}), MeasureSpace({{"b", 1}}));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.atom(0).id, "(a,b)");
  EXPECT_EQ(one.mass(0), 1.0);

  const MeasureSpace two = product_space(MeasureSpace({{"a", 2}}), MeasureSpace({{"b", 3}, {"c", 4}}));
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two.atom(0), (Atom{"(a,b)", 6.0}));
  EXPECT_EQ(two.atom(1), (Atom{"(a,c)", 8.0}));

  const MeasureSpace four = product_space(MeasureSpace({{"a", .5}, {"b", .5}}), MeasureSpace({{"c", 1}, {"d", 1}}));
  EXPECT_EQ(four.size(), 4u);
  EXPECT_NEAR(four.total_mass(), 2.0, 1e-15);
}

TEST(ProductSpace, TotalMassMultiplies) {
  Rng rng(8);
  std::uniform_real_distribution<double> mass(0.01, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> xm(1 + trial % 5), ym(1 + trial % 7);
    for (double& m : xm) m = mass(rng);
    for (double& m : ym) m = mass(rng);
    const MeasureSpace x = MeasureSpace::from_masses(xm);
    const MeasureSpace y = MeasureSpace::from_masses(ym);
    const double expected = x.total_mass() * y.total_mass();
    EXPECT_NEAR(product_space(x, y).total_mass(), expected, 1e-12 * expected);
  }
}

}  // namespace
}  // namespace cfuse
