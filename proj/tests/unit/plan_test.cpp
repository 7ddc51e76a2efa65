#include "ramified/plan.hpp"
#include "ramified/error.hpp"
#include "ramified/solver.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace ramified {
namespace {

using testing::Rng;

TEST(TransportPlan, ValidatesMargins) {
  Eigen::MatrixXd g(2, 2);
  g << 0.5, 0.0, 0.0, 0.5;
  EXPECT_NO_THROW(TransportPlan(g, {0.5, 0.5}, {0.5, 0.5}));
  EXPECT_THROW(TransportPlan(g, {0.6, 0.4}, {0.5, 0.5}), ValidationError);
  g(0, 1) = -0.1;
  EXPECT_THROW(TransportPlan(g, {0.4, 0.5}, {0.5, 0.4}), ValidationError);
}

TEST(HAlpha, Examples) {
  const ModelPoint x = ModelPoint::plane(0, 0);
  const ModelPoint y1 = ModelPoint::plane(3, 4);
  const ModelPoint y2 = ModelPoint::plane(-1, 0);
  Eigen::MatrixXd one(1, 1);
  one << 1.0;
  EXPECT_DOUBLE_EQ(h_alpha(TransportPlan(one, {1.0}, {1.0}), dirac(x), dirac(y1), 0.5), 5.0);

  const AtomicMeasure b({{y1, 0.5}, {y2, 0.5}});
  Eigen::MatrixXd split(1, 2);
  split << 0.5, 0.5;
  const TransportPlan forced(split, {1.0}, {0.5, 0.5});
  EXPECT_NEAR(h_alpha(forced, dirac(x), b, 0.5), std::sqrt(0.5) * 6.0, 1e-15);
  EXPECT_DOUBLE_EQ(h_alpha(forced, dirac(x), b, 0.0), 6.0);
  EXPECT_THROW(h_alpha(forced, dirac(x), dirac(y1), 0.5), ValidationError);
}

TEST(JAlpha, DiracToDirac) {
  const JAlphaResult r = j_alpha(dirac(ModelPoint::plane(0, 0)), dirac(ModelPoint::plane(3, 4)), 0.3);
  EXPECT_DOUBLE_EQ(r.value, 5.0);
  EXPECT_DOUBLE_EQ(r.plan.gamma()(0, 0), 1.0);
}

TEST(JAlpha, IdenticalMeasuresGiveZeroWithDiagonalPlan) {
  Rng rng(5);
  const AtomicMeasure a = testing::random_measure(rng, Curvature(0.0), 4, 2.0);
  const JAlphaResult r = j_alpha(a, a, 0.5);
  EXPECT_DOUBLE_EQ(r.value, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_DOUBLE_EQ(r.plan.gamma()(i, i), a[i].mass);
}

TEST(JAlpha, MassMismatchAndLimits) {
  const AtomicMeasure a = dirac(ModelPoint::plane(0, 0), 1.0);
  EXPECT_THROW(j_alpha(a, dirac(ModelPoint::plane(1, 0), 2.0), 0.5), ValidationError);
  EXPECT_THROW(j_alpha(a, dirac(ModelPoint::plane(1, 0)), 1.0), DomainError);
  Rng rng(9);
  const AtomicMeasure big = testing::random_measure(rng, Curvature(0.0), 7, 3.0);
  const AtomicMeasure other = testing::random_measure(rng, Curvature(0.0), 6, 3.0);
  EXPECT_THROW(j_alpha(big, other, 0.5), LimitError);
}

TEST(JAlpha, TwoByTwoMatchesGrid) {
  Rng rng(101);
  for (int i = 0; i < 40; ++i) {
    const AtomicMeasure a = testing::random_measure(rng, Curvature(0.0), 2, 2.0);
    const AtomicMeasure b = testing::random_measure(rng, Curvature(0.0), 2, 2.0);
    for (double alpha : {0.0, 0.3, 0.5, 0.7}) {
      EXPECT_NEAR(j_alpha(a, b, alpha).value, testing::plan_grid_2x2(a, b, alpha), 1e-6);
    }
  }
}

TEST(JAlpha, TwoByThreeMatchesGridInEveryGeometry) {
  Rng rng(103);
  for (double kv : {-1.0, 0.0, 1.0}) {
    for (int i = 0; i < 10; ++i) {
      const AtomicMeasure a = testing::random_measure(rng, Curvature(kv), 2, 1.2);
      const AtomicMeasure b = testing::random_measure(rng, Curvature(kv), 3, 1.2);
      for (double alpha : {0.3, 0.7}) {
        EXPECT_NEAR(j_alpha(a, b, alpha).value, testing::plan_grid_2x3(a, b, alpha, 120), 1e-6);
      }
    }
  }
}

TEST(JAlphaProperty, PlanIsFeasibleAndAchievesValue) {
  Rng rng(107);
  for (int i = 0; i < 30; ++i) {
    const AtomicMeasure a = testing::random_measure(rng, Curvature(0.0), 1 + rng.index(4), 2.0);
    const AtomicMeasure b = testing::random_measure(rng, Curvature(0.0), 1 + rng.index(4), 2.0);
    const double alpha = rng.uniform(0.0, 0.95);
    const JAlphaResult r = j_alpha(a, b, alpha);
    EXPECT_NEAR(h_alpha(r.plan, a, b, alpha), r.value, 1e-12);
    // A forest support has at most m + l - 1 cells.
    EXPECT_LE(r.plan.support().size(), a.size() + b.size() - 1);
  }
}

TEST(JAlphaProperty, Symmetric) {
  Rng rng(109);
  for (int i = 0; i < 30; ++i) {
    const AtomicMeasure a = testing::random_measure(rng, Curvature(0.0), 1 + rng.index(4), 2.0);
    const AtomicMeasure b = testing::random_measure(rng, Curvature(0.0), 1 + rng.index(4), 2.0);
    const double alpha = rng.uniform(0.0, 0.95);
    EXPECT_NEAR(j_alpha(a, b, alpha).value, j_alpha(b, a, alpha).value, 1e-12);
  }
}

TEST(JAlphaProperty, IndependentOfThreadCount) {
  Rng rng(113);
  for (int i = 0; i < 10; ++i) {
    const AtomicMeasure a = testing::random_measure(rng, Curvature(0.0), 4, 2.0);
    const AtomicMeasure b = testing::random_measure(rng, Curvature(0.0), 4, 2.0);
    JAlphaOptions one;
    one.threads = 1;
    JAlphaOptions four;
    four.threads = 4;
    const JAlphaResult r1 = j_alpha(a, b, 0.4, one);
    const JAlphaResult r4 = j_alpha(a, b, 0.4, four);
    EXPECT_EQ(r1.value, r4.value);
    EXPECT_EQ(r1.plan.support(), r4.plan.support());
  }
}

TEST(JAlphaProperty, DominatesSolverCost) {
  Rng rng(127);
  for (int i = 0; i < 10; ++i) {
    const AtomicMeasure a = testing::random_measure(rng, Curvature(0.0), 1 + rng.index(3), 2.0);
    const AtomicMeasure b = testing::random_measure(rng, Curvature(0.0), 1 + rng.index(3), 2.0);
    const double alpha = rng.uniform(0.1, 0.9);
    EXPECT_LE(solve(a, b, alpha, Curvature(0.0)).cost, j_alpha(a, b, alpha).value + 1e-8);
  }
}

// J_alpha is only a quasimetric; the relaxed-triangle constant is measured.
TEST(JAlphaProperty, RelaxedTriangleConstantIsFinite) {
  Rng rng(131);
  double worst = 0.0;
  for (int i = 0; i < 40; ++i) {
    const AtomicMeasure a = testing::random_measure(rng, Curvature(0.0), 1 + rng.index(3), 2.0);
    const AtomicMeasure b = testing::random_measure(rng, Curvature(0.0), 1 + rng.index(3), 2.0);
    const AtomicMeasure c = testing::random_measure(rng, Curvature(0.0), 1 + rng.index(3), 2.0);
    const double direct = j_alpha(a, b, 0.5).value;
    const double via = j_alpha(a, c, 0.5).value + j_alpha(c, b, 0.5).value;
    ASSERT_GT(via, 0.0);
    worst = std::max(worst, direct / via);
  }
  EXPECT_TRUE(std::isfinite(worst));
  RecordProperty("relaxed_triangle_constant", std::to_string(worst));
}

}  // namespace
}  // namespace ramified
