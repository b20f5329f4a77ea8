#include <gtest/gtest.h>

#include <cmath>

#include "hgame/hgame.hpp"
#include "properties.hpp"

using namespace hgame;

namespace {

BilevelParams fixed(int n, double d, double b, double l) {
  BilevelParams p;
  p.n_players = n;
  p.Q = Vector::Constant(n, 3.0);
  p.b = Vector::Constant(n, b);
  p.l = Vector::Constant(n, l);
  p.d = Vector::Constant(n, d);
  return p;
}

}  // namespace

TEST(LowerLevel, DirectFormula) {
  const BilevelParams p = fixed(1, 10.0, 2.0, 0.5);
  EXPECT_DOUBLE_EQ(lower_level_solution(p, 0, 1.0), 2.0 / 3.0);
  EXPECT_EQ(lower_level_solution(p, 0, 0.0), 0.0);
  // Negative side picks the other branch.
  EXPECT_DOUBLE_EQ(lower_level_solution(p, 0, -1.0), -0.5);
}

TEST(LowerLevel, CoincidentBranches) {
  const BilevelParams p = fixed(1, 10.0, 3.0, 1.0);
  for (double x : {-2.0, -0.1, 0.0, 0.7, 5.0}) EXPECT_DOUBLE_EQ(lower_level_solution(p, 0, x), x);
}

TEST(LowerLevel, SlopeTieBreakUsesFirstBranch) {
  const BilevelParams p = fixed(1, 10.0, 2.0, 0.5);
  EXPECT_DOUBLE_EQ(lower_level_slope(p, 0, 0.0), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(lower_level_slope(p, 0, -1.0), 0.5);
}

TEST(BilevelOperator, CoincidentCaseIsLinear) {
  BilevelParams p = fixed(3, 0.0, 3.0, 1.0);
  p.d = Vector{{1.0, 2.0, 3.0}};
  const BilevelGame game(p);
  const Vector x{{0.5, -1.0, 2.0}};
  const RandomStream w(3);
  RandomStream s1 = w, s2 = w;
  const Vector v = game.operator_sample(x, s1);
  const Vector a = game.draw_intercepts(s2);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(v[i], (p.d[i] + 3.0) * x[i] + 3.0 * x.sum() + a[i], 1e-12);
}

TEST(BilevelOperator, ZeroWithFixedIntercept) {
  BilevelParams p = fixed(2, 10.0, 2.0, 0.5);
  p.a_lo = p.a_hi = 35.0;
  const BilevelGame game(p);
  RandomStream s(1);
  const Vector v = game.operator_sample(Vector::Zero(2), s);
  EXPECT_DOUBLE_EQ(v[0], 35.0 * 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(v[1], 35.0 * 2.0 / 3.0);
}

TEST(BilevelOperator, MuAddsStrongMonotonicity) {
  BilevelParams p = fixed(2, 10.0, 3.0, 1.0);
  p.a_lo = p.a_hi = 35.0;
  BilevelParams q = p;
  q.mu = 1.0;
  const Vector x{{0.4, -0.3}};
  RandomStream s1(1), s2(1);
  const Vector d = BilevelGame(q).operator_sample(x, s1) - BilevelGame(p).operator_sample(x, s2);
  EXPECT_NEAR((d - x).norm(), 0.0, 1e-12);
}

TEST(BilevelOperator, MatchesObjectiveDerivative) {
  RandomStream rs(4);
  const BilevelGame game(BilevelParams::random_instance(5, rs));
  const double h = 1e-6;
  for (int t = 0; t < 20; ++t) {
    Vector x(5);
    for (int i = 0; i < 5; ++i) {
      x[i] = rs.uniform(0.05, 1.0);
      if (rs.uniform01() < 0.5) x[i] = -x[i];
    }
    const RandomStream w = rs.derive(static_cast<std::uint64_t>(t));
    RandomStream sv = w;
    const Vector v = game.operator_sample(x, sv);
    for (int i = 0; i < 5; ++i) {
      Vector xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      RandomStream s1 = w, s2 = w;
      const double fd = (game.objective_sample(i, xp, s1) - game.objective_sample(i, xm, s2)) / (2.0 * h);
      EXPECT_NEAR(fd, v[i], 1e-6 * std::max(1.0, std::abs(v[i])));
    }
  }
}

TEST(BilevelObjective, ZeroAtOrigin) {
  RandomStream rs(5);
  const BilevelGame game(BilevelParams::random_instance(4, rs));
  RandomStream s(1), t(1);
  EXPECT_EQ(game.objective_sample(2, Vector::Zero(4), s), 0.0);
  EXPECT_EQ(game.potential_sample(Vector::Zero(4), t), 0.0);
}

TEST(BilevelPotential, SinglePlayerEqualsObjective) {
  RandomStream rs(6);
  const BilevelGame game(BilevelParams::random_instance(1, rs));
  for (double x : {-1.5, -0.2, 0.0, 0.3, 2.0}) {
    RandomStream s(9), t(9);
    EXPECT_NEAR(game.potential_sample(Vector{{x}}, s), game.objective_sample(0, Vector{{x}}, t), 1e-12);
  }
}

TEST(BilevelPotential, IdentityWithCommonRandomNumbers) {
  const auto c = checks::potential_identity(77, 1000);
  EXPECT_TRUE(c.pass) << c.detail;
}

TEST(DirectEquilibrium, ScalarCase) {
  BilevelParams p = fixed(1, 10.0, 3.0, 1.0);
  EXPECT_NEAR(direct_equilibrium(p)[0], -2.1875, 1e-12);
}

TEST(DirectEquilibrium, TwoPlayers) {
  BilevelParams p = fixed(2, 0.0, 3.0, 1.0);
  p.d = Vector{{10.0, 20.0}};
  const Vector x = direct_equilibrium(p);
  // 16 x1 + 3 x2 = -35, 3 x1 + 26 x2 = -35.
  EXPECT_NEAR(x[0], -805.0 / 407.0, 1e-12);
  EXPECT_NEAR(x[1], -455.0 / 407.0, 1e-12);
  EXPECT_NEAR(x[0], -1.9779, 1e-4);
  EXPECT_NEAR(x[1], -1.1179, 1e-4);
}

TEST(DirectEquilibrium, StationaryForMeanOperator) {
  RandomStream rs(7);
  const BilevelParams p = BilevelParams::coincident_instance(13, rs);
  const BilevelGame game(p);
  const Vector x = direct_equilibrium(p);
  RandomStream s(8);
  const MeanEstimate m = estimate_mean_operator(game, x, 1'000'000, s);
  EXPECT_LE(m.mean.norm(), 3.0 * m.stderr_norm());
}

TEST(DirectEquilibrium, RejectsUnsupportedCases) {
  EXPECT_THROW(direct_equilibrium(fixed(2, 1.0, 2.0, 0.5)), UnsupportedCase);
  BilevelParams boxed = fixed(2, 1.0, 3.0, 1.0);
  boxed.boxed = true;
  boxed.box_lo = -1.0;
  boxed.box_hi = 1.0;
  EXPECT_THROW(direct_equilibrium(boxed), UnsupportedCase);
}

TEST(BilevelParams, ValidationAndInstances) {
  BilevelParams p = fixed(2, 1.0, 3.0, 1.0);
  p.Q = Vector{{3.0, -1.0}};
  p.d = Vector{{1.0}};
  EXPECT_THROW(p.validate(), ValidationError);
  RandomStream rs(9);
  const BilevelParams r = BilevelParams::random_instance(13, rs);
  EXPECT_TRUE((r.Q.array() == 3.0).all());
  EXPECT_TRUE((r.b.array() >= 0.0).all() && (r.b.array() < 3.0).all());
  EXPECT_TRUE((r.l.array() >= 0.0).all() && (r.l.array() < 1.0).all());
  EXPECT_TRUE((r.d.array() >= 0.0).all() && (r.d.array() < 100.0).all());
  RandomStream rs2(9);
  EXPECT_TRUE(BilevelParams::coincident_instance(13, rs2).coincident());
}

TEST(BilevelGame, BoxedVariantProjects) {
  BilevelParams p = fixed(2, 1.0, 3.0, 1.0);
  p.boxed = true;
  p.box_lo = -1.0;
  p.box_hi = 0.5;
  const BilevelGame game(p);
  EXPECT_EQ(game.feasible().project(Vector{{-3.0, 3.0}}), (Vector{{-1.0, 0.5}}));
}
