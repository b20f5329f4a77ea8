#include <gtest/gtest.h>

#include <cmath>

#include "hgame/hgame.hpp"
#include "properties.hpp"

using namespace hgame;

namespace {

MlmfParams symmetric(int leaders, int followers, double c) {
  MlmfParams p;
  p.n_leaders = leaders;
  p.n_followers = followers;
  p.b = 7.0;
  p.leader_cost = Vector::Zero(leaders);
  p.follower_cost = Vector::Constant(followers, c);
  p.cap = Vector::Constant(leaders, 5.0);
  return p;
}

}  // namespace

TEST(FollowerEquilibrium, SymmetricClosedForm) {
  const FollowerSolution s = follower_equilibrium(symmetric(1, 10, 50.0), 0.0, 35.0);
  EXPECT_NEAR(s.Y, 350.0 / 127.0, 1e-12);
  EXPECT_NEAR(s.dY_dX, -70.0 / 127.0, 1e-12);
  for (int j = 0; j < 10; ++j) EXPECT_NEAR(s.y[j], 35.0 / 127.0, 1e-12);
  // The plain projected fixed-point iteration lands on the same point.
  const Vector ref = checks::follower_lcp_reference(symmetric(1, 10, 50.0), 0.0, 35.0, 10'000);
  EXPECT_LT((ref - s.y).lpNorm<Eigen::Infinity>(), 1e-10);
}

TEST(FollowerEquilibrium, DemandExhausted) {
  const FollowerSolution s = follower_equilibrium(symmetric(1, 10, 50.0), 6.0, 35.0);
  EXPECT_EQ(s.Y, 0.0);
  EXPECT_EQ(s.dY_dX, 0.0);
  EXPECT_TRUE((s.y.array() == 0.0).all());
  // Boundary a == bX counts as exhausted too.
  EXPECT_EQ(follower_equilibrium(symmetric(1, 10, 50.0), 5.0, 35.0).dY_dX, 0.0);
}

TEST(FollowerEquilibrium, HeterogeneousCosts) {
  MlmfParams p = symmetric(1, 2, 0.0);
  p.follower_cost = Vector{{10.0, 1000.0}};
  const FollowerSolution s = follower_equilibrium(p, 0.0, 35.0);
  EXPECT_LE(follower_complementarity_residual(p, 0.0, 35.0, s.y), 1e-10);
  const Vector ref = checks::follower_lcp_reference(p, 0.0, 35.0);
  EXPECT_LT((ref - s.y).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(FollowerEquilibrium, AggregateMatchesFullSolve) {
  RandomStream rs(3);
  const MlmfParams p = MlmfParams::random_instance(3, 7, rs);
  for (double X : {0.0, 1.0, 3.5, 6.0}) {
    const FollowerSolution s = follower_equilibrium(p, X, 34.0);
    const FollowerAggregate a = follower_aggregate(p, X, 34.0);
    EXPECT_NEAR(s.Y, a.Y, 1e-12);
    EXPECT_EQ(s.dY_dX, a.dY_dX);
  }
}

TEST(FollowerEquilibrium, NonFiniteInputRaises) {
  EXPECT_THROW(follower_equilibrium(symmetric(1, 2, 50.0), std::nan(""), 35.0), NumericError);
}

TEST(FollowerEquilibrium, LcpPropertiesOnRandomInstances) {
  const auto c = checks::follower_properties(1234, 1000);
  EXPECT_TRUE(c.pass) << c.detail;
}

TEST(MlmfParams, ValidationListsEveryBadField) {
  MlmfParams p = symmetric(2, 2, 50.0);
  p.b = -1.0;
  p.a_lo = 40.0;
  p.leader_cost = Vector::Zero(3);
  try {
    p.validate();
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.fields().size(), 3u);
  }
}

TEST(MlmfParams, RandomInstanceRanges) {
  RandomStream rs(8);
  const MlmfParams p = MlmfParams::random_instance(13, 10, rs);
  EXPECT_NO_THROW(p.validate());
  EXPECT_TRUE((p.leader_cost.array() >= 0.0).all() && (p.leader_cost.array() < 100.0).all());
  EXPECT_TRUE((p.follower_cost.array() == 50.0).all());
  EXPECT_EQ(p.a_lo, 33.0);
  EXPECT_EQ(p.a_hi, 37.0);
  EXPECT_EQ(p.b, 7.0);
}

TEST(MlmfOperator, ZeroStrategyAtMidpointIntercept) {
  // Price with X = 0 is 35 - 7 * 350/127 = 1995/127; the cost terms vanish.
  MlmfParams p = symmetric(3, 10, 50.0);
  p.leader_cost = Vector{{1.0, 20.0, 80.0}};
  const MlmfGame game(p);
  Vector out(3);
  game.operator_at(Vector::Zero(3), 35.0, out);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(out[i], -1995.0 / 127.0, 1e-12);
  EXPECT_NEAR(out[0], -15.71, 5e-3);
}

TEST(MlmfOperator, MatchesFormulaFromFollowerOracle) {
  RandomStream rs(4);
  const MlmfGame game(MlmfParams::random_instance(5, 10, rs));
  const MlmfParams& p = game.params();
  for (int t = 0; t < 50; ++t) {
    Vector x(5);
    for (int i = 0; i < 5; ++i) x[i] = rs.uniform(0.0, 2.0);
    const double a = rs.uniform(33.0, 37.0);
    const FollowerSolution f = follower_equilibrium(p, x.sum(), a);
    const double price = a - p.b * (x.sum() + f.Y);
    Vector out(5);
    game.operator_at(x, a, out);
    for (int i = 0; i < 5; ++i)
      EXPECT_NEAR(out[i], -price + p.leader_cost[i] * x[i] + (1.0 + f.dY_dX) * p.b * x[i], 1e-10);
  }
}

TEST(MlmfOperator, CostTermDominatesForLargeC) {
  MlmfParams p = symmetric(2, 10, 50.0);
  p.leader_cost = Vector{{1e8, 1.0}};
  const MlmfGame game(p);
  Vector out(2);
  game.operator_at(Vector{{0.5, 0.5}}, 35.0, out);
  EXPECT_NEAR(out[0] / (1e8 * 0.5), 1.0, 1e-6);
}

TEST(MlmfOperator, MeanEqualsMidpointValue) {
  // Affine in a while every follower stays active, so E v = v(a = 35).
  RandomStream rs(5);
  const MlmfGame game(MlmfParams::random_instance(4, 10, rs));
  const Vector x{{0.2, 0.4, 0.1, 0.3}};
  RandomStream s(55);
  const MeanEstimate m = estimate_mean_operator(game, x, 100'000, s);
  Vector mid(4);
  game.operator_at(x, 35.0, mid);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(m.mean[i], mid[i], 3.0 * m.stderr_[i]);
}

TEST(MlmfObjective, GradientMatchesOperatorAwayFromKinks) {
  RandomStream rs(6);
  const MlmfGame game(MlmfParams::random_instance(4, 10, rs));
  const Vector x{{0.3, 0.7, 0.2, 0.5}};
  const double h = 1e-6;
  for (int i = 0; i < 4; ++i) {
    const RandomStream w(900 + i);
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    RandomStream s1 = w, s2 = w, s3 = w;
    const double fd = (game.objective_sample(i, xp, s1) - game.objective_sample(i, xm, s2)) / (2.0 * h);
    const Vector v = game.operator_sample(x, s3);
    EXPECT_NEAR(fd, v[i], 1e-6 * std::max(1.0, std::abs(v[i])));
  }
}

TEST(ConstrainedMlmf, ZeroMultipliersReduceToUnconstrained) {
  RandomStream rs(7);
  const MlmfGame game(MlmfParams::random_instance(4, 10, rs));
  const DualPoint z{Vector{{0.3, 0.1, 0.0, 0.8}}, Vector::Zero(4)};
  RandomStream a(3), b(3);
  const Vector v = constrained_operator_sample(game, z, a);
  EXPECT_EQ(v.head(4), game.operator_sample(z.x, b));
}

TEST(ConstrainedMlmf, DualComponentVanishesOnActiveBoundary) {
  RandomStream rs(8);
  MlmfParams p = MlmfParams::random_instance(3, 10, rs);
  p.cap_noise = 0.0;
  const MlmfGame game(p);
  const DualPoint z{Vector{{5.0, 1.0, 2.0}}, Vector{{0.5, 0.0, 1.0}}};
  RandomStream s(1);
  const Vector v = constrained_operator_sample(game, z, s);
  EXPECT_EQ(v[3], 0.0);
  EXPECT_EQ(v[4], 4.0);
}

TEST(ConstrainedMlmf, DualBlockMean) {
  RandomStream rs(9);
  const ConstrainedMlmfGame game(MlmfParams::random_instance(3, 10, rs));
  Vector z(6);
  z << 1.0, 4.5, 7.0, 0.2, 0.0, 0.3;
  RandomStream s(10);
  const MeanEstimate m = estimate_mean_operator(game, z, 100'000, s);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(m.mean[3 + i], -(z[i] - 5.0), 3.0 * m.stderr_[3 + i]);
}

TEST(ConstrainedMlmf, JointOracleMatchesDualPointForm) {
  RandomStream rs(11);
  const MlmfParams p = MlmfParams::random_instance(3, 10, rs);
  const ConstrainedMlmfGame joint(p);
  const DualPoint z{Vector{{1.0, 0.5, 0.0}}, Vector{{0.1, 0.2, 0.0}}};
  RandomStream a(4), b(4);
  EXPECT_EQ(joint.operator_sample(z.joint(), a), constrained_operator_sample(joint.base(), z, b));
  EXPECT_EQ(DualPoint::split(z.joint()).p, z.p);
  EXPECT_EQ(joint.layout().total_dim(), 6);
}

TEST(ConstrainedMlmf, ConstraintSampleMean) {
  RandomStream rs(12);
  const ConstrainedMlmfGame game(MlmfParams::random_instance(2, 10, rs));
  RandomStream s(13);
  double sum = 0.0;
  const int n = 100'000;
  for (int k = 0; k < n; ++k) sum += game.constraint_sample(1, Vector{{0.0, 3.0}}, s);
  EXPECT_NEAR(sum / n, -2.0, 3.0 * (1.0 / std::sqrt(3.0)) / std::sqrt(n));
}

TEST(ConstrainedMlmf, RejectsNegativeMultipliers) {
  RandomStream rs(14);
  const MlmfGame game(MlmfParams::random_instance(2, 10, rs));
  RandomStream s(1);
  EXPECT_THROW(constrained_operator_sample(game, {Vector::Zero(2), Vector{{-1.0, 0.0}}}, s), ParameterError);
}
