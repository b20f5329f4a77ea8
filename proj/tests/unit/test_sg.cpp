#include <gtest/gtest.h>

#include <cmath>

#include "hgame/hgame.hpp"
#include "zero_game.hpp"

using namespace hgame;
using checks::ZeroGame;

TEST(Sg, ZeroOperatorLeavesStartUnchanged) {
  const ZeroGame g = ZeroGame::diagonal(Vector::Zero(3), Vector::Zero(3), 0.0);
  SgConfig c;
  c.total_iters = 100;
  const Vector x0{{1.0, -2.0, 0.5}};
  const RunReport r = sg::run(g, c, x0, RandomStream(1), ResidualHook{{}, Cadence::every_iteration()});
  ASSERT_EQ(r.iterates.size(), 101u);
  for (const Vector& x : r.iterates) EXPECT_EQ(x, x0);
}

TEST(Sg, DeterministicLinearMapDecaysMonotonically) {
  const ZeroGame g = ZeroGame::diagonal(Vector::Ones(1), Vector::Zero(1), 0.0);
  SgConfig c;
  c.alpha0 = 0.1;
  c.total_iters = 500;
  const RunReport r = sg::run(g, c, Vector{{2.0}}, RandomStream(1), ResidualHook{{}, Cadence::every_iteration()});
  for (std::size_t k = 1; k < r.iterates.size(); ++k) {
    ASSERT_LT(r.iterates[k][0], r.iterates[k - 1][0]);
    ASSERT_GT(r.iterates[k][0], 0.0);
  }
  // x_K = 2 prod (1 - 0.1 / sqrt(k)).
  double expect = 2.0;
  for (int k = 1; k <= 500; ++k) expect *= 1.0 - 0.1 / std::sqrt(k);
  EXPECT_NEAR(r.final_iterate()[0], expect, 1e-12);
}

TEST(Sg, FirstStepUsesFullAlpha0AndOneSample) {
  RandomStream rs(2);
  const MlmfGame g(MlmfParams::random_instance(3, 10, rs));
  SgConfig c;
  c.alpha0 = 0.05;
  c.total_iters = 1;
  const Vector x0{{1.0, 2.0, 0.5}};
  const RandomStream s(8);
  const RunReport r = sg::run(g, c, x0, s);
  RandomStream copy = s;
  const Vector expect = g.feasible().project(x0 - 0.05 * g.operator_sample(x0, copy));
  EXPECT_EQ(r.final_iterate(), expect);
  EXPECT_EQ(r.total_samples, 1);
}

TEST(Sg, DefaultTraceKeepsEndpointsOnly) {
  const ZeroGame g = ZeroGame::diagonal(Vector::Ones(2), Vector::Zero(2), 1.0);
  SgConfig c;
  c.total_iters = 10'000;
  const RunReport r = sg::run(g, c, Vector::Ones(2), RandomStream(1));
  ASSERT_EQ(r.trace.size(), 2u);
  EXPECT_EQ(r.trace.back().samples_cum, 10'000);
}

TEST(Sg, ConstrainedMultipliersStayNonnegative) {
  RandomStream rs(3);
  MlmfParams p = MlmfParams::random_instance(3, 10, rs);
  p.cap = Vector::Constant(3, 0.1);  // binding caps push the multipliers up
  const ConstrainedMlmfGame g(p);
  SgConfig c;
  c.total_iters = 2000;
  Vector z0 = Vector::Zero(6);
  z0.head(3).setConstant(1.0);
  const RunReport r = sg::run(g, c, z0, RandomStream(4), ResidualHook{{}, Cadence{100, 0}});
  for (const Vector& z : r.iterates) ASSERT_TRUE((z.array() >= 0.0).all());
  EXPECT_GT(r.final_iterate().tail(3).sum(), 0.0);
}

TEST(Sg, DeterministicPerSeed) {
  RandomStream rs(5);
  const MlmfGame g(MlmfParams::random_instance(4, 10, rs));
  SgConfig c;
  c.total_iters = 3000;
  const Vector x0 = Vector::Constant(4, 0.3);
  EXPECT_EQ(sg::run(g, c, x0, RandomStream(6)).final_iterate(), sg::run(g, c, x0, RandomStream(6)).final_iterate());
  EXPECT_NE(sg::run(g, c, x0, RandomStream(6)).final_iterate(), sg::run(g, c, x0, RandomStream(7)).final_iterate());
}

TEST(Sg, Validation) {
  const ZeroGame g = ZeroGame::diagonal(Vector::Ones(1), Vector::Zero(1), 0.0);
  SgConfig c;
  c.alpha0 = 0.0;
  EXPECT_THROW(sg::run(g, c, Vector::Zero(1), RandomStream(1)), ParameterError);
  c.alpha0 = 0.1;
  EXPECT_THROW(sg::run(g, c, Vector::Zero(3), RandomStream(1)), ParameterError);
}

TEST(Sg, DivergenceReportsIteration) {
  const ZeroGame g = ZeroGame::diagonal(Vector::Constant(1, 1e308), Vector::Zero(1), 0.0);
  SgConfig c;
  c.alpha0 = 10.0;
  c.total_iters = 50;
  try {
    sg::run(g, c, Vector{{1.0}}, RandomStream(1));
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_GE(e.iteration(), 1);
  }
}
