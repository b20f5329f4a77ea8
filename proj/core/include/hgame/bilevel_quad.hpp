#pragma once

// N scalar players, each with one follower whose optimal response is
// y_i(x_i) = max(b_i x_i / Q_i, l_i x_i). Player i's implicit cost is
//   1/2 d_i x_i^2 + 3 x_i sum_j x_j + a_i(w) y_i(x_i)  (+ 1/2 mu x_i^2),
// which makes the game a potential game.

#include <string>

#include "hgame/game.hpp"

namespace hgame {

struct BilevelParams {
  int n_players = 13;
  Vector Q;  // > 0
  Vector b;  // lower-level linear term slope
  Vector l;  // lower bound slope
  Vector d;  // >= 0
  double a_lo = 33.0;
  double a_hi = 37.0;
  double interaction = 3.0;
  // Extra strong-monotonicity term; 0 for the plain game.
  double mu = 0.0;
  // Strategy set: whole line by default, optionally a box [box_lo, box_hi].
  bool boxed = false;
  double box_lo = 0.0;
  double box_hi = 0.0;

  void validate() const;
  bool coincident(double tol = 1e-12) const;

  // Q_i = 3, b_i ~ U(0,3), l_i ~ U(0,1), d_i ~ U(0,100).
  static BilevelParams random_instance(int n_players, RandomStream& stream);
  // Same, but with b_i = 3 and l_i = 1 so that both branches of y coincide.
  static BilevelParams coincident_instance(int n_players, RandomStream& stream);
};

double lower_level_solution(const BilevelParams& params, int i, double x_i);
// Slope of the active branch of max(b x / Q, l x); b/Q at ties.
double lower_level_slope(const BilevelParams& params, int i, double x_i);

class BilevelGame final : public GameOracle {
 public:
  explicit BilevelGame(BilevelParams params);

  const PlayerLayout& layout() const override { return layout_; }
  const FeasibleSet& feasible() const override { return feasible_; }
  void operator_sample(const Vector& x, RandomStream& stream, VectorRef out) const override;
  using GameOracle::operator_sample;
  double objective_sample(int player, const Vector& x, RandomStream& stream) const override;
  bool has_objective() const override { return true; }
  std::string name() const override { return "bilevel"; }

  double potential_sample(const Vector& x, RandomStream& stream) const;
  // One draw of the intercept vector a(w). Every sampled method draws it first.
  Vector draw_intercepts(RandomStream& stream) const;

  const BilevelParams& params() const noexcept { return params_; }

 private:
  BilevelParams params_;
  PlayerLayout layout_;
  FeasibleSet feasible_;
};

// Equilibrium of the coincident-slope game on the whole line:
// (d_i + mu + w) x_i + w sum_j x_j = -s_i E[a_i], w the interaction weight.
Vector direct_equilibrium(const BilevelParams& params);

}  // namespace hgame
