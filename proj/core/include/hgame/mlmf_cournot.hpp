#pragma once

// Multi-leader multi-follower Stackelberg-Nash-Cournot game with linear
// inverse demand p(u, w) = a(w) - b u, quadratic leader costs 1/2 C_i x_i^2 and
// quadratic follower costs 1/2 c_j y_j^2. Leaders move first; for a given
// aggregate leader output X the followers play the Cournot equilibrium.

#include <string>
#include <vector>

#include "hgame/game.hpp"

namespace hgame {

struct MlmfParams {
  int n_leaders = 13;
  int n_followers = 10;
  double b = 7.0;
  double a_lo = 33.0;
  double a_hi = 37.0;
  Vector leader_cost;    // C_i, size n_leaders
  Vector follower_cost;  // c_j, size n_followers

  // Expectation constraint E[x_i - U_i + w_i] <= 0, w_i ~ U(-h, h).
  Vector cap;  // U_i, size n_leaders
  double cap_noise = 1.0;

  void validate() const;

  // C_i ~ U(c_lo, c_hi) drawn from `stream`, c_j = follower_cost, U_i = cap.
  static MlmfParams random_instance(int n_leaders, int n_followers, RandomStream& stream,
                                    double c_lo = 0.0, double c_hi = 100.0, double follower_cost = 50.0,
                                    double cap = 5.0);
};

struct FollowerSolution {
  Vector y;
  double Y = 0.0;
  double dY_dX = 0.0;
};

// Follower Cournot equilibrium at aggregate leader output X and intercept a.
FollowerSolution follower_equilibrium(const MlmfParams& params, double X, double a);

// Aggregate only (no per-follower vector). Same numbers as follower_equilibrium.
struct FollowerAggregate {
  double Y = 0.0;
  double dY_dX = 0.0;
};
FollowerAggregate follower_aggregate(const MlmfParams& params, double X, double a);

// max_j |min(y_j, c_j y_j - a + b(X + Y) + b y_j)|
double follower_complementarity_residual(const MlmfParams& params, double X, double a, const Vector& y);

class MlmfGame final : public GameOracle {
 public:
  explicit MlmfGame(MlmfParams params);

  const PlayerLayout& layout() const override { return layout_; }
  const FeasibleSet& feasible() const override { return feasible_; }
  void operator_sample(const Vector& x, RandomStream& stream, VectorRef out) const override;
  using GameOracle::operator_sample;
  // Leader i's cost 1/2 C_i x_i^2 - p(X + Y) x_i for one draw of a(w).
  double objective_sample(int player, const Vector& x, RandomStream& stream) const override;
  bool has_objective() const override { return true; }
  std::string name() const override { return "mlmf"; }

  const MlmfParams& params() const noexcept { return params_; }
  // Operator value for a fixed intercept a.
  void operator_at(const Vector& x, double a, VectorRef out) const;

 private:
  MlmfParams params_;
  PlayerLayout layout_;
  FeasibleSet feasible_;
};

struct DualPoint {
  Vector x;
  Vector p;

  Vector joint() const;
  static DualPoint split(const Vector& z);
};

// Primal-dual map of the constrained game, one realization:
// [ F(x, w) + p ; -(x - U + w) ], both blocks projected onto R_+ by solvers.
Vector constrained_operator_sample(const MlmfGame& game, const DualPoint& z, RandomStream& stream);

// The constrained game as a 2N-dimensional oracle acting on z = (x, p).
class ConstrainedMlmfGame final : public GameOracle {
 public:
  explicit ConstrainedMlmfGame(MlmfParams params);

  const PlayerLayout& layout() const override { return layout_; }
  const FeasibleSet& feasible() const override { return feasible_; }
  void operator_sample(const Vector& z, RandomStream& stream, VectorRef out) const override;
  using GameOracle::operator_sample;
  int constraints_per_player() const override { return 1; }
  // c_i(x_i, w_i) = x_i - U_i + w_i; `x` may be the joint (x, p) vector or x alone.
  double constraint_sample(int player, const Vector& x, RandomStream& stream) const override;
  void constraint_gradient_apply(int player, const Vector& x, double multiplier, VectorRef block) const override;
  std::string name() const override { return "mlmf-constrained"; }

  const MlmfGame& base() const noexcept { return base_; }
  int n_leaders() const noexcept { return base_.params().n_leaders; }

 private:
  MlmfGame base_;
  PlayerLayout layout_;
  FeasibleSet feasible_;
};

}  // namespace hgame
