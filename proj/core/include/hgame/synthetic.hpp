#pragma once

// Separable scalar test game with closed-form best responses:
//   f_i(x_i, w) = 1/2 s_i (x_i - m_i)^2 + kappa_i |x_i| + w_i x_i,  w_i ~ U(-h, h).
// Players do not interact, so B_i and its smoothed version are explicit.

#include <string>

#include "hgame/game.hpp"

namespace hgame {

struct SyntheticParams {
  Vector s;      // curvature, > 0
  Vector m;      // centre
  Vector kappa;  // weight of |x|, >= 0
  double noise = 0.0;

  int n_players() const { return static_cast<int>(s.size()); }
  void validate() const;
  static SyntheticParams scalar(double s, double m, double kappa, double noise);
};

class SyntheticGame final : public GameOracle {
 public:
  explicit SyntheticGame(SyntheticParams params);

  const PlayerLayout& layout() const override { return layout_; }
  const FeasibleSet& feasible() const override { return feasible_; }
  void operator_sample(const Vector& x, RandomStream& stream, VectorRef out) const override;
  using GameOracle::operator_sample;
  double objective_sample(int player, const Vector& x, RandomStream& stream) const override;
  bool has_objective() const override { return true; }
  std::string name() const override { return "synthetic"; }

  const SyntheticParams& params() const noexcept { return params_; }

  // argmin_v E f_i(v) + c/2 (v - x_i)^2
  double best_response(int i, double x_i, double c) const;
  // Same with |.| replaced by its eta-ball smoothing, which is
  // (v^2 + eta^2) / (2 eta) on |v| < eta and |v| elsewhere.
  double smoothed_best_response(int i, double x_i, double c, double eta) const;
  // Unconstrained minimizer of E f_i (the fixed point of both best responses when kappa = 0).
  double minimizer(int i) const;

 private:
  SyntheticParams params_;
  PlayerLayout layout_;
  FeasibleSet feasible_;
};

}  // namespace hgame
