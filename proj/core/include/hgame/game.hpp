#pragma once

// Stochastic hierarchical games as seen by the solvers: a block layout, a
// product feasible set, and sampled oracles. Lower-level (follower) solves
// happen inside the oracles; solvers only ever see the implicit upper level.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hgame/rng.hpp"

namespace hgame {

using Vector = Eigen::VectorXd;
using VectorRef = Eigen::Ref<Eigen::VectorXd>;
using ConstVectorRef = Eigen::Ref<const Eigen::VectorXd>;

class PlayerLayout {
 public:
  PlayerLayout() = default;
  explicit PlayerLayout(std::vector<int> dims);
  // N players with one scalar strategy each.
  static PlayerLayout scalar(int n_players);

  int n_players() const noexcept { return static_cast<int>(dims_.size()); }
  int dim(int i) const { return dims_.at(static_cast<std::size_t>(i)); }
  int offset(int i) const { return offsets_.at(static_cast<std::size_t>(i)); }
  int total_dim() const noexcept { return total_; }
  const std::vector<int>& dims() const noexcept { return dims_; }

 private:
  std::vector<int> dims_;
  std::vector<int> offsets_;
  int total_ = 0;
};

enum class SetKind { kWholeSpace, kNonnegative, kBox };

struct PlayerSet {
  SetKind kind = SetKind::kWholeSpace;
  Vector lo;  // only for kBox
  Vector hi;

  static PlayerSet whole_space() { return {}; }
  static PlayerSet nonnegative() { return {SetKind::kNonnegative, {}, {}}; }
  static PlayerSet box(Vector lo, Vector hi);
  static PlayerSet box(int dim, double lo, double hi);
};

// Cartesian product of per-player sets, aligned with a PlayerLayout.
class FeasibleSet {
 public:
  FeasibleSet() = default;
  FeasibleSet(PlayerLayout layout, std::vector<PlayerSet> sets);
  static FeasibleSet uniform(const PlayerLayout& layout, const PlayerSet& set);

  const PlayerLayout& layout() const noexcept { return layout_; }
  const PlayerSet& player(int i) const { return sets_.at(static_cast<std::size_t>(i)); }

  // Euclidean projection of a joint vector. Throws NumericError on NaN.
  Vector project(const Vector& x) const;
  void project_in_place(VectorRef x) const;
  // Projection of one player's block onto X_i.
  void project_block(int i, VectorRef v) const;
  bool contains(const Vector& x, double tol = 0.0) const;

 private:
  PlayerLayout layout_;
  std::vector<PlayerSet> sets_;
};

// Free-function form of FeasibleSet::project.
inline Vector project(const FeasibleSet& set, const Vector& x) { return set.project(x); }

// A stochastic hierarchical game. Implementations are immutable after
// construction; all randomness comes from the stream argument, so cloning the
// stream before a call reproduces the call exactly.
class GameOracle {
 public:
  virtual ~GameOracle() = default;

  virtual const PlayerLayout& layout() const = 0;
  virtual const FeasibleSet& feasible() const = 0;

  // One realization v(x, w) of the concatenated player subgradients, with the
  // normal-cone part left to the solvers' projections.
  virtual void operator_sample(const Vector& x, RandomStream& stream, VectorRef out) const = 0;

  // One realization of player i's implicit objective f_i(x^i, y^i(x, w), x^-i, w).
  virtual double objective_sample(int player, const Vector& x, RandomStream& stream) const;
  virtual bool has_objective() const { return false; }

  // Optional expectation constraint of player i: one realization c_i(x^i, w).
  virtual int constraints_per_player() const { return 0; }
  virtual double constraint_sample(int player, const Vector& x, RandomStream& stream) const;
  // Adds multiplier * grad_{x^i} c_i(x^i, w) to `block` (player i's block).
  virtual void constraint_gradient_apply(int player, const Vector& x, double multiplier,
                                         VectorRef block) const;

  virtual std::string name() const = 0;

  Vector operator_sample(const Vector& x, RandomStream& stream) const;
};

struct MeanEstimate {
  Vector mean;
  Vector stderr_;  // componentwise standard error
  std::int64_t n_samples = 0;

  double stderr_norm() const { return stderr_.norm(); }
};

// Monte-Carlo average of n_samples operator samples at x.
MeanEstimate estimate_mean_operator(const GameOracle& game, const Vector& x, std::int64_t n_samples,
                                    RandomStream& stream);

// Throws NumericError if any entry is non-finite.
void require_finite(const Vector& x, const char* what, std::int64_t iteration = -1);

}  // namespace hgame
