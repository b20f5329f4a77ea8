#include "hgame/mlmf_cournot.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "hgame/errors.hpp"

namespace hgame {

void MlmfParams::validate() const {
  std::vector<std::string> bad;
  if (n_leaders < 1) bad.emplace_back("n_leaders must be >= 1");
  if (n_followers < 1) bad.emplace_back("n_followers must be >= 1");
  if (!(b > 0.0)) bad.emplace_back("b must be > 0");
  if (!(a_lo < a_hi)) bad.emplace_back("a_lo must be < a_hi");
  if (leader_cost.size() != n_leaders) bad.emplace_back("leader_cost must have n_leaders entries");
  else if ((leader_cost.array() < 0.0).any()) bad.emplace_back("leader_cost must be >= 0");
  if (follower_cost.size() != n_followers) bad.emplace_back("follower_cost must have n_followers entries");
  else if ((follower_cost.array() < 0.0).any()) bad.emplace_back("follower_cost must be >= 0");
  if (cap.size() != 0 && cap.size() != n_leaders) bad.emplace_back("cap must be empty or have n_leaders entries");
  if (!(cap_noise >= 0.0)) bad.emplace_back("cap_noise must be >= 0");
  if (!bad.empty()) throw ValidationError(std::move(bad));
}

MlmfParams MlmfParams::random_instance(int n_leaders, int n_followers, RandomStream& stream, double c_lo,
                                       double c_hi, double follower_cost, double cap) {
  if (n_leaders < 1 || n_followers < 1) throw ParameterError("mlmf: need at least one leader and follower");
  MlmfParams p;
  p.n_leaders = n_leaders;
  p.n_followers = n_followers;
  p.leader_cost.resize(n_leaders);
  for (int i = 0; i < n_leaders; ++i) p.leader_cost[i] = stream.uniform(c_lo, c_hi);
  p.follower_cost = Vector::Constant(n_followers, follower_cost);
  p.cap = Vector::Constant(n_leaders, cap);
  return p;
}

// Follower j's condition: 0 <= y_j  _|_  (c_j + b) y_j - R + b Y >= 0 with
// R = a - bX. Every follower shares the activity test R - bY > 0, and with all
// of them active Y = R S / (1 + b S), S = sum 1/(c_j + b). So the active set is
// either everyone (R > 0) or nobody.
FollowerAggregate follower_aggregate(const MlmfParams& params, double X, double a) {
  if (!std::isfinite(X) || !std::isfinite(a)) throw NumericError("follower_equilibrium: non-finite input");
  const double b = params.b;
  const double R = a - b * X;
  if (!(R > 0.0)) return {};
  double S = 0.0;
  for (Eigen::Index j = 0; j < params.follower_cost.size(); ++j) S += 1.0 / (params.follower_cost[j] + b);
  const double bS = b * S;
  return {R * S / (1.0 + bS), -bS / (1.0 + bS)};
}

FollowerSolution follower_equilibrium(const MlmfParams& params, double X, double a) {
  const FollowerAggregate agg = follower_aggregate(params, X, a);
  FollowerSolution sol;
  const Eigen::Index m = params.follower_cost.size();
  sol.y = Vector::Zero(m);
  sol.Y = agg.Y;
  sol.dY_dX = agg.dY_dX;
  if (agg.Y > 0.0) {
    const double margin = a - params.b * (X + agg.Y);
    double total = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      sol.y[j] = margin / (params.follower_cost[j] + params.b);
      total += sol.y[j];
    }
    sol.Y = total;
  }
  return sol;
}

double follower_complementarity_residual(const MlmfParams& params, double X, double a, const Vector& y) {
  const double Y = y.sum();
  double worst = 0.0;
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    const double F = params.follower_cost[j] * y[j] - a + params.b * (X + Y) + params.b * y[j];
    worst = std::max(worst, std::abs(std::min(y[j], F)));
  }
  return worst;
}

MlmfGame::MlmfGame(MlmfParams params) : params_(std::move(params)) {
  params_.validate();
  layout_ = PlayerLayout::scalar(params_.n_leaders);
  feasible_ = FeasibleSet::uniform(layout_, PlayerSet::nonnegative());
}

void MlmfGame::operator_at(const Vector& x, double a, VectorRef out) const {
  const double X = x.sum();
  const FollowerAggregate f = follower_aggregate(params_, X, a);
  const double price = a - params_.b * (X + f.Y);
  const double slope = (1.0 + f.dY_dX) * params_.b;
  out = (params_.leader_cost.array() + slope) * x.array() - price;
}

void MlmfGame::operator_sample(const Vector& x, RandomStream& stream, VectorRef out) const {
  operator_at(x, stream.uniform(params_.a_lo, params_.a_hi), out);
}

double MlmfGame::objective_sample(int player, const Vector& x, RandomStream& stream) const {
  const double a = stream.uniform(params_.a_lo, params_.a_hi);
  const double X = x.sum();
  const double price = a - params_.b * (X + follower_aggregate(params_, X, a).Y);
  const double xi = x[player];
  return 0.5 * params_.leader_cost[player] * xi * xi - price * xi;
}

Vector DualPoint::joint() const {
  Vector z(x.size() + p.size());
  z << x, p;
  return z;
}

DualPoint DualPoint::split(const Vector& z) {
  if (z.size() % 2 != 0) throw ParameterError("DualPoint::split: odd length");
  const Eigen::Index n = z.size() / 2;
  return {z.head(n), z.tail(n)};
}

Vector constrained_operator_sample(const MlmfGame& game, const DualPoint& z, RandomStream& stream) {
  const MlmfParams& pr = game.params();
  const int n = pr.n_leaders;
  if (z.x.size() != n || z.p.size() != n) throw ParameterError("constrained_operator_sample: dimension mismatch");
  if ((z.p.array() < 0.0).any()) throw ParameterError("constrained_operator_sample: multipliers must be >= 0");
  if (pr.cap.size() != n) throw ParameterError("constrained_operator_sample: caps not set");
  Vector out(2 * n);
  game.operator_sample(z.x, stream, out.head(n));
  out.head(n) += z.p;
  for (int i = 0; i < n; ++i) {
    const double w = stream.uniform(-pr.cap_noise, pr.cap_noise);
    out[n + i] = -(z.x[i] - pr.cap[i] + w);
  }
  return out;
}

ConstrainedMlmfGame::ConstrainedMlmfGame(MlmfParams params) : base_(std::move(params)) {
  if (base_.params().cap.size() != base_.params().n_leaders)
    throw ValidationError({"cap must have n_leaders entries for the constrained game"});
  layout_ = PlayerLayout::scalar(2 * base_.params().n_leaders);
  feasible_ = FeasibleSet::uniform(layout_, PlayerSet::nonnegative());
}

void ConstrainedMlmfGame::operator_sample(const Vector& z, RandomStream& stream, VectorRef out) const {
  const MlmfParams& pr = base_.params();
  const int n = pr.n_leaders;
  if (z.size() != 2 * n) throw ParameterError("constrained game: expected (x, p) of length 2N");
  base_.operator_at(z.head(n), stream.uniform(pr.a_lo, pr.a_hi), out.head(n));
  out.head(n) += z.tail(n);
  for (int i = 0; i < n; ++i) {
    const double w = stream.uniform(-pr.cap_noise, pr.cap_noise);
    out[n + i] = -(z[i] - pr.cap[i] + w);
  }
}

double ConstrainedMlmfGame::constraint_sample(int player, const Vector& x, RandomStream& stream) const {
  const MlmfParams& pr = base_.params();
  if (player < 0 || player >= pr.n_leaders) throw ParameterError("constraint_sample: bad player index");
  return x[player] - pr.cap[player] + stream.uniform(-pr.cap_noise, pr.cap_noise);
}

void ConstrainedMlmfGame::constraint_gradient_apply(int, const Vector&, double multiplier, VectorRef block) const {
  block.array() += multiplier;
}

}  // namespace hgame
