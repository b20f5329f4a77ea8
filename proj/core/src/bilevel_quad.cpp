#include "hgame/bilevel_quad.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hgame/errors.hpp"

namespace hgame {

void BilevelParams::validate() const {
  std::vector<std::string> bad;
  if (n_players < 1) bad.emplace_back("n_players must be >= 1");
  const auto check = [&](const Vector& v, const char* name) {
    if (v.size() != n_players) bad.push_back(std::string(name) + " must have n_players entries");
  };
  check(Q, "Q");
  check(b, "b");
  check(l, "l");
  check(d, "d");
  if (Q.size() == n_players && !(Q.array() > 0.0).all()) bad.emplace_back("Q must be > 0");
  if (d.size() == n_players && (d.array() < 0.0).any()) bad.emplace_back("d must be >= 0");
  if (!(a_lo <= a_hi)) bad.emplace_back("a_lo must not exceed a_hi");
  if (!(mu >= 0.0)) bad.emplace_back("mu must be >= 0");
  if (boxed && !(box_lo <= box_hi)) bad.emplace_back("box_lo must not exceed box_hi");
  if (!bad.empty()) throw ValidationError(std::move(bad));
}

bool BilevelParams::coincident(double tol) const {
  for (int i = 0; i < n_players; ++i)
    if (std::abs(b[i] / Q[i] - l[i]) > tol) return false;
  return true;
}

BilevelParams BilevelParams::random_instance(int n_players, RandomStream& stream) {
  if (n_players < 1) throw ParameterError("bilevel: need at least one player");
  BilevelParams p;
  p.n_players = n_players;
  p.Q = Vector::Constant(n_players, 3.0);
  p.b.resize(n_players);
  p.l.resize(n_players);
  p.d.resize(n_players);
  for (int i = 0; i < n_players; ++i) {
    p.b[i] = stream.uniform(0.0, 3.0);
    p.l[i] = stream.uniform(0.0, 1.0);
    p.d[i] = stream.uniform(0.0, 100.0);
  }
  return p;
}

BilevelParams BilevelParams::coincident_instance(int n_players, RandomStream& stream) {
  BilevelParams p = random_instance(n_players, stream);
  p.b.setConstant(3.0);
  p.l.setConstant(1.0);
  return p;
}

double lower_level_solution(const BilevelParams& params, int i, double x_i) {
  return std::max(params.b[i] * x_i / params.Q[i], params.l[i] * x_i);
}

double lower_level_slope(const BilevelParams& params, int i, double x_i) {
  const double s_b = params.b[i] / params.Q[i];
  const double s_l = params.l[i];
  const double yb = s_b * x_i;
  const double yl = s_l * x_i;
  return yl > yb ? s_l : s_b;
}

BilevelGame::BilevelGame(BilevelParams params) : params_(std::move(params)) {
  params_.validate();
  layout_ = PlayerLayout::scalar(params_.n_players);
  feasible_ = FeasibleSet::uniform(layout_, params_.boxed
                                                ? PlayerSet::box(1, params_.box_lo, params_.box_hi)
                                                : PlayerSet::whole_space());
}

Vector BilevelGame::draw_intercepts(RandomStream& stream) const {
  Vector a(params_.n_players);
  for (int i = 0; i < params_.n_players; ++i) a[i] = stream.uniform(params_.a_lo, params_.a_hi);
  return a;
}

void BilevelGame::operator_sample(const Vector& x, RandomStream& stream, VectorRef out) const {
  const double w = params_.interaction;
  const double total = x.sum();
  for (int i = 0; i < params_.n_players; ++i) {
    const double a = stream.uniform(params_.a_lo, params_.a_hi);
    out[i] = (params_.d[i] + params_.mu + w) * x[i] + w * total + a * lower_level_slope(params_, i, x[i]);
  }
}

double BilevelGame::objective_sample(int player, const Vector& x, RandomStream& stream) const {
  // Consume the whole intercept vector so draws line up with potential_sample.
  double a_i = 0.0;
  for (int j = 0; j < params_.n_players; ++j) {
    const double a = stream.uniform(params_.a_lo, params_.a_hi);
    if (j == player) a_i = a;
  }
  const double v = x[player];
  return 0.5 * (params_.d[player] + params_.mu) * v * v + params_.interaction * v * x.sum() +
         a_i * lower_level_solution(params_, player, v);
}

double BilevelGame::potential_sample(const Vector& x, RandomStream& stream) const {
  const Vector a = draw_intercepts(stream);
  const double w = params_.interaction;
  const double total = x.sum();
  double p = 0.5 * w * total * total + 0.5 * w * x.squaredNorm();
  for (int i = 0; i < params_.n_players; ++i)
    p += 0.5 * (params_.d[i] + params_.mu) * x[i] * x[i] + a[i] * lower_level_solution(params_, i, x[i]);
  return p;
}

Vector direct_equilibrium(const BilevelParams& params) {
  params.validate();
  if (!params.coincident(1e-9))
    throw UnsupportedCase("direct_equilibrium: requires b_i / Q_i == l_i for every player");
  if (params.boxed) throw UnsupportedCase("direct_equilibrium: requires unconstrained strategies");
  const int n = params.n_players;
  const double w = params.interaction;
  const double a_bar = 0.5 * (params.a_lo + params.a_hi);
  Eigen::MatrixXd A = Eigen::MatrixXd::Constant(n, n, w);
  Vector rhs(n);
  for (int i = 0; i < n; ++i) {
    A(i, i) += params.d[i] + params.mu + w;
    rhs[i] = -params.l[i] * a_bar;
  }
  Vector x = A.partialPivLu().solve(rhs);
  if (!x.allFinite() || (A * x - rhs).norm() > 1e-10 * std::max(1.0, rhs.norm()))
    throw NumericError("direct_equilibrium: linear solve failed");
  return x;
}

}  // namespace hgame
