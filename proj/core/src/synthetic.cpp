#include "hgame/synthetic.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include "hgame/errors.hpp"

namespace hgame {

void SyntheticParams::validate() const {
  std::vector<std::string> bad;
  if (s.size() < 1) bad.emplace_back("s must be non-empty");
  if (m.size() != s.size()) bad.emplace_back("m must match s");
  if (kappa.size() != s.size()) bad.emplace_back("kappa must match s");
  if (s.size() > 0 && !(s.array() > 0.0).all()) bad.emplace_back("s must be > 0");
  if (kappa.size() == s.size() && (kappa.array() < 0.0).any()) bad.emplace_back("kappa must be >= 0");
  if (!(noise >= 0.0)) bad.emplace_back("noise must be >= 0");
  if (!bad.empty()) throw ValidationError(std::move(bad));
}

SyntheticParams SyntheticParams::scalar(double s, double m, double kappa, double noise) {
  return {Vector::Constant(1, s), Vector::Constant(1, m), Vector::Constant(1, kappa), noise};
}

SyntheticGame::SyntheticGame(SyntheticParams params) : params_(std::move(params)) {
  params_.validate();
  layout_ = PlayerLayout::scalar(params_.n_players());
  feasible_ = FeasibleSet::uniform(layout_, PlayerSet::whole_space());
}

void SyntheticGame::operator_sample(const Vector& x, RandomStream& stream, VectorRef out) const {
  for (int i = 0; i < params_.n_players(); ++i) {
    const double w = params_.noise > 0.0 ? stream.uniform(-params_.noise, params_.noise) : 0.0;
    const double sign = x[i] > 0.0 ? 1.0 : (x[i] < 0.0 ? -1.0 : 0.0);
    out[i] = params_.s[i] * (x[i] - params_.m[i]) + params_.kappa[i] * sign + w;
  }
}

double SyntheticGame::objective_sample(int i, const Vector& x, RandomStream& stream) const {
  // Draw every player's noise so samples stay aligned across players.
  double w = 0.0;
  for (int j = 0; j < params_.n_players(); ++j) {
    const double wj = params_.noise > 0.0 ? stream.uniform(-params_.noise, params_.noise) : 0.0;
    if (j == i) w = wj;
  }
  const double v = x[i];
  const double dv = v - params_.m[i];
  return 0.5 * params_.s[i] * dv * dv + params_.kappa[i] * std::abs(v) + w * v;
}

double SyntheticGame::best_response(int i, double x_i, double c) const {
  const double s = params_.s[i];
  const double centre = (s * params_.m[i] + c * x_i) / (s + c);
  const double thr = params_.kappa[i] / (s + c);
  if (centre > thr) return centre - thr;
  if (centre < -thr) return centre + thr;
  return 0.0;
}

double SyntheticGame::smoothed_best_response(int i, double x_i, double c, double eta) const {
  if (!(eta > 0.0)) throw ParameterError("smoothed_best_response: eta must be > 0");
  const double s = params_.s[i];
  const double k = params_.kappa[i];
  const double num = s * params_.m[i] + c * x_i;
  // Stationarity (s + c) v - num + k h'(v) = 0 with h' = v/eta inside, sign(v) outside.
  const double inner = num / (s + c + k / eta);
  if (std::abs(inner) < eta) return inner;
  return num > 0.0 ? (num - k) / (s + c) : (num + k) / (s + c);
}

double SyntheticGame::minimizer(int i) const { return best_response(i, 0.0, 0.0); }

}  // namespace hgame
