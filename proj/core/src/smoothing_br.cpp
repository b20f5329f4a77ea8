#include "hgame/smoothing_br.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "hgame/errors.hpp"

namespace hgame {

void SmoothingParams::validate() const {
  if (!(eta > 0.0)) throw ParameterError("smoothing: eta must be > 0");
  if (!(prox_weight > 0.0)) throw ParameterError("smoothing: prox_weight must be > 0");
  if (!(zeta > 0.0)) throw ParameterError("smoothing: zeta must be > 0");
  if (!(batch_base > 1.0)) throw ParameterError("smoothing: batch_base must be > 1");
  if (!(batch_scale >= 1.0)) throw ParameterError("smoothing: batch_scale must be >= 1");
  if (batch_cap < 1) throw ParameterError("smoothing: batch_cap must be >= 1");
  if (steps_rule == StepsRule::kFixed && fixed_steps < 1) throw ParameterError("smoothing: fixed_steps must be >= 1");
}

std::int64_t SmoothingParams::batch_size(std::int64_t t) const {
  const double n = std::ceil(batch_scale * std::pow(batch_base, static_cast<double>(t + 1)));
  if (!(n < static_cast<double>(batch_cap))) return batch_cap;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(n));
}

std::int64_t SmoothingParams::zsol_steps(std::int64_t k) const {
  if (steps_rule == StepsRule::kFixed) return fixed_steps;
  if (k < 1) return 1;
  const double t = std::ceil(std::log(std::pow(static_cast<double>(k), 1.5)));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(t));
}

std::int64_t SmoothingParams::zsol_samples(std::int64_t n_steps) const {
  const std::int64_t per = estimator == ZoEstimator::kSinglePoint ? 1 : 2;
  std::int64_t total = 0;
  for (std::int64_t t = 0; t < n_steps; ++t) total += per * batch_size(t);
  return total;
}

double SmoothingParams::contraction_factor(double c, double zeta, double alpha) {
  return 1.0 - 2.0 * c * zeta + 2.0 * zeta * zeta * alpha * alpha;
}

double SmoothingParams::batch_base_from_q(double q) {
  if (!(q > 0.0 && q < 1.0)) throw ParameterError("batch_base_from_q: need 0 < q < 1");
  return 1.0 / q;
}

namespace {

void check_player(const GameOracle& game, int player, const Vector& v_i, const Vector& x) {
  const PlayerLayout& lay = game.layout();
  if (player < 0 || player >= lay.n_players()) throw ParameterError("smoothing: bad player index");
  if (v_i.size() != lay.dim(player)) throw ParameterError("smoothing: block has the wrong dimension");
  if (x.size() != lay.total_dim()) throw ParameterError("smoothing: x has the wrong dimension");
  if (!game.has_objective()) throw UnsupportedCase(game.name() + ": zeroth-order methods need objective samples");
}

// Accumulates the zeroth-order estimate for one block; `work` is x with the
// player's block overwritten in place.
class ZoSampler {
 public:
  ZoSampler(const GameOracle& game, const SmoothingParams& params, int player, const Vector& x)
      : game_(game), params_(params), player_(player), offset_(game.layout().offset(player)),
        dim_(game.layout().dim(player)), centre_(x.segment(offset_, dim_)), work_(x), u_(dim_), point_(dim_) {}

  double phi(const Vector& v, RandomStream& stream) {
    work_.segment(offset_, dim_) = v;
    const double prox = 0.5 * params_.prox_weight * (v - centre_).squaredNorm();
    return game_.objective_sample(player_, work_, stream) + prox;
  }

  // Adds one batch term to `acc`; returns the number of evaluations used.
  int add_term(const Vector& v, RandomStream& stream, Vector& acc) {
    stream.unit_sphere(u_);
    const double scale = static_cast<double>(dim_) / params_.eta;
    point_ = v + params_.eta * u_;
    if (params_.estimator == ZoEstimator::kSinglePoint) {
      acc += (scale * phi(point_, stream)) * u_;
      return 1;
    }
    RandomStream same_w = stream;
    const double shifted = phi(point_, stream);
    if (params_.estimator == ZoEstimator::kCentered) {
      const double base = phi(v, same_w);
      acc += (scale * (shifted - base)) * u_;
    } else {
      point_ = v - params_.eta * u_;
      const double mirrored = phi(point_, same_w);
      acc += (0.5 * scale * (shifted - mirrored)) * u_;
    }
    return 2;
  }

 private:
  const GameOracle& game_;
  const SmoothingParams& params_;
  int player_;
  int offset_;
  int dim_;
  Vector centre_;
  Vector work_;
  Vector u_;
  Vector point_;
};

}  // namespace

double smoothed_value_sample(const GameOracle& game, const SmoothingParams& params, int player, const Vector& v_i,
                             const Vector& x, RandomStream& stream) {
  check_player(game, player, v_i, x);
  const PlayerLayout& lay = game.layout();
  Vector work = x;
  work.segment(lay.offset(player), lay.dim(player)) = v_i + params.eta * stream.unit_ball(lay.dim(player));
  return game.objective_sample(player, work, stream);
}

Vector zo_gradient_batch(const GameOracle& game, const SmoothingParams& params, int player, const Vector& v_i,
                         const Vector& x, std::int64_t batch_size, RandomStream& stream) {
  check_player(game, player, v_i, x);
  if (batch_size < 1) throw ParameterError("zo_gradient_batch: batch_size must be >= 1");
  ZoSampler sampler(game, params, player, x);
  Vector acc = Vector::Zero(v_i.size());
  for (std::int64_t j = 0; j < batch_size; ++j) sampler.add_term(v_i, stream, acc);
  return acc / static_cast<double>(batch_size);
}

ZsolResult zsol_solve(const GameOracle& game, const SmoothingParams& params, int player, const Vector& x,
                      std::int64_t n_outer_steps, RandomStream& stream) {
  params.validate();
  if (n_outer_steps < 1) throw ParameterError("zsol_solve: n_outer_steps must be >= 1");
  const PlayerLayout& lay = game.layout();
  if (player < 0 || player >= lay.n_players()) throw ParameterError("zsol_solve: bad player index");
  Vector v = x.segment(lay.offset(player), lay.dim(player));
  check_player(game, player, v, x);
  ZoSampler sampler(game, params, player, x);
  ZsolResult res;
  Vector g(v.size());
  for (std::int64_t t = 0; t < n_outer_steps; ++t) {
    const std::int64_t batch = params.batch_size(t);
    g.setZero();
    for (std::int64_t j = 0; j < batch; ++j) res.samples += sampler.add_term(v, stream, g);
    v -= (params.zeta / static_cast<double>(batch)) * g;
    if (!v.allFinite()) throw NumericError("zsol_solve: non-finite iterate", t);
    game.feasible().project_block(player, v);
  }
  res.v = std::move(v);
  return res;
}

void ArspbrConfig::validate(int n_players) const {
  if (outer_iters < 0) throw ParameterError("arspbr: outer_iters must be >= 0");
  if (relaxation == RelaxationKind::kPower && !(power >= 0.0)) throw ParameterError("arspbr: power must be >= 0");
  if (relaxation == RelaxationKind::kCustom) {
    if (custom.empty()) throw ParameterError("arspbr: custom relaxation needs at least one value");
    for (double g : custom)
      if (!(g > 0.0 && g <= 1.0)) throw ParameterError("arspbr: relaxation values must lie in (0, 1]");
  }
  if (!player_probs.empty()) {
    if (static_cast<int>(player_probs.size()) != n_players)
      throw ParameterError("arspbr: player_probs needs one entry per player");
    double total = 0.0;
    for (double p : player_probs) {
      if (!(p > 0.0)) throw ParameterError("arspbr: player_probs must be > 0");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ParameterError("arspbr: player_probs must sum to 1");
  }
}

double ArspbrConfig::gamma(std::int64_t k) const {
  switch (relaxation) {
    case RelaxationKind::kUnrelaxed:
      return 1.0;
    case RelaxationKind::kPower:
      return std::pow(static_cast<double>(std::max<std::int64_t>(k, 1)), -power);
    case RelaxationKind::kCustom: {
      const auto idx = static_cast<std::size_t>(std::max<std::int64_t>(k, 1) - 1);
      return idx < custom.size() ? custom[idx] : custom.back();
    }
  }
  return 1.0;
}

namespace arspbr {

RunReport run(const GameOracle& game, const SmoothingParams& params, const ArspbrConfig& config, const Vector& x0,
              const RandomStream& stream, const ResidualHook& hook) {
  params.validate();
  const PlayerLayout& lay = game.layout();
  config.validate(lay.n_players());
  if (x0.size() != lay.total_dim()) throw ParameterError("arspbr: x0 has the wrong dimension");
  require_finite(x0, "arspbr");
  std::vector<double> probs = config.player_probs;
  if (probs.empty()) probs.assign(static_cast<std::size_t>(lay.n_players()), 1.0 / lay.n_players());

  RandomStream selector = stream.derive(0);
  const RandomStream zsol_root = stream.derive(1);
  TraceRecorder rec("arspbr", hook);
  Vector x = x0;
  std::int64_t samples = 0;
  rec.observe(0, x, 0, config.outer_iters == 0);
  for (std::int64_t k = 1; k <= config.outer_iters; ++k) {
    const int i = selector.categorical(probs);
    RandomStream child = zsol_root.derive(static_cast<std::uint64_t>(k));
    ZsolResult br;
    try {
      br = zsol_solve(game, params, i, x, params.zsol_steps(k), child);
    } catch (const NumericError& e) {
      throw NumericError(std::string("arspbr: ") + e.what(), k);
    }
    const double g = config.gamma(k);
    auto block = x.segment(lay.offset(i), lay.dim(i));
    block = (1.0 - g) * block + g * br.v;
    samples += br.samples;
    rec.observe(k, x, samples, k == config.outer_iters);
  }
  return std::move(rec).finish(samples);
}

}  // namespace arspbr

}  // namespace hgame
