#include "hgame/residual.hpp"

#include <cmath>
#include <vector>

#include "hgame/errors.hpp"
#include "hgame/stats.hpp"
#include "hgame/vr_spp.hpp"

namespace hgame {

void ResidualConfig::validate() const {
  if (!(lambda > 0.0)) throw ParameterError("residual: lambda must be > 0");
  if (!(theta > 0.0)) throw ParameterError("residual: theta must be > 0");
  if (inner_steps < 1) throw ParameterError("residual: inner_steps must be >= 1");
  if (samples_per_step < 1) throw ParameterError("residual: samples_per_step must be >= 1");
  if (repeats < 1) throw ParameterError("residual: repeats must be >= 1");
}

ResidualValue yosida_residual(const GameOracle& game, const Vector& x, const ResidualConfig& config,
                              const RandomStream& stream) {
  config.validate();
  std::vector<double> est;
  est.reserve(static_cast<std::size_t>(config.repeats));
  for (int r = 0; r < config.repeats; ++r) {
    RandomStream s = stream.derive(static_cast<std::uint64_t>(r));
    const Vector J = inner_resolvent(game, x, config.lambda, config.theta, config.inner_steps, s,
                                     config.samples_per_step);
    est.push_back((x - J).norm() / config.lambda);
  }
  return {stats::mean(est), stats::standard_error(est)};
}

ResidualValue br_residual(const GameOracle& game, const SmoothingParams& params, const Vector& x,
                          std::int64_t zsol_steps, const RandomStream& stream) {
  const PlayerLayout& lay = game.layout();
  std::vector<double> per_player;
  per_player.reserve(static_cast<std::size_t>(lay.n_players()));
  for (int i = 0; i < lay.n_players(); ++i) {
    RandomStream s = stream.derive(static_cast<std::uint64_t>(i));
    const ZsolResult br = zsol_solve(game, params, i, x, zsol_steps, s);
    per_player.push_back((x.segment(lay.offset(i), lay.dim(i)) - br.v).norm());
  }
  return {stats::mean(per_player), stats::standard_error(per_player)};
}

std::int64_t inflated_zsol_steps(const SmoothingParams& params, std::int64_t base_steps, double factor) {
  const double target = factor * static_cast<double>(params.zsol_samples(std::max<std::int64_t>(base_steps, 1)));
  std::int64_t steps = std::max<std::int64_t>(base_steps, 1);
  while (static_cast<double>(params.zsol_samples(steps)) < target) ++steps;
  return steps;
}

ResidualHook yosida_hook(const GameOracle& game, ResidualConfig config, RandomStream stream, Cadence cadence) {
  config.validate();
  return {[&game, config, stream](const Vector& x, std::int64_t k) {
            return yosida_residual(game, x, config, stream.derive(static_cast<std::uint64_t>(k)));
          },
          cadence};
}

ResidualHook br_hook(const GameOracle& game, SmoothingParams params, std::int64_t zsol_steps, RandomStream stream,
                     Cadence cadence) {
  params.validate();
  return {[&game, params, zsol_steps, stream](const Vector& x, std::int64_t k) {
            return br_residual(game, params, x, zsol_steps, stream.derive(static_cast<std::uint64_t>(k)));
          },
          cadence};
}

}  // namespace hgame
