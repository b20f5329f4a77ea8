#pragma once

// Solution-quality measures. Measurement samples are never charged to the
// solver's budget.

#include <cstdint>

#include "hgame/game.hpp"
#include "hgame/run_report.hpp"
#include "hgame/smoothing_br.hpp"

namespace hgame {

struct ResidualConfig {
  double lambda = 0.1;
  double theta = 0.1;                 // SA scale for the resolvent estimate
  std::int64_t inner_steps = 10'000;
  std::int64_t samples_per_step = 1;
  int repeats = 5;

  void validate() const;
};

// ||x - J^(x)|| / lambda averaged over `repeats` independent resolvent
// estimates (repeat r uses stream.derive(r)); stderr from their spread.
ResidualValue yosida_residual(const GameOracle& game, const Vector& x, const ResidualConfig& config,
                              const RandomStream& stream);

// Mean over players of ||x^i - B^_{i,eta}(x)||, each B^ from zsol_solve with
// `zsol_steps` outer steps and stream.derive(i). The stderr field is the
// standard error across players.
ResidualValue br_residual(const GameOracle& game, const SmoothingParams& params, const Vector& x,
                          std::int64_t zsol_steps, const RandomStream& stream);

// Smallest ZSOL step count whose sample use is at least `factor` times that
// of `base_steps`.
std::int64_t inflated_zsol_steps(const SmoothingParams& params, std::int64_t base_steps, double factor = 4.0);

// Hooks evaluate at iteration k with stream.derive(k), so values do not depend
// on which other iterations were measured.
ResidualHook yosida_hook(const GameOracle& game, ResidualConfig config, RandomStream stream, Cadence cadence);
ResidualHook br_hook(const GameOracle& game, SmoothingParams params, std::int64_t zsol_steps, RandomStream stream,
                     Cadence cadence);

}  // namespace hgame
