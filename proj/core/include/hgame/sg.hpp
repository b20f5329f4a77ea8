#pragma once

// Projected stochastic (sub)gradient baseline: x <- Pi(x - alpha0/sqrt(k) v(x, w_k)).

#include <cstdint>

#include "hgame/game.hpp"
#include "hgame/run_report.hpp"

namespace hgame {

struct SgConfig {
  double alpha0 = 0.1;
  std::int64_t total_iters = 10'000;

  void validate() const;
};

namespace sg {

// One operator sample per iteration, drawn sequentially from a copy of `stream`.
// For the constrained Cournot game the oracle already acts on (x, p), so the
// multipliers share alpha_k and are projected onto R_+ with the primal block.
// Without a hook only x0 and the final iterate are kept.
RunReport run(const GameOracle& game, const SgConfig& config, const Vector& x0, const RandomStream& stream,
              const ResidualHook& hook = {{}, Cadence::final_only()});

}  // namespace sg

}  // namespace hgame
