#include "hgame/sg.hpp"

#include <cmath>

#include "hgame/errors.hpp"

namespace hgame {

void SgConfig::validate() const {
  if (!(alpha0 > 0.0)) throw ParameterError("sg: alpha0 must be > 0");
  if (total_iters < 0) throw ParameterError("sg: total_iters must be >= 0");
}

namespace sg {

RunReport run(const GameOracle& game, const SgConfig& config, const Vector& x0, const RandomStream& stream,
              const ResidualHook& hook) {
  config.validate();
  if (x0.size() != game.layout().total_dim()) throw ParameterError("sg: x0 has the wrong dimension");
  require_finite(x0, "sg");
  const FeasibleSet& set = game.feasible();
  RandomStream rs = stream;
  TraceRecorder rec("sg", hook);
  Vector x = x0;
  Vector v(x.size());
  rec.observe(0, x, 0, config.total_iters == 0);
  for (std::int64_t k = 1; k <= config.total_iters; ++k) {
    game.operator_sample(x, rs, v);
    x -= (config.alpha0 / std::sqrt(static_cast<double>(k))) * v;
    if (!x.allFinite()) throw NumericError("sg: non-finite iterate", k);
    set.project_in_place(x);
    rec.observe(k, x, k, k == config.total_iters);
  }
  return std::move(rec).finish(config.total_iters);
}

}  // namespace sg

}  // namespace hgame
