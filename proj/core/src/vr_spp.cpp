#include "hgame/vr_spp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hgame/errors.hpp"

namespace hgame {

void SampleSchedule::validate() const {
  switch (kind) {
    case ScheduleKind::kPolynomial:
      if (!(param > 1.0)) throw ParameterError("polynomial schedule needs a > 1");
      break;
    case ScheduleKind::kGeometric:
      if (!(param > 0.0 && param < 1.0)) throw ParameterError("geometric schedule needs 0 < rho < 1");
      break;
    case ScheduleKind::kGeometricBase:
      if (!(param > 1.0)) throw ParameterError("geometric-base schedule needs r > 1");
      break;
    case ScheduleKind::kConstant:
      if (!(param >= 1.0)) throw ParameterError("constant schedule needs n >= 1");
      break;
  }
  if (n_max < 1) throw ParameterError("schedule cap n_max must be >= 1");
}

std::int64_t sample_schedule(const SampleSchedule& s, std::int64_t k) {
  if (k < 0) throw ParameterError("sample_schedule: k must be >= 0");
  const double kp1 = static_cast<double>(k + 1);
  double n = 1.0;
  switch (s.kind) {
    case ScheduleKind::kPolynomial:
      n = std::ceil(std::pow(kp1, 2.0 * s.param));
      break;
    case ScheduleKind::kGeometric:
      n = std::floor(std::pow(s.param, -kp1));
      break;
    case ScheduleKind::kGeometricBase:
      n = std::floor(std::pow(s.param, kp1));
      break;
    case ScheduleKind::kConstant:
      n = std::floor(s.param);
      break;
  }
  // pow can overflow to inf for large k; the cap handles it.
  const double cap = static_cast<double>(s.n_max);
  if (!(n < cap)) return s.n_max;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(n));
}

void VrSppConfig::validate() const {
  if (!(lambda > 0.0)) throw ParameterError("vr-spp: lambda must be > 0");
  if (!(theta > 0.0)) throw ParameterError("vr-spp: theta must be > 0");
  if (outer_iters < 0) throw ParameterError("vr-spp: outer_iters must be >= 0");
  if (min_inner_steps < 1) throw ParameterError("vr-spp: min_inner_steps must be >= 1");
  schedule.validate();
}

std::int64_t VrSppConfig::inner_steps(std::int64_t k) const {
  std::int64_t floor_steps = min_inner_steps;
  if (increasing_floor)
    floor_steps = static_cast<std::int64_t>(std::ceil(static_cast<double>(min_inner_steps) * std::sqrt(k + 1.0)));
  return std::max(floor_steps, sample_schedule(schedule, k));
}

Vector inner_resolvent(const GameOracle& game, const Vector& x_k, double lambda, double theta,
                       std::int64_t n_steps, RandomStream& stream, std::int64_t samples_per_step) {
  if (n_steps < 1) throw ParameterError("inner_resolvent: n_steps must be >= 1");
  if (samples_per_step < 1) throw ParameterError("inner_resolvent: samples_per_step must be >= 1");
  if (!(lambda > 0.0) || !(theta > 0.0)) throw ParameterError("inner_resolvent: lambda and theta must be > 0");
  const FeasibleSet& set = game.feasible();
  const Eigen::Index n = x_k.size();
  Vector z = x_k;
  Vector v(n);
  Vector acc(n);
  const double inv_lambda = 1.0 / lambda;
  const double inv_m = 1.0 / static_cast<double>(samples_per_step);
  for (std::int64_t j = 1; j <= n_steps; ++j) {
    if (samples_per_step == 1) {
      game.operator_sample(z, stream, v);
    } else {
      acc.setZero();
      for (std::int64_t s = 0; s < samples_per_step; ++s) {
        game.operator_sample(z, stream, v);
        acc += v;
      }
      v = acc * inv_m;
    }
    const double alpha = theta / static_cast<double>(j);
    z -= alpha * (v + inv_lambda * (z - x_k));
    if (!z.allFinite()) throw NumericError("inner_resolvent: non-finite iterate", j);
    set.project_in_place(z);
  }
  return z;
}

namespace vr_spp {

RunReport run(const GameOracle& game, const VrSppConfig& config, const Vector& x0, const RandomStream& stream,
              const ResidualHook& hook) {
  config.validate();
  if (x0.size() != game.layout().total_dim()) throw ParameterError("vr-spp: x0 has the wrong dimension");
  require_finite(x0, "vr-spp");
  TraceRecorder rec("vr-spp", hook);
  Vector x = x0;
  std::int64_t samples = 0;
  rec.observe(0, x, 0, config.outer_iters == 0);
  for (std::int64_t k = 0; k < config.outer_iters; ++k) {
    const std::int64_t steps = config.inner_steps(k);
    RandomStream child = stream.derive(static_cast<std::uint64_t>(k));
    try {
      x = inner_resolvent(game, x, config.lambda, config.theta, steps, child);
    } catch (const NumericError& e) {
      throw NumericError(std::string("vr-spp outer step: ") + e.what(), k);
    }
    samples += steps;
    rec.observe(k + 1, x, samples, k + 1 == config.outer_iters);
  }
  return std::move(rec).finish(samples);
}

}  // namespace vr_spp

}  // namespace hgame
