#pragma once

// Variance-reduced stochastic proximal point:
//   x^{k+1} ~ (I + lambda T)^{-1}(x^k), each resolvent approximated by
//   projected SA with steps theta/j over N_k samples.

#include <cstdint>

#include "hgame/game.hpp"
#include "hgame/run_report.hpp"

namespace hgame {

enum class ScheduleKind {
  kPolynomial,     // ceil((k+1)^(2a)), a > 1
  kGeometric,      // floor(rho^-(k+1)), 0 < rho < 1
  kGeometricBase,  // floor(r^(k+1)), r > 1
  kConstant,       // fixed n
};

struct SampleSchedule {
  ScheduleKind kind = ScheduleKind::kGeometricBase;
  double param = 1.1;                // a, rho, r or n depending on kind
  std::int64_t n_max = 1'000'000;    // cap on N_k

  static SampleSchedule polynomial(double a) { return {ScheduleKind::kPolynomial, a}; }
  static SampleSchedule geometric(double rho) { return {ScheduleKind::kGeometric, rho}; }
  static SampleSchedule geometric_base(double r) { return {ScheduleKind::kGeometricBase, r}; }
  static SampleSchedule constant(std::int64_t n) { return {ScheduleKind::kConstant, static_cast<double>(n)}; }

  void validate() const;
};

std::int64_t sample_schedule(const SampleSchedule& schedule, std::int64_t k);

struct VrSppConfig {
  double lambda = 0.1;
  double theta = 0.1;
  SampleSchedule schedule;
  std::int64_t outer_iters = 60;
  std::int64_t min_inner_steps = 10;  // J0
  bool increasing_floor = false;      // use J0 * sqrt(k+1) instead of J0

  void validate() const;
  std::int64_t inner_steps(std::int64_t k) const;
};

// Approximates (I + lambda T)^{-1}(x_k) with n_steps projected SA steps
//   z <- Pi(z - (theta/j) (v_j + (z - x_k)/lambda)),
// v_j the mean of `samples_per_step` operator samples at z.
Vector inner_resolvent(const GameOracle& game, const Vector& x_k, double lambda, double theta,
                       std::int64_t n_steps, RandomStream& stream, std::int64_t samples_per_step = 1);

namespace vr_spp {

// Outer iteration k uses stream.derive(k).
RunReport run(const GameOracle& game, const VrSppConfig& config, const Vector& x0, const RandomStream& stream,
              const ResidualHook& hook = {});

}  // namespace vr_spp

}  // namespace hgame
