#pragma once

// Randomized eta-smoothing of player objectives, the zeroth-order solver for
// the smoothed proximal best response (ZSOL), and the asynchronous relaxed
// best-response outer loop (ARSPBR).

#include <cstdint>
#include <vector>

#include "hgame/game.hpp"
#include "hgame/run_report.hpp"

namespace hgame {

enum class ZoEstimator {
  // (n/eta) phi(v + eta u, w) u: one evaluation per direction.
  kSinglePoint,
  // (n/eta) [phi(v + eta u, w) - phi(v, w)] u: two evaluations sharing w.
  // Same expectation, variance that does not grow with |phi|.
  kCentered,
  // (n/2eta) [phi(v + eta u, w) - phi(v - eta u, w)] u: two evaluations
  // sharing w; also cancels the curvature term of the one-sided difference.
  kSymmetric,
};

enum class StepsRule {
  kLogPower,  // T_k = max(1, ceil(ln(k^1.5)))
  kFixed,
};

struct SmoothingParams {
  double eta = 0.1;
  double prox_weight = 1.0;  // c
  double zeta = 0.01;        // ZSOL steplength
  double batch_base = 1.5;   // N_t = ceil(batch_base^(t+1))
  double batch_scale = 1.0;  // multiplies N_t; > 1 only for measurement runs
  std::int64_t batch_cap = 1'000'000;
  StepsRule steps_rule = StepsRule::kLogPower;
  std::int64_t fixed_steps = 1;
  ZoEstimator estimator = ZoEstimator::kSymmetric;

  void validate() const;
  std::int64_t batch_size(std::int64_t t) const;
  std::int64_t zsol_steps(std::int64_t k) const;
  // Objective evaluations used by a ZSOL call with n_steps outer steps.
  std::int64_t zsol_samples(std::int64_t n_steps) const;

  // ZSOL rate constant q = 1 - 2 c zeta + 2 zeta^2 alpha^2.
  static double contraction_factor(double c, double zeta, double alpha);
  // The theoretical batch rule N_t = ceil(q^-(t+1)) expressed as a batch base.
  static double batch_base_from_q(double q);
};

// f_i((v_i + eta u, x^-i), w) with u uniform in the unit ball.
double smoothed_value_sample(const GameOracle& game, const SmoothingParams& params, int player, const Vector& v_i,
                             const Vector& x, RandomStream& stream);

// Mini-batch zeroth-order estimate of grad phi_eta(v_i), where
//   phi(v) = f_i((v, x^-i), w) + c/2 ||v - x^i||^2.
Vector zo_gradient_batch(const GameOracle& game, const SmoothingParams& params, int player, const Vector& v_i,
                         const Vector& x, std::int64_t batch_size, RandomStream& stream);

struct ZsolResult {
  Vector v;
  std::int64_t samples = 0;
};

// v^0 = x^i, v^{t+1} = Pi_i(v^t - zeta * zo_gradient_batch(N_t)).
ZsolResult zsol_solve(const GameOracle& game, const SmoothingParams& params, int player, const Vector& x,
                      std::int64_t n_outer_steps, RandomStream& stream);

enum class RelaxationKind { kUnrelaxed, kPower, kCustom };

struct ArspbrConfig {
  RelaxationKind relaxation = RelaxationKind::kUnrelaxed;
  double power = 0.51;           // gamma_k = k^-power
  std::vector<double> custom;    // gamma_1, gamma_2, ...; last value repeats
  std::vector<double> player_probs;  // empty = uniform
  std::int64_t outer_iters = 2000;

  void validate(int n_players) const;
  double gamma(std::int64_t k) const;  // k >= 1
};

namespace arspbr {

// Player selection uses stream.derive(0); the ZSOL call at step k uses
// stream.derive(1).derive(k).
RunReport run(const GameOracle& game, const SmoothingParams& params, const ArspbrConfig& config, const Vector& x0,
              const RandomStream& stream, const ResidualHook& hook = {});

}  // namespace arspbr

}  // namespace hgame
