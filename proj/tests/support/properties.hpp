#pragma once

// Statistical and analytic property checks shared by the unit tests and the
// acceptance runner. Each returns a pass flag and a one-line summary.

#include <cstdint>
#include <string>

#include "hgame/hgame.hpp"

namespace hgame::checks {

struct Check {
  bool pass = true;
  std::string detail;
};

// A_{j+1} = (1 - 2c theta/j) A_j + (theta/j)^2 M^2 / 2 stays below the
// O(1/j) envelope on [J, 10^4] for random (c, M, theta, A_1) with 2 c theta > 1.
Check recursion_lemma(std::uint64_t seed, int instances = 100, std::int64_t horizon = 10'000);

// Plain projected fixed-point iteration for the follower LCP; the oracle the
// closed-form solve is compared against.
Vector follower_lcp_reference(const MlmfParams& params, double X, double a, int max_iters = 200'000);

// Complementarity <= 1e-10, dY/dX in (-1, 0], agreement with the reference
// LCP solve to 1e-8, and Y nonincreasing in X.
Check follower_properties(std::uint64_t seed, int instances = 1000);

// Per-sample potential identity on the bilevel game with common random numbers.
Check potential_identity(std::uint64_t seed, int triples = 1000);

// Error of the zeroth-order batch mean against the exact smoothed gradient
// over batch sizes 10..10^4; log-log slope must be <= -0.4.
struct SlopeCheck {
  Check check;
  double slope = 0.0;
};
SlopeCheck zo_unbiasedness(std::uint64_t seed, ZoEstimator estimator = ZoEstimator::kSymmetric);

// 0 <= f_eta - f <= eta * beta within 3 standard errors on random bilevel points.
Check smoothing_sandwich(std::uint64_t seed, int points = 50);

// |res(x) - res(x')| <= ||x - x'|| / lambda + 6 combined stderr on random MLMF pairs.
Check yosida_lipschitz(std::uint64_t seed, int pairs = 50);

// (T(x) - T(x'))'(x - x') >= -3 stderr with common random numbers.
Check monotone_pairs(const GameOracle& game, std::uint64_t seed, int pairs = 100, std::int64_t samples = 10'000,
                     double lo = 0.0, double hi = 1.0);
Check monotone_pairs_all(std::uint64_t seed, int pairs = 100);

// Two runs of every solver (and both residuals) from the same seed are bitwise equal.
Check seed_determinism(std::uint64_t seed);

// ||B - B_eta||^2 <= 2 eta beta / c on the separable game.
Check br_proximity(std::uint64_t seed);

// Unit sphere norms and O(1/sqrt(K)) decay of the componentwise mean.
Check sphere_sampling(std::uint64_t seed);

// x0 uniform on [0, 1]^n from the given stream.
Vector uniform_start(int n, RandomStream& stream);

}  // namespace hgame::checks
