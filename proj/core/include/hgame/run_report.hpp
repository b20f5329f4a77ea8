#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "hgame/game.hpp"

namespace hgame {

struct ResidualValue {
  double estimate = std::numeric_limits<double>::quiet_NaN();
  double stderr_ = std::numeric_limits<double>::quiet_NaN();
};

struct TracePoint {
  std::int64_t k = 0;
  std::int64_t samples_cum = 0;  // solver oracle calls so far (measurement excluded)
  double wall_ms = 0.0;          // solver time so far (measurement excluded)
  double residual = std::numeric_limits<double>::quiet_NaN();
  double residual_stderr = std::numeric_limits<double>::quiet_NaN();
};

// iterates[t] is the iterate at trace[t].k.
struct RunReport {
  std::string solver;
  std::vector<Vector> iterates;
  std::vector<TracePoint> trace;
  std::int64_t total_samples = 0;

  const Vector& final_iterate() const { return iterates.back(); }
  double final_residual() const { return trace.empty() ? std::numeric_limits<double>::quiet_NaN() : trace.back().residual; }
};

// When to record an iterate (and evaluate the residual, if a hook is set).
// Iteration 0 and the final iteration are always recorded.
struct Cadence {
  std::int64_t every = 1;         // every n-th iteration; 0 disables
  std::int64_t sample_stride = 0; // each time samples_cum crosses a multiple; 0 disables

  static Cadence every_iteration() { return {1, 0}; }
  static Cadence final_only() { return {0, 0}; }
  static Cadence by_samples(std::int64_t stride) { return {0, stride}; }
};

using ResidualFn = std::function<ResidualValue(const Vector& x, std::int64_t k)>;

struct ResidualHook {
  ResidualFn fn;  // may be empty: iterates are still recorded
  Cadence cadence;
};

// Bookkeeping shared by the solvers.
class TraceRecorder {
 public:
  TraceRecorder(std::string solver, const ResidualHook& hook);

  // Call once per iteration with the new iterate; k = 0 for the starting point.
  void observe(std::int64_t k, const Vector& x, std::int64_t samples_cum, bool final);
  RunReport finish(std::int64_t samples_total) &&;

 private:
  using Clock = std::chrono::steady_clock;
  bool due(std::int64_t k, std::int64_t samples_cum, bool final) const;

  RunReport report_;
  const ResidualHook& hook_;
  Clock::time_point start_;
  Clock::duration excluded_{};
  std::int64_t last_samples_ = 0;
};

}  // namespace hgame
