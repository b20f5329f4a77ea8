#include "hgame/run_report.hpp"

#include <utility>

namespace hgame {

TraceRecorder::TraceRecorder(std::string solver, const ResidualHook& hook)
    : hook_(hook), start_(Clock::now()) {
  report_.solver = std::move(solver);
}

bool TraceRecorder::due(std::int64_t k, std::int64_t samples_cum, bool final) const {
  if (k == 0 || final) return true;
  const Cadence& c = hook_.cadence;
  if (c.every > 0 && k % c.every == 0) return true;
  if (c.sample_stride > 0 && samples_cum / c.sample_stride > last_samples_ / c.sample_stride) return true;
  return false;
}

void TraceRecorder::observe(std::int64_t k, const Vector& x, std::int64_t samples_cum, bool final) {
  const bool record = due(k, samples_cum, final);
  last_samples_ = samples_cum;
  if (!record) return;
  // A point can be both "k == 0" and "final" (zero iterations); keep one.
  if (!report_.trace.empty() && report_.trace.back().k == k) return;
  TracePoint tp;
  tp.k = k;
  tp.samples_cum = samples_cum;
  const auto now = Clock::now();
  tp.wall_ms = std::chrono::duration<double, std::milli>(now - start_ - excluded_).count();
  if (hook_.fn) {
    const ResidualValue r = hook_.fn(x, k);
    tp.residual = r.estimate;
    tp.residual_stderr = r.stderr_;
    excluded_ += Clock::now() - now;
  }
  report_.iterates.push_back(x);
  report_.trace.push_back(tp);
}

RunReport TraceRecorder::finish(std::int64_t samples_total) && {
  report_.total_samples = samples_total;
  return std::move(report_);
}

}  // namespace hgame
