#include <benchmark/benchmark.h>

#include "hgame/hgame.hpp"

using namespace hgame;

namespace {

MlmfGame mlmf(int n) {
  RandomStream s(1);
  return MlmfGame(MlmfParams::random_instance(n, 5, s));
}

BilevelGame bilevel(int n) {
  RandomStream s(2);
  return BilevelGame(BilevelParams::random_instance(n, s));
}

Vector start(int n) { return Vector::Constant(n, 0.5); }

}  // namespace

static void BM_StreamDraw(benchmark::State& state) {
  RandomStream s(7);
  for (auto _ : state) benchmark::DoNotOptimize(s.uniform01());
}
BENCHMARK(BM_StreamDraw);

static void BM_StreamDerive(benchmark::State& state) {
  const RandomStream s(7);
  std::uint64_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(s.derive(k++).key());
}
BENCHMARK(BM_StreamDerive);

static void BM_FollowerSolve(benchmark::State& state) {
  RandomStream s(3);
  const MlmfParams p = MlmfParams::random_instance(13, static_cast<int>(state.range(0)), s);
  double X = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(follower_aggregate(p, X, 10.0));
    X = X > 5.0 ? 0.0 : X + 0.01;
  }
}
BENCHMARK(BM_FollowerSolve)->Arg(5)->Arg(50);

static void BM_MlmfOperatorSample(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const MlmfGame g = mlmf(n);
  const Vector x = start(n);
  Vector out(n);
  RandomStream s(4);
  for (auto _ : state) {
    g.operator_sample(x, s, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_MlmfOperatorSample)->Arg(13)->Arg(43);

static void BM_BilevelOperatorSample(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const BilevelGame g = bilevel(n);
  const Vector x = start(n);
  Vector out(n);
  RandomStream s(5);
  for (auto _ : state) {
    g.operator_sample(x, s, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_BilevelOperatorSample)->Arg(13)->Arg(43);

// One VR-SPP inner solve; items are inner SA steps.
static void BM_InnerResolvent(benchmark::State& state) {
  const MlmfGame g = mlmf(13);
  const Vector x = start(13);
  const std::int64_t steps = state.range(0);
  RandomStream s(6);
  for (auto _ : state) benchmark::DoNotOptimize(inner_resolvent(g, x, 0.1, 0.1, steps, s));
  state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(BM_InnerResolvent)->Arg(100)->Arg(1000);

static void BM_ZoGradientBatch(benchmark::State& state) {
  const BilevelGame g = bilevel(13);
  const Vector x = start(13);
  const SmoothingParams sp;
  const Vector v = x.segment(0, 1);
  const std::int64_t batch = state.range(0);
  RandomStream s(8);
  for (auto _ : state) benchmark::DoNotOptimize(zo_gradient_batch(g, sp, 0, v, x, batch, s));
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_ZoGradientBatch)->Arg(16)->Arg(256);

static void BM_Zsol(benchmark::State& state) {
  const BilevelGame g = bilevel(13);
  const Vector x = start(13);
  const SmoothingParams sp;
  RandomStream s(9);
  for (auto _ : state) benchmark::DoNotOptimize(zsol_solve(g, sp, 0, x, state.range(0), s));
}
BENCHMARK(BM_Zsol)->Arg(7)->Arg(13);

static void BM_VrSppRun(benchmark::State& state) {
  const MlmfGame g = mlmf(13);
  VrSppConfig c;
  c.outer_iters = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(vr_spp::run(g, c, start(13), RandomStream(10)));
}
BENCHMARK(BM_VrSppRun)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_ArspbrRun(benchmark::State& state) {
  const BilevelGame g = bilevel(13);
  const SmoothingParams sp;
  ArspbrConfig c;
  c.outer_iters = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(arspbr::run(g, sp, c, start(13), RandomStream(11)));
}
BENCHMARK(BM_ArspbrRun)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
