#include <benchmark/benchmark.h>

#include "tangle/fluid_solver.hpp"
#include "tangle/simulator.hpp"
#include "tangle/stationary.hpp"
#include "tangle/tip_set.hpp"

namespace {

void BM_TipSetChurn(benchmark::State& state) {
  const auto size = static_cast<tangle::SiteId>(state.range(0));
  tangle::TipSet tips;
  for (tangle::SiteId id = 0; id < size; ++id) tips.insert(id);
  tangle::RandomStream rng(1);
  tangle::SiteId next = size;
  for (auto _ : state) {
    const auto [a, b] = tangle::select_tips(tips, rng);
    tips.erase(a);
    tips.erase(b);
    tips.insert(next++);
    if (tips.size() < size) tips.insert(next++);
    benchmark::DoNotOptimize(tips.size());
  }
}
BENCHMARK(BM_TipSetChurn)->Arg(10)->Arg(200)->Arg(10000);

void BM_SingleRun(benchmark::State& state) {
  const tangle::DelayModel delays[] = {tangle::DelayModel::fixed(5.0),
                                       tangle::DelayModel::exponential(0.2),
                                       tangle::DelayModel::uniform(1.0, 11.0)};
  tangle::SimConfig config{.lambda = 20.0, .delay = delays[state.range(0)], .horizon = 300.0};
  for (auto _ : state) {
    ++config.seed;
    benchmark::DoNotOptimize(tangle::run(config).trajectory.final_tips);
  }
  state.SetItemsProcessed(state.iterations() * 6000);
}
BENCHMARK(BM_SingleRun)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_Stationary(benchmark::State& state) {
  const auto delay = state.range(0) == 0 ? tangle::DelayModel::exponential(0.2)
                                         : tangle::DelayModel::uniform(1.0, 11.0);
  for (auto _ : state) benchmark::DoNotOptimize(tangle::solve_stationary(delay).l);
}
BENCHMARK(BM_Stationary)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FluidSolve(benchmark::State& state) {
  const auto delay = state.range(0) == 0 ? tangle::DelayModel::fixed(5.0)
                                         : tangle::DelayModel::uniform(1.0, 11.0);
  tangle::FluidOptions opts;
  opts.step = 0.05;
  for (auto _ : state) benchmark::DoNotOptimize(tangle::solve_pde(delay, 300.0, opts).l.back());
}
BENCHMARK(BM_FluidSolve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
