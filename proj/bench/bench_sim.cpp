#include <benchmark/benchmark.h>
#include <omp.h>

#include "netiss/sim.hpp"
#include "netiss/traffic.hpp"

using namespace netiss;

namespace {

struct Fixture {
  NetworkSpec spec;
  StepPlan plan;
  Vec src, dst;

  explicit Fixture(Index n) : spec(build_traffic_network({})) {
    std::vector<Index> tgt, all;
    for (Index i = 1; i <= n; ++i) tgt.push_back(i);
    for (Index i = 1; i <= n + 8; ++i) all.push_back(i);
    auto target = Layout::make(spec, tgt), source = Layout::make(spec, all);
    plan = make_step_plan(spec, target, source);
    src.resize(source->width());
    for (std::size_t k = 0; k < src.size(); ++k) src[k] = static_cast<double>(k % 17);
    dst.resize(target->width());
  }
};

template <Exec E>
void BM_Advance(benchmark::State& state) {
  Fixture f(static_cast<Index>(state.range(0)));
  const auto u = InputSignal::constant(1.0);
  for (auto _ : state) {
    advance(E, f.plan, f.src, f.dst, 0, u);
    benchmark::DoNotOptimize(f.dst.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = E == Exec::Serial ? 1 : omp_get_max_threads();
}

}  // namespace

BENCHMARK(BM_Advance<Exec::Serial>)->Arg(10000)->Arg(100000)->UseRealTime();
BENCHMARK(BM_Advance<Exec::Parallel>)->Arg(10000)->Arg(100000)->UseRealTime();

BENCHMARK_MAIN();
