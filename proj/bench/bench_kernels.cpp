#include <benchmark/benchmark.h>

#include <cmath>

#include "bicycle/sweep.hpp"

using namespace bicycle;

namespace {

Polygon heptagon() {
  std::vector<Vec> pts;
  for (int i = 0; i < 7; ++i) {
    const double t = 2 * M_PI * i / 7, r = 1.0 + 0.3 * std::cos(3 * t);
    pts.push_back(make_vec({r * std::cos(t), r * std::sin(t)}));
  }
  return Polygon(pts);
}

template <ScanResult (*Scan)(const Polygon&, double, double, int, const Tolerance&)>
void BM_scan(benchmark::State& state) {
  const Polygon v = heptagon();
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Scan(v, 0.01, 3.0, steps, Tolerance{}));
  state.SetItemsProcessed(state.iterations() * (steps + 1));
}

template <std::vector<RigidTrial> (*Trials)(const RigidSearch&)>
void BM_rigid(benchmark::State& state) {
  RigidSearch s;
  s.k = 3;
  s.trials = static_cast<int>(state.range(0));
  s.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(Trials(s));
  state.SetItemsProcessed(state.iterations() * s.trials);
}

}  // namespace

BENCHMARK(BM_scan<scan_serial>)->Name("scan/serial")->Arg(1000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_scan<scan_parallel>)->Name("scan/parallel")->Arg(1000)->Arg(20000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_rigid<rigid_trials_serial>)->Name("rigid/serial")->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rigid<rigid_trials_parallel>)->Name("rigid/parallel")->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
