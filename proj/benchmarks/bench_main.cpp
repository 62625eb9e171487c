#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "hss/assignment.hpp"
#include "hss/features.hpp"
#include "hss/power_control.hpp"
#include "hss/scheduler.hpp"

namespace {

void BM_Assignment(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(0.0, 1.0e5);
  hss::DenseMatrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = dist(rng);
  for (auto _ : state) benchmark::DoNotOptimize(hss::solve_assignment(m, true).value);
  state.SetComplexityN(n);
}
BENCHMARK(BM_Assignment)->RangeMultiplier(2)->Range(8, 128)->Complexity(benchmark::oNCubed);

// Shared small world: one topology with a reduced Monte Carlo bank.
struct World {
  hss::Scenario scenario;
  hss::StatisticalCsi csi;
  hss::SampleBank bank;
  std::unique_ptr<hss::RateEngine> engine;
  std::unique_ptr<hss::PairwiseDeltas> deltas;

  explicit World(int q) {
    scenario = hss::generate_topology(hss::NetworkConfig::reference(4), 11);
    csi = hss::build_csi(scenario, hss::ChannelParams{}, 11);
    bank = hss::draw_sample_bank(csi, q, 11);
    engine = std::make_unique<hss::RateEngine>(scenario, csi, bank, hss::RadioParams::reference(0.0));
  }
  static World& get() {
    static World w(200);
    return w;
  }
};

void BM_PairwiseDeltas(benchmark::State& state) {
  World& w = World::get();
  for (auto _ : state) {
    auto d = hss::PairwiseDeltas::compute(*w.engine, 1);
    benchmark::DoNotOptimize(d.su_delta(0, 0, 0));
  }
}
BENCHMARK(BM_PairwiseDeltas)->Unit(benchmark::kMillisecond);

void BM_HierarchicalSchedule(benchmark::State& state) {
  World& w = World::get();
  if (!w.deltas) w.deltas = std::make_unique<hss::PairwiseDeltas>(hss::PairwiseDeltas::compute(*w.engine, 1));
  for (auto _ : state) benchmark::DoNotOptimize(hss::hierarchical_schedule(*w.engine, *w.deltas).fine_iterations);
}
BENCHMARK(BM_HierarchicalSchedule)->Unit(benchmark::kMillisecond);

void BM_ScaSubcarrier(benchmark::State& state) {
  World& w = World::get();
  if (!w.deltas) w.deltas = std::make_unique<hss::PairwiseDeltas>(hss::PairwiseDeltas::compute(*w.engine, 1));
  const auto schedule = hss::hierarchical_schedule(*w.engine, *w.deltas);
  const auto sub = hss::build_subproblem(*w.engine, schedule, 0);
  for (auto _ : state) benchmark::DoNotOptimize(hss::sca_solve(sub).iterations);
}
BENCHMARK(BM_ScaSubcarrier)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
