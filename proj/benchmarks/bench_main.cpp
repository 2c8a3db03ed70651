#include <benchmark/benchmark.h>

#include <vector>

#include "nmarank/distributions.hpp"
#include "nmarank/graph.hpp"
#include "nmarank/league.hpp"
#include "nmarank/posterior.hpp"
#include "nmarank/sampler.hpp"
#include "nmarank/simulation.hpp"

using namespace nmarank;

namespace {

const Dataset& simulated() {
  static const Dataset data = [] {
    Rng rng(17);
    return generate_dataset(scenario_catalog()[15], bundled_template(), rng).data;
  }();
  return data;
}

const PosteriorSamples& fitted() {
  static const PosteriorSamples ps = [] {
    McmcConfig mc;
    mc.chains = 2;
    mc.iterations = 4000;
    mc.burn_in = 2000;
    mc.thin = 2;
    mc.jobs = 1;
    PriorConfig pc;
    pc.v0 = 0.05;
    return run_chains(simulated(), pc, mc, ModelKind::DpSpikeSlab);
  }();
  return ps;
}

}  // namespace

static void BM_EquicorrLogpdf(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  const EquicorrSpec spec{t, 0.01, 0.5};
  std::vector<double> x(t), mean(t);
  for (int i = 0; i < t; ++i) {
    x[i] = 0.1 * i;
    mean[i] = 0.05 * i;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(equicorr_mvn_logpdf(x, mean, spec));
  }
}
BENCHMARK(BM_EquicorrLogpdf)->Arg(1)->Arg(2)->Arg(5);

static void BM_Sweep(benchmark::State& state) {
  const auto kind = static_cast<ModelKind>(state.range(0));
  PriorConfig pc;
  pc.v0 = 0.05;
  const Sampler s(simulated(), pc, kind);
  Rng rng(3);
  ChainState st = s.init_chain(rng);
  AcceptanceStats acc;
  for (auto _ : state) s.sweep(st, {}, rng, acc);
  state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_Sweep)->DenseRange(0, 2);

static void BM_RankPipeline(benchmark::State& state) {
  const PosteriorSamples& ps = fitted();
  for (auto _ : state) {
    const RelationSample rs(ps);
    benchmark::DoNotOptimize(rank_posterior(rs));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(ps.size()));
}
BENCHMARK(BM_RankPipeline)->Unit(benchmark::kMillisecond);

static void BM_LeagueTable(benchmark::State& state) {
  const PosteriorSamples& ps = fitted();
  for (auto _ : state) benchmark::DoNotOptimize(league_table(ps, 0.05));
}
BENCHMARK(BM_LeagueTable)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
