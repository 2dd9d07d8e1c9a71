#include <benchmark/benchmark.h>

#include <vector>

#include "elkbc/closure.hpp"
#include "elkbc/losses.hpp"
#include "elkbc/ranking.hpp"
#include "elkbc/sampler.hpp"
#include "elkbc/synthetic.hpp"

namespace elkbc {
namespace {

Theory synthetic(std::size_t concepts) {
  SyntheticConfig c;
  c.concepts = concepts;
  return synthetic_ontology(c);
}

void BM_OracleClosure(benchmark::State& state) {
  const Theory t = synthetic(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(DeductiveClosure::compute(t));
}
BENCHMARK(BM_OracleClosure)->RangeMultiplier(4)->Range(64, 4096)->Unit(benchmark::kMillisecond);

void BM_MaterializedClosure(benchmark::State& state) {
  const Theory t = synthetic(static_cast<std::size_t>(state.range(0)));
  ClosureOptions o;
  o.mode = ClosureMode::kMaterialized;
  for (auto _ : state) benchmark::DoNotOptimize(DeductiveClosure::compute(t, o));
}
BENCHMARK(BM_MaterializedClosure)->RangeMultiplier(4)->Range(64, 256)->Unit(benchmark::kMillisecond);

void BM_AxiomLossWithGradient(benchmark::State& state) {
  const auto kind = static_cast<ModelKind>(state.range(0));
  Hyperparameters hp;
  hp.dim = static_cast<std::size_t>(state.range(1));
  GeometricModel m(kind, 16, 2, hp);
  Rng rng(1);
  m.initialize(rng);
  ParameterSet grad = m.params();
  const LossRequest req{NormalizedAxiom::gci2(3, 1, 7), Polarity::kNegative};
  for (auto _ : state) benchmark::DoNotOptimize(axiom_loss(m, req, &grad));
}
BENCHMARK(BM_AxiomLossWithGradient)->ArgsProduct({{0, 1, 2}, {50, 200}});

void BM_FilteredSampling(benchmark::State& state) {
  const Theory t = synthetic(512);
  const auto dc = DeductiveClosure::compute(t);
  SamplerConfig c;
  c.mode = SamplerMode::kFiltered;
  const NegativeSampler sampler(c, t.signature().concept_count(), &dc);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_batch(t.axioms(), 1, sampler, ++seed));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * t.size()));
}
BENCHMARK(BM_FilteredSampling)->Unit(benchmark::kMillisecond);

void BM_Ranking(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  RankingTask task;
  for (std::size_t c = 0; c < n; ++c) task.pool.push_back(static_cast<ConceptId>(c));
  for (std::size_t i = 0; i < 100; ++i) {
    task.test.push_back(NormalizedAxiom::gci0(static_cast<ConceptId>(i % n), static_cast<ConceptId>((i * 7) % n)));
  }
  task.signature_concepts = n;
  const auto score = [](const NormalizedAxiom& ax, ConceptId c) {
    return static_cast<double>((ax.slots[0] * 31 + c * 17) % 101);
  };
  for (auto _ : state) benchmark::DoNotOptimize(rank_axioms(task, score));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * 100 * n));
}
BENCHMARK(BM_Ranking)->RangeMultiplier(8)->Range(128, 8192)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace elkbc

BENCHMARK_MAIN();
