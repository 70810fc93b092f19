#include <benchmark/benchmark.h>

#include <random>

#include "evotest/actor.hpp"
#include "evotest/adversary.hpp"
#include "evotest/archive.hpp"
#include "evotest/critic.hpp"
#include "evotest/stopping.hpp"

namespace {

using namespace evotest;

void BM_Score(benchmark::State& state) {
  const CriticParams p;
  double c = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(score({c, 0.85, 0.7}, p));
    c = c > 0.9 ? 0.1 : c + 0.01;
  }
}
BENCHMARK(BM_Score);

void BM_UpdateArchive(benchmark::State& state) {
  const auto batch_size = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::vector<ScoredCase> batch;
  for (int i = 0; i < batch_size; ++i) {
    batch.push_back({{"f", {{"x", static_cast<int>(rng() % 1000)}, {"y", "s"}}},
                     static_cast<double>(rng() % 100) / 100.0, 2, std::nullopt});
  }
  EliteArchive base(20);
  std::vector<ScoredCase> seed(batch.begin(), batch.begin() + batch_size / 2);
  base = update_archive(base, seed);
  for (auto _ : state) benchmark::DoNotOptimize(update_archive(base, batch));
}
BENCHMARK(BM_UpdateArchive)->Arg(10)->Arg(50)->Arg(200);

void BM_StopCondition(benchmark::State& state) {
  std::vector<double> rewards(static_cast<std::size_t>(state.range(0)), 0.1);
  const StopConfig cfg{1e9, 0.02, 3, 1000};
  for (auto _ : state) {
    benchmark::DoNotOptimize(stop_condition(rewards, static_cast<int>(rewards.size()), cfg));
  }
}
BENCHMARK(BM_StopCondition)->Arg(12)->Arg(1000);

void BM_ColdStart(benchmark::State& state) {
  std::vector<FunctionSignature> sigs;
  for (int i = 0; i < state.range(0); ++i) {
    sigs.push_back({"f" + std::to_string(i), {"a", "b", "c"}, i * 5 + 1, i * 5 + 4});
  }
  for (auto _ : state) benchmark::DoNotOptimize(cold_start(sigs));
}
BENCHMARK(BM_ColdStart)->Arg(1)->Arg(5)->Arg(20);

void BM_ExtractJson(benchmark::State& state) {
  std::string text = "Here are the cases you asked for.\n```json\n{\"f\": [";
  for (int i = 0; i < 100; ++i) {
    text += (i ? "," : "") + std::string("{\"x\": ") + std::to_string(i) + ", \"s\": \"{}\"}";
  }
  text += "]}\n```\nLet me know if you need more.";
  for (auto _ : state) benchmark::DoNotOptimize(extract_json_object(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ExtractJson);

void BM_SampleMutants(benchmark::State& state) {
  std::vector<MutantDescriptor> pool(30);
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i].id = "m" + std::to_string(i);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_mutants(pool, 5, seed++));
}
BENCHMARK(BM_SampleMutants);

}  // namespace
BENCHMARK_MAIN();
