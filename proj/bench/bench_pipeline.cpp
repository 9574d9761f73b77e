// Serial reference vs OpenMP pipeline over synthetic ~30-cell tables, plus the
// parser on its own.

#include <benchmark/benchmark.h>

#include "support/generators.hpp"
#include "tabformula/pipeline.hpp"

namespace {

using namespace tabformula;

const std::vector<Table>& corpus() {
  static const std::vector<Table> tables = [] {
    testing::Gen g(2024);
    std::vector<Table> out;
    for (int i = 0; i < 1000; ++i) out.push_back(testing::small_table(g, "b" + std::to_string(i)));
    return out;
  }();
  return tables;
}

void BM_PipelineSerial(benchmark::State& state) {
  const Vocab vocab = Vocab::builtin();
  PipelineConfig cfg;
  cfg.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(process_tables_serial(corpus(), vocab, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus().size()));
}
BENCHMARK(BM_PipelineSerial)->Unit(benchmark::kMillisecond);

void BM_PipelineParallel(benchmark::State& state) {
  const Vocab vocab = Vocab::builtin();
  PipelineConfig cfg;
  cfg.seed = 1;
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(process_tables_parallel(corpus(), vocab, cfg, threads));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus().size()));
}
BENCHMARK(BM_PipelineParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_StatsOnly(benchmark::State& state) {
  const Vocab vocab = Vocab::builtin();
  PipelineConfig cfg;
  cfg.emit_samples = false;
  for (auto _ : state) benchmark::DoNotOptimize(process_tables_serial(corpus(), vocab, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus().size()));
}
BENCHMARK(BM_StatsOnly)->Unit(benchmark::kMillisecond);

void BM_ParsePrefix(benchmark::State& state) {
  testing::Gen g(7);
  std::vector<std::string> texts;
  for (int i = 0; i < 1000; ++i) texts.push_back(render_infix(testing::random_ast(g)));
  for (auto _ : state) {
    for (const auto& t : texts) benchmark::DoNotOptimize(to_prefix(parse(t)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(texts.size()));
}
BENCHMARK(BM_ParsePrefix);

}  // namespace

BENCHMARK_MAIN();
