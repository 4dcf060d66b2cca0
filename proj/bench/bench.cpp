// Serial vs OpenMP: label tally and per-entry corpus classification.
#include <benchmark/benchmark.h>

#include <random>

#include "ffc/dataset.hpp"
#include "ffc/stats.hpp"

using namespace ffc;

namespace {

std::vector<unsigned> random_masks(std::size_t n) {
  std::mt19937 rng(1234);
  std::uniform_int_distribution<unsigned> pick(1, 255);
  std::vector<unsigned> out(n);
  for (auto& m : out) m = pick(rng);
  return out;
}

// The golden corpus repeated `copies` times under fresh ids.
std::vector<dataset::FaultEntry> corpus(int copies) {
  auto base = dataset::load_manifest(std::filesystem::path(FFC_DATA_DIR) / "golden" / "manifest.json");
  std::vector<dataset::FaultEntry> out;
  for (int k = 0; k < copies; ++k) {
    for (auto e : base) {
      e.id += "#" + std::to_string(k);
      out.push_back(std::move(e));
    }
  }
  return out;
}

void BM_TallySerial(benchmark::State& state) {
  auto masks = random_masks(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(stats::tally_serial(masks));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_TallyParallel(benchmark::State& state) {
  auto masks = random_masks(static_cast<std::size_t>(state.range(0)));
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(stats::tally_parallel(masks, threads));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ClassifySerial(benchmark::State& state) {
  auto entries = corpus(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dataset::classify_corpus_serial(entries));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(entries.size()));
}

void BM_ClassifyParallel(benchmark::State& state) {
  auto entries = corpus(static_cast<int>(state.range(0)));
  dataset::CorpusOptions opt;
  opt.jobs = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(dataset::classify_corpus(entries, opt));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(entries.size()));
}

}  // namespace

BENCHMARK(BM_TallySerial)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TallyParallel)->Args({1 << 20, 1})->Args({1 << 20, 2})->Args({1 << 20, 4})->Args({1 << 20, 8})
    ->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ClassifySerial)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClassifyParallel)->Args({8, 1})->Args({8, 2})->Args({8, 4})->Args({8, 8})
    ->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
